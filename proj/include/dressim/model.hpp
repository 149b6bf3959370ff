// Copyright 2026 The dressim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dressim/core.hpp"

namespace dressim {

/** Bohr magneton over Planck constant, Hz/T (CODATA 2018). */
inline constexpr double kBohrMagnetonOverH = 9.2740100783e-24 / 6.62607015e-34;

/**
 * Single driven spin. All frequencies in Hz. The lab-frame fields are only
 * needed for Basis::Lab2.
 */
struct SingleQubitParams {
  double delta_nu = 0.0;  // nu - f_mw
  double omega_R = 0.0;
  std::optional<double> f_mw;
  std::optional<double> nu;
  std::optional<double> g;
  std::optional<double> B0;  // tesla
  std::optional<double> B1;  // tesla

  /** Builds the rotating-frame view of a lab-frame spin (nu and Omega_R from
   * g, B0, B1; Omega_R = g muB B1 / 2h under the rotating wave approximation).
   */
  static SingleQubitParams from_lab(double g, double B0, double B1,
                                    double f_mw);

  /** Throws ContractViolation when delta_nu disagrees with nu - f_mw. */
  void validate() const;
};

/** Double quantum dot with one dressed spin per dot. Frequencies in Hz. */
struct DoubleDotParams {
  double delta_nu_1 = 0.0;
  double delta_nu_2 = 0.0;
  double omega_R1 = 0.0;
  double omega_R2 = 0.0;
  double t_c = 0.0;
  double eps = 0.0;
  std::optional<double> U;

  /** t_c < U - |eps| and t_c < U + |eps|. False when U is unset. */
  bool sw_valid() const;
};

/** Generalised Rabi frequency sqrt(Omega_R^2 + delta_nu^2). */
double generalized_rabi(double omega_R, double delta_nu);

/** Lab2 needs the time t (seconds); the other single-qubit bases ignore it. */
HermitianOperator build_hamiltonian(Basis basis, const SingleQubitParams& p,
                                    double t = 0.0);

/** Rot4, Dressed4, Singlet2, Dressed5, DressedST5 or Dressed6. Dressed6
 * requires U. */
HermitianOperator build_hamiltonian(Basis basis, const DoubleDotParams& p);

/** Hadamard (Rot2) or Hadamard (x) Hadamard (Rot4) conjugation, U H U^dagger,
 * landing in Dressed2 / Dressed4. */
HermitianOperator hadamard_conjugate(const HermitianOperator& op);

/** Columns are the DressedST5 kets written in the Dressed5 basis:
 * S(1,1) = (z zbar - zbar z)/sqrt2, T0 = (z zbar + zbar z)/sqrt2. */
CMatrix singlet_triplet_isometry();

HermitianOperator to_singlet_triplet(const HermitianOperator& h5);
StateVector to_singlet_triplet(const StateVector& psi5);
StateVector from_singlet_triplet(const StateVector& psi_st);

/**
 * Closed-form singlet-triplet Hamiltonian written out entry by entry (the
 * tabulated form), independent of the basis-change route. Used to
 * cross-check to_singlet_triplet.
 */
CMatrix tabulated_singlet_triplet(const DoubleDotParams& p);

struct EntryMismatch {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex derived;
  Complex tabulated;
};

/** Entries where the basis-change result and the tabulated form differ by
 * more than tol (relative to the largest entry). */
std::vector<EntryMismatch> singlet_triplet_discrepancies(
    const DoubleDotParams& p, double tol = 1e-12);

/**
 * Effective Hamiltonian on {z zbar, zbar z} in H/h (Hz):
 *   [[-A + D, A], [A, -A - D]],
 *   A = t_c^2 U / (U^2 - eps^2),  D = (dnu1^2 - dnu2^2) / (4 Omega_R).
 */
struct ReducedHamiltonian {
  double A = 0.0;
  double D = 0.0;
  HermitianOperator matrix{CMatrix::Zero(2, 2), Basis::Exchange2};
};

ReducedHamiltonian make_reduced(double A, double D);

/** Closed form. Throws OutOfRegime / UnsupportedAssumption /
 * ConfigurationError (no U). */
ReducedHamiltonian sw_reduced(const DoubleDotParams& p);

/**
 * Second-order Schrieffer-Wolff reduction of an arbitrary Hermitian matrix
 * onto the kets listed in `retained`. H0 is the diagonal, H' everything else:
 *
 *   H_mm' = H0_mm' + H'_mm'
 *         + 1/2 sum_l H'_ml H'_lm' (1/(E_m - E_l) + 1/(E_m' - E_l))
 *
 * with l running over the removed kets.
 */
CMatrix schrieffer_wolff(const CMatrix& h,
                         const std::vector<std::size_t>& retained);

/** Same reduction as sw_reduced, obtained by applying schrieffer_wolff to the
 * Dressed6 Hamiltonian. A and D are read back from the 2x2 result. */
ReducedHamiltonian sw_reduced_generic(const DoubleDotParams& p);

/** Polar angle of the rotation axis on the S-T0 Bloch sphere,
 * atan2(|D|, |A|) in [0, pi/2]. 0 is pure exchange (SWAP), pi/2 pure Ising
 * (CPHASE). */
double axis_angle(const ReducedHamiltonian& rh);

/** Looks up a numeric field by name ("eps", "delta_nu_1", "omega_R", ...).
 * Unknown names throw ConfigurationError. */
double get_param(const SingleQubitParams& p, std::string_view name);
double get_param(const DoubleDotParams& p, std::string_view name);
void set_param(SingleQubitParams& p, std::string_view name, double value);
void set_param(DoubleDotParams& p, std::string_view name, double value);

}  // namespace dressim
