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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dressim/core.hpp"
#include "dressim/dynamics.hpp"
#include "dressim/model.hpp"

namespace dressim {

// ---------------------------------------------------------------------------
// Initialisation and readout ramps

enum class RampDirection { Init, Readout };

/**
 * Linear eps ramp. Init runs positive to negative (S(0,2) into the (1,1)
 * charge state), readout the reverse.
 */
struct RampSpec {
  double eps_start = 0.0;
  double eps_end = 0.0;
  double ramp_time = 0.0;
  RampDirection direction = RampDirection::Init;

  void validate() const;
};

/** Default endpoints: +50 GHz -> -1500 GHz for init, the reverse for
 * readout. */
inline constexpr double kRampEpsHigh = 50e9;
inline constexpr double kRampEpsLow = -1500e9;
RampSpec init_ramp(double ramp_time);
RampSpec readout_ramp_spec(double ramp_time);

struct RampResult {
  /** DressedST5 order: S(0,2), T+, S(1,1), T0, T-. */
  RVector populations;
  bool converged = false;
  double estimated_error = 0.0;
  std::size_t steps_used = 0;
};

/** Starts in the instantaneous ground state at eps_start and ramps eps
 * linearly on the Dressed5 model. */
RampResult initialize_ramp(const DoubleDotParams& dd, const RampSpec& ramp,
                           const StepControl& ctrl);

/** initialize_ramp for each ramp time; results are in input order.
 * threads == 0 uses the hardware concurrency. */
std::vector<RampResult> ramp_time_sweep(const DoubleDotParams& dd,
                                        const RampSpec& ramp_template,
                                        std::span<const double> ramp_times,
                                        const StepControl& ctrl,
                                        unsigned threads = 1);

struct ReadoutResult {
  double p_singlet = 0.0;  // final S(0,2) population
  bool converged = false;
  double estimated_error = 0.0;
};

/** psi in Dressed5 or DressedST5. */
ReadoutResult readout_ramp(const DoubleDotParams& dd, const RampSpec& ramp,
                           const StateVector& psi, const StepControl& ctrl);

// ---------------------------------------------------------------------------
// Single-qubit gates

enum class GateScheme { FSK, FM };

struct GateCalibration {
  double delta = 0.0;  // Hz
  double phase = 0.0;  // rad
  std::optional<double> f_N;
};

struct GateReport {
  UnitaryOperator achieved;  // logical frame
  UnitaryOperator target;
  double fidelity = 0.0;
  double duration = 0.0;
  GateCalibration calibration;
  bool converged = false;
  std::vector<std::string> warnings;
};

/** exp(-i angle/2 (cos(phase) X + sin(phase) Y)) in the logical frame. */
UnitaryOperator logical_rotation(double phase, double angle);

/**
 * Dressed-frame propagator u (duration t) seen from the logical frame that
 * rotates at frame_frequency about the dressed z axis.
 */
UnitaryOperator to_logical_frame(const UnitaryOperator& u,
                                 double frame_frequency, double t);

/** Default FSK frame: sqrt(omega_R^2 + delta^2). */
double default_fsk_frame(double omega_R, double delta);

/** Square keying delta_nu = +-delta following the sign of
 * sin(2 pi f_N t + phase). */
GateReport fsk_gate(double omega_R, double delta, double f_N, double phase,
                    double duration, const StepControl& ctrl,
                    double target_angle = kPi / 2);

/** delta_nu = delta sin(2 pi omega_R t + phase). */
GateReport fm_gate(double omega_R, double delta, double phase, double duration,
                   const StepControl& ctrl, double target_angle = kPi / 2);

struct CalibrationResult {
  double duration = 0.0;
  double fidelity = 0.0;
};

/**
 * Shortest duration in (0, 4/delta] that maximises the gate fidelity against
 * the target rotation: uniform scan of one trajectory, then golden-section
 * refinement to 1e-4 relative. Throws CalibrationFailed if delta <= 0 or no
 * point exceeds fidelity 0.5. f_N only applies to FSK (default frame if
 * unset).
 */
CalibrationResult calibrate_gate(GateScheme scheme, double omega_R,
                                 double delta, double phase,
                                 double target_angle,
                                 const StepControl& ctrl = {},
                                 std::optional<double> f_N = std::nullopt);

// ---------------------------------------------------------------------------
// Exchange / Ising crossover

/** How a ratio r = (dnu1 - dnu2) / omega_R is split between the qubits. */
enum class DetuningConvention {
  Delta2Zero,  // dnu1 = r omega_R, dnu2 = 0
  Delta1Zero,  // dnu1 = 0, dnu2 = -r omega_R
};

struct CrossoverPoint {
  double t_c = 0.0;
  double ratio = 0.0;
  double theta = 0.0;  // NaN unless status == "ok"
  std::string status;  // ok | out_of_regime | undefined_axis
};

/** Row-major over (t_c, ratio), t_c outermost. */
std::vector<CrossoverPoint> crossover_sweep(std::span<const double> t_c_values,
                                            std::span<const double> ratios,
                                            DetuningConvention convention,
                                            double U, double eps,
                                            double omega_R);

// ---------------------------------------------------------------------------
// Circuits on the logical two-qubit space {00, 01, 10, 11}, |0> = |z>

struct SingleGate {
  int qubit = 1;  // 1 or 2
  char axis = 'z';
  double angle = 0.0;
};
struct SqrtSwapGate {};
struct SwapGate {};
struct CPhaseGate {
  double phi = 0.0;
};

using CircuitGate = std::variant<SingleGate, SqrtSwapGate, SwapGate, CPhaseGate>;

/** gates[0] acts first. */
struct Circuit {
  std::vector<CircuitGate> gates;
};

/** Tagged Dressed4 (T+ = zz, zzbar, zbarz, T- = zbarzbar). */
UnitaryOperator circuit_unitary(const Circuit& c);

namespace gates {
CMatrix sqrt_swap();
CMatrix swap();
CMatrix cphase(double phi);
CMatrix cnot();
/** Flips the target when the control is |+>. */
CMatrix cnot_x();
/** Applies Y to the target when the control is |+i>. */
CMatrix cy_y();
}  // namespace gates

/** Keys: "CNOT", "CNOT_X", "CY_Y". */
std::map<std::string, Circuit> builtin_decompositions();
/** Target matrix for a builtin decomposition name. */
UnitaryOperator decomposition_target(const std::string& name);

// ---------------------------------------------------------------------------
// Schrieffer-Wolff validation

struct SwValidation {
  RVector reduced;  // ascending, Hz
  RVector full;     // matched full-model eigenvalues, ascending
  double relative_error = 0.0;
  bool sw_valid = false;      // t_c < U -/+ eps
  bool perturbative = false;  // t_c / (U - |eps|) <= kSwPerturbativeLimit
  std::string status;         // ok | out_of_regime | unsupported | ...
};

inline constexpr double kSwPerturbativeLimit = 0.1;

/**
 * Compares the closed-form reduced spectrum with the two Dressed6
 * eigenvalues whose eigenvectors weigh most on {z zbar, zbar z}.
 */
SwValidation sw_validation(const DoubleDotParams& dd);

struct SwDraw {
  DoubleDotParams params;
  double t_c_over_U = 0.0;
  SwValidation result;
};

struct SwRandomReport {
  std::vector<SwDraw> draws;
  std::vector<double> bin_edges;    // t_c / U decade bins
  std::vector<double> bin_medians;  // median relative error per bin
  double max_error = 0.0;
};

/**
 * Seeded random parameter draws with t_c/U log-uniform in [1e-3, 5e-2];
 * see the README for the full distribution.
 */
SwRandomReport sw_random_validation(std::size_t n_draws, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rotating-wave cross-check

struct RwaReport {
  std::vector<double> times;
  std::vector<double> p_down_lab;
  std::vector<double> p_down_rot;
  double max_deviation = 0.0;
  bool converged = false;
};

/** Lab2 (full cosine drive) vs Rot2 (RWA), both from |up>, populations
 * compared at n_samples + 1 evenly spaced times. Needs g, B0, B1, f_mw. */
RwaReport rwa_crosscheck(const SingleQubitParams& p, double duration,
                         const StepControl& ctrl, std::size_t n_samples = 200);

// ---------------------------------------------------------------------------
// Exchange gate on the six-level model

struct ExchangeGateReport {
  /** Closest unitary to the logical block, in the frame of the bare dressed
   * qubits (local dressed-z precession removed). Dressed4 order. */
  UnitaryOperator achieved;
  double fidelity = 0.0;
  double leakage = 0.0;  // 1 - |logical block|_F^2 / 4
  double duration = 0.0;
};

/** Duration of a sqrt(SWAP) from the reduced exchange A: 1 / (8 A). */
double sqrt_swap_duration(const DoubleDotParams& dd);

/** Evolves Dressed6 at constant parameters for `duration` and compares the
 * logical block to `target` (Dressed4). */
ExchangeGateReport exchange_gate(const DoubleDotParams& dd, double duration,
                                 const UnitaryOperator& target,
                                 const StepControl& ctrl = {});

}  // namespace dressim
