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

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace dressim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/**
 * Basis tags. Every state and operator carries exactly one, and the tag fixes
 * both the dimension and the ket ordering:
 *
 *   Lab2, Rot2    {up, down}
 *   Dressed2      {z, zbar}
 *   Singlet2      {S(1,1), S(0,2)}
 *   Rot4          {up up, up down, down up, down down}   (qubit 1 left)
 *   Dressed4      {T+, z zbar, zbar z, T-}
 *   Dressed5      {S(0,2), T+, z zbar, zbar z, T-}
 *   DressedST5    {S(0,2), T+, S(1,1), T0, T-}
 *   Dressed6      {z zbar, zbar z, T-, T+, S(0,2), S(2,0)}
 *   Exchange2     {z zbar, zbar z}
 */
enum class Basis {
  Lab2,
  Rot2,
  Dressed2,
  Rot4,
  Dressed4,
  Singlet2,
  Dressed5,
  DressedST5,
  Dressed6,
  Exchange2,
};

std::size_t dimension(Basis basis);
std::string_view basis_name(Basis basis);
/** Short ASCII ket labels in basis order (used for CSV column names). */
std::span<const std::string_view> ket_labels(Basis basis);

class StateVector {
 public:
  /** Normalisation is checked, not applied. */
  StateVector(CVector amplitudes, Basis basis);

  static StateVector basis_state(Basis basis, std::size_t index);
  /** Normalises first; for building superpositions by hand. */
  static StateVector normalized(CVector amplitudes, Basis basis);

  const CVector& amplitudes() const { return amps_; }
  Basis basis() const { return basis_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  RVector populations() const;
  double norm() const { return amps_.norm(); }

 private:
  CVector amps_;
  Basis basis_;
};

/** H/h in Hz. */
class HermitianOperator {
 public:
  HermitianOperator(CMatrix entries, Basis basis);

  const CMatrix& matrix() const { return m_; }
  Basis basis() const { return basis_; }
  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  CMatrix m_;
  Basis basis_;
};

/** Largest max |U^dagger U - I| accepted by UnitaryOperator. */
inline constexpr double kUnitarityTolerance = 1e-9;

class UnitaryOperator {
 public:
  UnitaryOperator(CMatrix entries, Basis basis);

  static UnitaryOperator identity(Basis basis);

  const CMatrix& matrix() const { return m_; }
  Basis basis() const { return basis_; }
  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }

  UnitaryOperator adjoint() const;
  StateVector apply(const StateVector& psi) const;

 private:
  CMatrix m_;
  Basis basis_;
};

/** Matrix product a*b; both must share a basis. */
UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

struct EigenDecomposition {
  RVector values;           // ascending
  UnitaryOperator vectors;  // columns are eigenvectors
};

EigenDecomposition eigh(const HermitianOperator& h);

/** exp(-i 2 pi (H/h) t), t in seconds. */
UnitaryOperator propagator(const HermitianOperator& h, double t);

/** Kronecker product, qubit 1 (a) as the left factor. */
CMatrix kron(const CMatrix& a, const CMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
UnitaryOperator tensor(const UnitaryOperator& a, const UnitaryOperator& b);

/** |Tr(V^dagger U)|^2 / d^2. */
double gate_fidelity(const UnitaryOperator& u, const UnitaryOperator& v);

/** Conjugate a matrix by a change of basis: w^dagger m w. */
CMatrix change_basis(const CMatrix& m, const CMatrix& w);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
/** (1/sqrt 2)[[1,1],[1,-1]] */
CMatrix hadamard();
/** exp(-i angle/2 (n . sigma)) for unit axis n. */
CMatrix rotation(const std::array<double, 3>& axis, double angle);
}  // namespace pauli

}  // namespace dressim
