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

#include "dressim/core.hpp"

#include <cmath>
#include <fmt/format.h>

#include "dressim/errors.hpp"

namespace dressim {

namespace {

constexpr std::array<std::string_view, 2> kLab2{"up", "down"};
constexpr std::array<std::string_view, 2> kDressed2{"z", "zbar"};
constexpr std::array<std::string_view, 2> kSinglet2{"s11", "s02"};
constexpr std::array<std::string_view, 4> kRot4{"upup", "updown", "downup",
                                                 "downdown"};
constexpr std::array<std::string_view, 4> kDressed4{"tplus", "zzbar", "zbarz",
                                                     "tminus"};
constexpr std::array<std::string_view, 5> kDressed5{"s02", "tplus", "zzbar",
                                                     "zbarz", "tminus"};
constexpr std::array<std::string_view, 5> kDressedST5{"s02", "tplus", "s11",
                                                       "t0", "tminus"};
constexpr std::array<std::string_view, 6> kDressed6{
    "zzbar", "zbarz", "tminus", "tplus", "s02", "s20"};
constexpr std::array<std::string_view, 2> kExchange2{"zzbar", "zbarz"};

void require_dimension(const CMatrix& m, Basis basis, std::string_view what) {
  const auto d = static_cast<Eigen::Index>(dimension(basis));
  if (m.rows() != d || m.cols() != d) {
    throw ContractViolation(fmt::format("{}: {}x{} matrix does not fit basis {}",
                                        what, m.rows(), m.cols(),
                                        basis_name(basis)));
  }
}

Basis two_qubit_basis(Basis a, Basis b) {
  if (a == Basis::Rot2 && b == Basis::Rot2) return Basis::Rot4;
  if (a == Basis::Lab2 && b == Basis::Lab2) return Basis::Rot4;
  if (a == Basis::Dressed2 && b == Basis::Dressed2) return Basis::Dressed4;
  throw BasisMismatch(fmt::format("no two-qubit basis for {} (x) {}",
                                  basis_name(a), basis_name(b)));
}

}  // namespace

std::size_t dimension(Basis basis) { return ket_labels(basis).size(); }

std::string_view basis_name(Basis basis) {
  switch (basis) {
    case Basis::Lab2: return "Lab2";
    case Basis::Rot2: return "Rot2";
    case Basis::Dressed2: return "Dressed2";
    case Basis::Rot4: return "Rot4";
    case Basis::Dressed4: return "Dressed4";
    case Basis::Singlet2: return "Singlet2";
    case Basis::Dressed5: return "Dressed5";
    case Basis::DressedST5: return "DressedST5";
    case Basis::Dressed6: return "Dressed6";
    case Basis::Exchange2: return "Exchange2";
  }
  return "?";
}

std::span<const std::string_view> ket_labels(Basis basis) {
  switch (basis) {
    case Basis::Lab2:
    case Basis::Rot2: return kLab2;
    case Basis::Dressed2: return kDressed2;
    case Basis::Singlet2: return kSinglet2;
    case Basis::Rot4: return kRot4;
    case Basis::Dressed4: return kDressed4;
    case Basis::Dressed5: return kDressed5;
    case Basis::DressedST5: return kDressedST5;
    case Basis::Dressed6: return kDressed6;
    case Basis::Exchange2: return kExchange2;
  }
  return {};
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(CVector amplitudes, Basis basis)
    : amps_(std::move(amplitudes)), basis_(basis) {
  if (static_cast<std::size_t>(amps_.size()) != dimension(basis_)) {
    throw ContractViolation(fmt::format("state of length {} in basis {}",
                                        amps_.size(), basis_name(basis_)));
  }
  if (std::abs(amps_.norm() - 1.0) > 1e-10) {
    throw ContractViolation(
        fmt::format("state norm {:.15g} is not 1", amps_.norm()));
  }
}

StateVector StateVector::basis_state(Basis basis, std::size_t index) {
  const auto d = dimension(basis);
  if (index >= d) {
    throw ContractViolation(fmt::format("ket index {} out of range for {}",
                                        index, basis_name(basis)));
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {std::move(v), basis};
}

StateVector StateVector::normalized(CVector amplitudes, Basis basis) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ContractViolation("cannot normalise the zero vector");
  return {amplitudes / n, basis};
}

RVector StateVector::populations() const { return amps_.cwiseAbs2(); }

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(CMatrix entries, Basis basis)
    : m_(std::move(entries)), basis_(basis) {
  require_dimension(m_, basis_, "HermitianOperator");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw ContractViolation(
        fmt::format("matrix is not Hermitian (max |M - M^dagger| = {:.3g})",
                    asym));
  }
}

// ---------------------------------------------------------------------------
// UnitaryOperator

UnitaryOperator::UnitaryOperator(CMatrix entries, Basis basis)
    : m_(std::move(entries)), basis_(basis) {
  require_dimension(m_, basis_, "UnitaryOperator");
  const auto d = m_.rows();
  const double dev =
      (m_.adjoint() * m_ - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kUnitarityTolerance) {
    throw ContractViolation(
        fmt::format("matrix is not unitary (max |U^dagger U - I| = {:.3g})",
                    dev));
  }
}

UnitaryOperator UnitaryOperator::identity(Basis basis) {
  const auto d = static_cast<Eigen::Index>(dimension(basis));
  return {CMatrix::Identity(d, d), basis};
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return {m_.adjoint(), basis_};
}

StateVector UnitaryOperator::apply(const StateVector& psi) const {
  if (psi.basis() != basis_) {
    throw BasisMismatch(fmt::format("cannot apply {} operator to {} state",
                                    basis_name(basis_),
                                    basis_name(psi.basis())));
  }
  CVector out = m_ * psi.amplitudes();
  // Re-normalise away rounding so long products stay inside the invariant.
  return StateVector::normalized(std::move(out), basis_);
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.basis() != b.basis()) {
    throw BasisMismatch(fmt::format("product of {} and {} operators",
                                    basis_name(a.basis()),
                                    basis_name(b.basis())));
  }
  return {a.matrix() * b.matrix(), a.basis()};
}

// ---------------------------------------------------------------------------
// Spectral routines

EigenDecomposition eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ContractViolation("eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), UnitaryOperator(solver.eigenvectors(),
                                                h.basis())};
}

UnitaryOperator propagator(const HermitianOperator& h, double t) {
  if (!(t >= 0.0)) {
    throw ContractViolation(fmt::format("propagator time {} < 0", t));
  }
  const auto d = static_cast<Eigen::Index>(h.size());
  if (t == 0.0) return UnitaryOperator::identity(h.basis());
  const auto dec = eigh(h);
  CVector phases(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    phases(k) = std::exp(-kI * (2.0 * kPi * dec.values(k) * t));
  }
  const CMatrix& v = dec.vectors.matrix();
  return {v * phases.asDiagonal() * v.adjoint(), h.basis()};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw ContractViolation("tensor product of non-square matrices");
  }
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a,
                         const HermitianOperator& b) {
  return {kron(a.matrix(), b.matrix()), two_qubit_basis(a.basis(), b.basis())};
}

UnitaryOperator tensor(const UnitaryOperator& a, const UnitaryOperator& b) {
  return {kron(a.matrix(), b.matrix()), two_qubit_basis(a.basis(), b.basis())};
}

double gate_fidelity(const UnitaryOperator& u, const UnitaryOperator& v) {
  if (u.size() != v.size()) {
    throw ContractViolation(fmt::format("gate_fidelity: dimensions {} vs {}",
                                        u.size(), v.size()));
  }
  const double d = static_cast<double>(u.size());
  const Complex tr = (v.matrix().adjoint() * u.matrix()).trace();
  return std::min(1.0, std::norm(tr) / (d * d));
}

CMatrix change_basis(const CMatrix& m, const CMatrix& w) {
  return w.adjoint() * m * w;
}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

CMatrix rotation(const std::array<double, 3>& axis, double angle) {
  const double n =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (n == 0.0) throw ContractViolation("rotation about a zero axis");
  const CMatrix gen = (axis[0] * x() + axis[1] * y() + axis[2] * z()) / n;
  return std::cos(angle / 2) * identity() - kI * std::sin(angle / 2) * gen;
}

}  // namespace pauli

}  // namespace dressim
