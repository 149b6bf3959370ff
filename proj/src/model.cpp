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

#include "dressim/model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "dressim/errors.hpp"

namespace dressim {

namespace {

const double kSqrt2 = std::sqrt(2.0);

CMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void require_dressing(double omega, std::string_view which) {
  if (!(omega > 0.0)) {
    throw ContractViolation(
        fmt::format("{} must be > 0 to define a dressed basis (got {})", which,
                    omega));
  }
}

template <class T>
T require(const std::optional<T>& v, std::string_view name) {
  if (!v) {
    throw ConfigurationError(fmt::format("missing parameter '{}'", name));
  }
  return *v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter sets

SingleQubitParams SingleQubitParams::from_lab(double g, double B0, double B1,
                                              double f_mw) {
  SingleQubitParams p;
  p.g = g;
  p.B0 = B0;
  p.B1 = B1;
  p.f_mw = f_mw;
  p.nu = g * kBohrMagnetonOverH * B0;
  p.delta_nu = *p.nu - f_mw;
  p.omega_R = g * kBohrMagnetonOverH * B1 / 2.0;
  return p;
}

void SingleQubitParams::validate() const {
  if (nu && f_mw) {
    const double scale = std::max(std::abs(*nu), std::abs(*f_mw));
    if (std::abs(delta_nu - (*nu - *f_mw)) > 1e-9 * scale) {
      throw ContractViolation(fmt::format(
          "delta_nu = {} Hz disagrees with nu - f_mw = {} Hz", delta_nu,
          *nu - *f_mw));
    }
  }
}

bool DoubleDotParams::sw_valid() const {
  if (!U) return false;
  return t_c < *U - std::abs(eps) && t_c < *U + std::abs(eps);
}

double generalized_rabi(double omega_R, double delta_nu) {
  return std::hypot(omega_R, delta_nu);
}

// ---------------------------------------------------------------------------
// Hamiltonians

HermitianOperator build_hamiltonian(Basis basis, const SingleQubitParams& p,
                                    double t) {
  p.validate();
  switch (basis) {
    case Basis::Lab2: {
      const double g = require(p.g, "g");
      const double B0 = require(p.B0, "B0");
      const double B1 = require(p.B1, "B1");
      const double f = require(p.f_mw, "f_mw");
      const double scale = g * kBohrMagnetonOverH / 2.0;
      CMatrix m = scale * (B0 * pauli::z() +
                           B1 * std::cos(2.0 * kPi * f * t) * pauli::x());
      return {std::move(m), basis};
    }
    case Basis::Rot2:
      return {0.5 * (p.delta_nu * pauli::z() + p.omega_R * pauli::x()), basis};
    case Basis::Dressed2:
      require_dressing(p.omega_R, "omega_R");
      return {0.5 * (p.omega_R * pauli::z() + p.delta_nu * pauli::x()), basis};
    default:
      throw BasisMismatch(fmt::format(
          "basis {} is not a single-qubit basis", basis_name(basis)));
  }
}

HermitianOperator build_hamiltonian(Basis basis, const DoubleDotParams& p) {
  const CMatrix I = pauli::identity();
  switch (basis) {
    case Basis::Rot4: {
      CMatrix m = p.delta_nu_1 * kron(pauli::z(), I) +
                  p.delta_nu_2 * kron(I, pauli::z()) +
                  p.omega_R1 * kron(pauli::x(), I) +
                  p.omega_R2 * kron(I, pauli::x());
      return {0.5 * m, basis};
    }
    case Basis::Dressed4: {
      require_dressing(p.omega_R1, "omega_R1");
      require_dressing(p.omega_R2, "omega_R2");
      CMatrix m = p.omega_R1 * kron(pauli::z(), I) +
                  p.omega_R2 * kron(I, pauli::z()) +
                  p.delta_nu_1 * kron(pauli::x(), I) +
                  p.delta_nu_2 * kron(I, pauli::x());
      return {0.5 * m, basis};
    }
    case Basis::Singlet2: {
      CMatrix m = from_rows({{0.0, 2.0 * p.t_c}, {2.0 * p.t_c, -2.0 * p.eps}});
      return {0.5 * m, basis};
    }
    case Basis::Dressed5: {
      require_dressing(p.omega_R1, "omega_R1");
      require_dressing(p.omega_R2, "omega_R2");
      const double s = kSqrt2 * p.t_c;
      const double d1 = p.delta_nu_1;
      const double d2 = p.delta_nu_2;
      const double sum = p.omega_R1 + p.omega_R2;
      const double diff = p.omega_R1 - p.omega_R2;
      CMatrix m = from_rows({
          {-2.0 * p.eps, 0.0, s, -s, 0.0},
          {0.0, sum, d2, d1, 0.0},
          {s, d2, diff, 0.0, d1},
          {-s, d1, 0.0, -diff, d2},
          {0.0, 0.0, d1, d2, -sum},
      });
      return {0.5 * m, basis};
    }
    case Basis::DressedST5:
      return to_singlet_triplet(build_hamiltonian(Basis::Dressed5, p));
    case Basis::Dressed6: {
      require_dressing(p.omega_R1, "omega_R1");
      require_dressing(p.omega_R2, "omega_R2");
      const double U = require(p.U, "U");
      const double s = kSqrt2 * p.t_c;
      const double d1 = p.delta_nu_1;
      const double d2 = p.delta_nu_2;
      const double sum = p.omega_R1 + p.omega_R2;
      const double diff = p.omega_R1 - p.omega_R2;
      // z zbar couples to T- through qubit 1's flip and to T+ through qubit
      // 2's, as in the Dressed4 / Dressed5 blocks.
      CMatrix m = from_rows({
          {diff, 0.0, d1, d2, -s, -s},
          {0.0, -diff, d2, d1, s, s},
          {d1, d2, -sum, 0.0, 0.0, 0.0},
          {d2, d1, 0.0, sum, 0.0, 0.0},
          {-s, s, 0.0, 0.0, 2.0 * (U - p.eps), 0.0},
          {-s, s, 0.0, 0.0, 0.0, 2.0 * (U + p.eps)},
      });
      return {0.5 * m, basis};
    }
    default:
      throw BasisMismatch(fmt::format(
          "basis {} is not a double-dot basis", basis_name(basis)));
  }
}

HermitianOperator hadamard_conjugate(const HermitianOperator& op) {
  CMatrix u;
  Basis out;
  switch (op.basis()) {
    case Basis::Rot2:
      u = pauli::hadamard();
      out = Basis::Dressed2;
      break;
    case Basis::Rot4:
      u = kron(pauli::hadamard(), pauli::hadamard());
      out = Basis::Dressed4;
      break;
    default:
      throw BasisMismatch(fmt::format(
          "hadamard_conjugate needs Rot2 or Rot4, got {}",
          basis_name(op.basis())));
  }
  CMatrix m = u * op.matrix() * u.adjoint();
  return {std::move(m), out};
}

// ---------------------------------------------------------------------------
// Singlet-triplet basis

CMatrix singlet_triplet_isometry() {
  const double r = 1.0 / kSqrt2;
  return from_rows({
      {1, 0, 0, 0, 0},
      {0, 1, 0, 0, 0},
      {0, 0, r, r, 0},
      {0, 0, -r, r, 0},
      {0, 0, 0, 0, 1},
  });
}

HermitianOperator to_singlet_triplet(const HermitianOperator& h5) {
  if (h5.basis() != Basis::Dressed5) {
    throw BasisMismatch(fmt::format("to_singlet_triplet needs Dressed5, got {}",
                                    basis_name(h5.basis())));
  }
  CMatrix m = change_basis(h5.matrix(), singlet_triplet_isometry());
  // Rounding in the conjugation can leave ~1e-17 anti-Hermitian residue.
  m = 0.5 * (m + m.adjoint()).eval();
  return {std::move(m), Basis::DressedST5};
}

StateVector to_singlet_triplet(const StateVector& psi5) {
  if (psi5.basis() != Basis::Dressed5) {
    throw BasisMismatch("to_singlet_triplet(state) needs Dressed5");
  }
  return StateVector::normalized(
      singlet_triplet_isometry().adjoint() * psi5.amplitudes(),
      Basis::DressedST5);
}

StateVector from_singlet_triplet(const StateVector& psi_st) {
  if (psi_st.basis() != Basis::DressedST5) {
    throw BasisMismatch("from_singlet_triplet needs DressedST5");
  }
  return StateVector::normalized(singlet_triplet_isometry() * psi_st.amplitudes(),
                                 Basis::Dressed5);
}

CMatrix tabulated_singlet_triplet(const DoubleDotParams& p) {
  const double r = 1.0 / kSqrt2;
  const double d1 = p.delta_nu_1;
  const double d2 = p.delta_nu_2;
  const double sum = p.omega_R1 + p.omega_R2;
  const double diff = p.omega_R1 - p.omega_R2;
  const double a = (-d1 + d2) * r;
  const double b = (d1 + d2) * r;
  const double c = (d1 - d2) * r;
  CMatrix m = from_rows({
      {-2.0 * p.eps, 0.0, 2.0 * p.t_c, 0.0, 0.0},
      {0.0, sum, a, b, 0.0},
      {2.0 * p.t_c, a, 0.0, diff, c},
      {0.0, b, diff, 0.0, b},
      {0.0, 0.0, c, b, -sum},
  });
  return 0.5 * m;
}

std::vector<EntryMismatch> singlet_triplet_discrepancies(
    const DoubleDotParams& p, double tol) {
  const CMatrix derived =
      build_hamiltonian(Basis::DressedST5, p).matrix();
  const CMatrix tab = tabulated_singlet_triplet(p);
  const double scale = std::max(derived.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<EntryMismatch> out;
  for (Eigen::Index i = 0; i < derived.rows(); ++i) {
    for (Eigen::Index j = 0; j < derived.cols(); ++j) {
      if (std::abs(derived(i, j) - tab(i, j)) > tol * scale) {
        out.push_back({static_cast<std::size_t>(i),
                       static_cast<std::size_t>(j), derived(i, j), tab(i, j)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schrieffer-Wolff

ReducedHamiltonian make_reduced(double A, double D) {
  CMatrix m = from_rows({{-A + D, A}, {A, -A - D}});
  return {A, D, HermitianOperator(std::move(m), Basis::Exchange2)};
}

namespace {

void check_sw_preconditions(const DoubleDotParams& p) {
  if (!p.U) throw ConfigurationError("missing parameter 'U'");
  if (!p.sw_valid()) {
    throw OutOfRegime(fmt::format(
        "Schrieffer-Wolff needs t_c < U -/+ eps (t_c={} U={} eps={})", p.t_c,
        *p.U, p.eps));
  }
  const double scale = std::max(std::abs(p.omega_R1), std::abs(p.omega_R2));
  if (std::abs(p.omega_R1 - p.omega_R2) > 1e-12 * scale) {
    throw UnsupportedAssumption(fmt::format(
        "reduced Hamiltonian assumes omega_R1 == omega_R2 (got {} vs {})",
        p.omega_R1, p.omega_R2));
  }
  require_dressing(p.omega_R1, "omega_R1");
}

}  // namespace

ReducedHamiltonian sw_reduced(const DoubleDotParams& p) {
  check_sw_preconditions(p);
  const double U = *p.U;
  const double A = p.t_c * p.t_c * U / (U * U - p.eps * p.eps);
  const double D = (p.delta_nu_1 * p.delta_nu_1 - p.delta_nu_2 * p.delta_nu_2) /
                   (4.0 * p.omega_R1);
  return make_reduced(A, D);
}

CMatrix schrieffer_wolff(const CMatrix& h,
                         const std::vector<std::size_t>& retained) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (h.rows() != h.cols()) throw ContractViolation("SW of non-square matrix");
  std::vector<bool> keep(n, false);
  for (auto m : retained) {
    if (m >= n) throw ContractViolation("SW retained index out of range");
    keep[m] = true;
  }
  std::vector<std::size_t> removed;
  for (std::size_t l = 0; l < n; ++l) {
    if (!keep[l]) removed.push_back(l);
  }
  const auto k = static_cast<Eigen::Index>(retained.size());
  CMatrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto m = static_cast<Eigen::Index>(retained[a]);
      const auto mp = static_cast<Eigen::Index>(retained[b]);
      const double em = h(m, m).real();
      const double emp = h(mp, mp).real();
      Complex v = h(m, mp);
      for (auto li : removed) {
        const auto l = static_cast<Eigen::Index>(li);
        const double el = h(l, l).real();
        if (em == el || emp == el) {
          throw OutOfRegime("SW energy denominator vanishes");
        }
        v += 0.5 * h(m, l) * h(l, mp) * (1.0 / (em - el) + 1.0 / (emp - el));
      }
      out(a, b) = v;
    }
  }
  return out;
}

ReducedHamiltonian sw_reduced_generic(const DoubleDotParams& p) {
  check_sw_preconditions(p);
  const CMatrix h6 = build_hamiltonian(Basis::Dressed6, p).matrix();
  CMatrix m = schrieffer_wolff(h6, {0, 1});
  m = 0.5 * (m + m.adjoint()).eval();
  const double A = m(0, 1).real();
  const double D = 0.5 * (m(0, 0) - m(1, 1)).real();
  return {A, D, HermitianOperator(std::move(m), Basis::Exchange2)};
}

double axis_angle(const ReducedHamiltonian& rh) {
  if (rh.A == 0.0 && rh.D == 0.0) {
    throw UndefinedAxis("axis_angle: A = D = 0");
  }
  return std::atan2(std::abs(rh.D), std::abs(rh.A));
}

// ---------------------------------------------------------------------------
// Named parameter access

double get_param(const SingleQubitParams& p, std::string_view name) {
  if (name == "delta_nu") return p.delta_nu;
  if (name == "omega_R") return p.omega_R;
  if (name == "f_mw") return require(p.f_mw, name);
  if (name == "nu") return require(p.nu, name);
  if (name == "B0") return require(p.B0, name);
  if (name == "B1") return require(p.B1, name);
  if (name == "g") return require(p.g, name);
  throw ConfigurationError(
      fmt::format("unknown single-qubit parameter '{}'", name));
}

double get_param(const DoubleDotParams& p, std::string_view name) {
  if (name == "delta_nu_1") return p.delta_nu_1;
  if (name == "delta_nu_2") return p.delta_nu_2;
  if (name == "omega_R1") return p.omega_R1;
  if (name == "omega_R2") return p.omega_R2;
  if (name == "t_c") return p.t_c;
  if (name == "eps") return p.eps;
  if (name == "U") return require(p.U, name);
  throw ConfigurationError(
      fmt::format("unknown double-dot parameter '{}'", name));
}

void set_param(SingleQubitParams& p, std::string_view name, double value) {
  if (name == "delta_nu") {
    p.delta_nu = value;
    // Keep the two detuning representations consistent.
    if (p.f_mw) p.nu = *p.f_mw + value;
  } else if (name == "omega_R") {
    p.omega_R = value;
  } else if (name == "B1") {
    p.B1 = value;
  } else if (name == "f_mw") {
    p.f_mw = value;
    if (p.nu) p.delta_nu = *p.nu - value;
  } else {
    throw ConfigurationError(fmt::format(
        "parameter '{}' cannot be driven by a waveform", name));
  }
}

void set_param(DoubleDotParams& p, std::string_view name, double value) {
  if (name == "delta_nu_1") p.delta_nu_1 = value;
  else if (name == "delta_nu_2") p.delta_nu_2 = value;
  else if (name == "omega_R1") p.omega_R1 = value;
  else if (name == "omega_R2") p.omega_R2 = value;
  else if (name == "t_c") p.t_c = value;
  else if (name == "eps") p.eps = value;
  else if (name == "U") p.U = value;
  else
    throw ConfigurationError(
        fmt::format("unknown double-dot parameter '{}'", name));
}

}  // namespace dressim
