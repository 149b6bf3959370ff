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

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <random>

#include "dressim/errors.hpp"
#include "dressim/protocols.hpp"

namespace dressim {

// ---------------------------------------------------------------------------
// Crossover

std::vector<CrossoverPoint> crossover_sweep(std::span<const double> t_c_values,
                                            std::span<const double> ratios,
                                            DetuningConvention convention,
                                            double U, double eps,
                                            double omega_R) {
  if (!(omega_R > 0.0)) throw ContractViolation("omega_R must be > 0");
  std::vector<CrossoverPoint> out;
  out.reserve(t_c_values.size() * ratios.size());
  for (double t_c : t_c_values) {
    for (double r : ratios) {
      DoubleDotParams p;
      p.omega_R1 = p.omega_R2 = omega_R;
      p.t_c = t_c;
      p.eps = eps;
      p.U = U;
      if (convention == DetuningConvention::Delta2Zero) {
        p.delta_nu_1 = r * omega_R;
      } else {
        p.delta_nu_2 = -r * omega_R;
      }
      CrossoverPoint pt{t_c, r, std::numeric_limits<double>::quiet_NaN(), "ok"};
      if (!p.sw_valid()) {
        pt.status = "out_of_regime";
      } else {
        try {
          pt.theta = axis_angle(sw_reduced(p));
        } catch (const UndefinedAxis&) {
          pt.status = "undefined_axis";
        }
      }
      out.push_back(pt);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuits

namespace gates {

CMatrix sqrt_swap() {
  const Complex a(0.5, 0.5);
  const Complex b(0.5, -0.5);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = a;
  m(1, 2) = b;
  m(2, 1) = b;
  m(2, 2) = a;
  m(3, 3) = 1.0;
  return m;
}

CMatrix swap() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

CMatrix cphase(double phi) {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = std::exp(kI * phi);
  return m;
}

CMatrix cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

namespace {

// |c><c| (x) G + |c_perp><c_perp| (x) I
CMatrix controlled_on(const CVector& c, const CMatrix& g) {
  const CMatrix proj = c * c.adjoint();
  const CMatrix I = CMatrix::Identity(2, 2);
  return kron(proj, g) + kron(I - proj, I);
}

}  // namespace

CMatrix cnot_x() {
  CVector plus(2);
  plus << 1.0, 1.0;
  return controlled_on(plus / std::sqrt(2.0), pauli::x());
}

CMatrix cy_y() {
  CVector plus_i(2);
  plus_i << 1.0, kI;
  return controlled_on(plus_i / std::sqrt(2.0), pauli::y());
}

}  // namespace gates

UnitaryOperator circuit_unitary(const Circuit& c) {
  CMatrix u = CMatrix::Identity(4, 4);
  const CMatrix I = CMatrix::Identity(2, 2);
  for (const auto& g : c.gates) {
    CMatrix m;
    if (const auto* s = std::get_if<SingleGate>(&g)) {
      std::array<double, 3> axis{0, 0, 0};
      switch (s->axis) {
        case 'x': axis[0] = 1; break;
        case 'y': axis[1] = 1; break;
        case 'z': axis[2] = 1; break;
        default:
          throw ContractViolation(
              fmt::format("unknown rotation axis '{}'", s->axis));
      }
      if (!std::isfinite(s->angle)) {
        throw ContractViolation("non-finite rotation angle");
      }
      const CMatrix r = pauli::rotation(axis, s->angle);
      if (s->qubit == 1) {
        m = kron(r, I);
      } else if (s->qubit == 2) {
        m = kron(I, r);
      } else {
        throw ContractViolation(
            fmt::format("qubit index {} not in {{1, 2}}", s->qubit));
      }
    } else if (std::holds_alternative<SqrtSwapGate>(g)) {
      m = gates::sqrt_swap();
    } else if (std::holds_alternative<SwapGate>(g)) {
      m = gates::swap();
    } else {
      const double phi = std::get<CPhaseGate>(g).phi;
      if (!std::isfinite(phi)) throw ContractViolation("non-finite cphase");
      m = gates::cphase(phi);
    }
    u = m * u;
  }
  return {u, Basis::Dressed4};
}

namespace {

// Controlled-Z about `axis` from two sqrt(SWAP)s: rotations conjugated by the
// same local basis change on both qubits commute through sqrt(SWAP).
// a, b, c act on qubit 1, qubit 2 and qubit 1 (middle) respectively.
Circuit two_sqrt_swap(char axis, double a, double b, double c) {
  Circuit circ;
  circ.gates = {SqrtSwapGate{}, SingleGate{1, axis, c}, SqrtSwapGate{},
                SingleGate{1, axis, a}, SingleGate{2, axis, b}};
  return circ;
}

}  // namespace

std::map<std::string, Circuit> builtin_decompositions() {
  std::map<std::string, Circuit> out;
  // CZ up to phase, then a Hadamard-like change on the target.
  Circuit cnot = two_sqrt_swap('z', kPi / 2, -kPi / 2, kPi);
  cnot.gates.insert(cnot.gates.begin(), SingleGate{2, 'y', -kPi / 2});
  cnot.gates.push_back(SingleGate{2, 'y', kPi / 2});
  out["CNOT"] = cnot;
  // The same skeleton about x (y) conditions on |+> (|+i>); the extra pi on
  // qubit 2 moves the flip onto the + branch.
  out["CNOT_X"] = two_sqrt_swap('x', -1.5 * kPi, -1.5 * kPi, -kPi);
  out["CY_Y"] = two_sqrt_swap('y', -1.5 * kPi, -1.5 * kPi, -kPi);
  return out;
}

UnitaryOperator decomposition_target(const std::string& name) {
  if (name == "CNOT") return {gates::cnot(), Basis::Dressed4};
  if (name == "CNOT_X") return {gates::cnot_x(), Basis::Dressed4};
  if (name == "CY_Y") return {gates::cy_y(), Basis::Dressed4};
  throw ContractViolation(fmt::format("no builtin decomposition '{}'", name));
}

// ---------------------------------------------------------------------------
// Schrieffer-Wolff validation

SwValidation sw_validation(const DoubleDotParams& dd) {
  SwValidation out;
  out.reduced = RVector::Constant(2, std::numeric_limits<double>::quiet_NaN());
  out.full = out.reduced;
  out.relative_error = std::numeric_limits<double>::quiet_NaN();
  out.sw_valid = dd.sw_valid();
  if (!dd.U) {
    out.status = "missing_U";
    return out;
  }
  const double gap = *dd.U - std::abs(dd.eps);
  out.perturbative = out.sw_valid && dd.t_c / gap <= kSwPerturbativeLimit;
  if (!out.sw_valid) {
    out.status = "out_of_regime";
    return out;
  }
  ReducedHamiltonian rh;
  try {
    rh = sw_reduced(dd);
  } catch (const UnsupportedAssumption&) {
    out.status = "unsupported";
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> red(rh.matrix.matrix());
  out.reduced = red.eigenvalues();

  const auto dec = eigh(build_hamiltonian(Basis::Dressed6, dd));
  const CMatrix& v = dec.vectors.matrix();
  std::vector<std::pair<double, Eigen::Index>> weight;
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    weight.emplace_back(std::norm(v(0, k)) + std::norm(v(1, k)), k);
  }
  std::sort(weight.begin(), weight.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  out.full = RVector(2);
  out.full << dec.values(weight[0].second), dec.values(weight[1].second);
  std::sort(out.full.data(), out.full.data() + 2);

  const double scale = out.reduced.cwiseAbs().maxCoeff();
  out.relative_error =
      scale > 0.0 ? (out.reduced - out.full).cwiseAbs().maxCoeff() / scale
                  : std::numeric_limits<double>::infinity();
  out.status = out.perturbative ? "ok" : "out_of_regime";
  return out;
}

namespace {

// Uniform in [0, 1) from 53 random bits; independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo * std::pow(hi / lo, unit(rng));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SwRandomReport sw_random_validation(std::size_t n_draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SwRandomReport out;
  out.bin_edges = {1e-3, 1e-2, 5e-2};
  for (std::size_t i = 0; i < n_draws; ++i) {
    const double r = log_uniform(rng, 1e-3, 5e-2);
    const double omega = 5e6 + 15e6 * unit(rng);
    const double a_over_omega = log_uniform(rng, 1e-3, 1e-1);
    const double ef = -0.25 + 0.5 * unit(rng);
    DoubleDotParams p;
    p.omega_R1 = p.omega_R2 = omega;
    // A = r^2 U / (1 - ef^2) fixes U.
    const double U = a_over_omega * omega * (1.0 - ef * ef) / (r * r);
    p.U = U;
    p.t_c = r * U;
    p.eps = ef * U;
    for (double* d : {&p.delta_nu_1, &p.delta_nu_2}) {
      const double mag = log_uniform(rng, 1e-3, 1e-1) * omega;
      *d = unit(rng) < 0.5 ? -mag : mag;
    }
    out.draws.push_back({p, r, sw_validation(p)});
  }
  for (std::size_t b = 0; b + 1 < out.bin_edges.size(); ++b) {
    std::vector<double> errs;
    for (const auto& d : out.draws) {
      const bool last = b + 2 == out.bin_edges.size();
      if (d.t_c_over_U >= out.bin_edges[b] &&
          (d.t_c_over_U < out.bin_edges[b + 1] ||
           (last && d.t_c_over_U <= out.bin_edges[b + 1]))) {
        errs.push_back(d.result.relative_error);
      }
    }
    out.bin_medians.push_back(median(errs));
  }
  for (const auto& d : out.draws) {
    out.max_error = std::max(out.max_error, d.result.relative_error);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exchange gate

double sqrt_swap_duration(const DoubleDotParams& dd) {
  const auto rh = sw_reduced(dd);
  if (!(rh.A > 0.0)) throw ContractViolation("exchange A must be > 0");
  return 1.0 / (8.0 * rh.A);
}

ExchangeGateReport exchange_gate(const DoubleDotParams& dd, double duration,
                                 const UnitaryOperator& target,
                                 const StepControl& ctrl) {
  if (target.basis() != Basis::Dressed4) {
    throw BasisMismatch("exchange_gate target must be a Dressed4 operator");
  }
  if (!(duration > 0.0)) throw ContractViolation("duration must be > 0");
  PulseSchedule s;
  s.basis = Basis::Dressed6;
  s.segments.push_back({duration, {}});
  const auto u6 = evolve_unitary(s, dd, ctrl);
  // Dressed4 order (T+, z zbar, zbar z, T-) inside the Dressed6 kets.
  const std::array<Eigen::Index, 4> idx{3, 0, 1, 2};
  CMatrix block(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      block(i, j) = u6.unitary.matrix()(idx[i], idx[j]);
    }
  }
  const double leakage = 1.0 - block.squaredNorm() / 4.0;
  Eigen::JacobiSVD<CMatrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
  // Remove the bare dressed-qubit precession.
  const double w1 = dd.omega_R1;
  const double w2 = dd.omega_R2;
  CVector z(4);
  const std::array<double, 4> e{(w1 + w2) / 2, (w1 - w2) / 2, (-w1 + w2) / 2,
                                (-w1 - w2) / 2};
  for (Eigen::Index k = 0; k < 4; ++k) {
    z(k) = std::exp(kI * (2.0 * kPi * e[static_cast<std::size_t>(k)] * duration));
  }
  const UnitaryOperator achieved(z.asDiagonal() * polar, Basis::Dressed4);
  return {achieved, gate_fidelity(achieved, target), leakage, duration};
}

}  // namespace dressim
