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

#include "dressim/dynamics.hpp"

#include <Eigen/Jacobi>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <type_traits>

#include "dressim/errors.hpp"

namespace dressim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

HermitianOperator build(Basis basis, const ParamSet& p, double t) {
  return std::visit(
      overloaded{
          [&](const SingleQubitParams& s) {
            return build_hamiltonian(basis, s, t);
          },
          [&](const DoubleDotParams& d) { return build_hamiltonian(basis, d); },
      },
      p);
}

void check_target(const ParamSet& p, const std::string& target) {
  std::visit([&](const auto& q) { (void)get_param(q, target); }, p);
}

// One constant-parameter stretch of the staircase.
struct Interval {
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t segment = 0;
  double seg_start = 0.0;
  std::size_t base_steps = 1;
};

struct Plan {
  std::vector<Interval> intervals;
  std::vector<double> sample_times;  // sorted, clipped
};

Plan make_plan(const PulseSchedule& schedule, const ParamSet& params,
               const StepControl& ctrl, const EvolveOptions& options) {
  const double total = schedule.total_duration();
  Plan plan;
  for (double t : options.sample_times) {
    if (!std::isfinite(t)) throw ContractViolation("non-finite sample time");
    plan.sample_times.push_back(std::clamp(t, 0.0, total));
  }
  std::sort(plan.sample_times.begin(), plan.sample_times.end());

  double dt = ctrl.initial_dt;
  if (!(dt > 0.0)) {
    double max_off = 0.0;
    double cap = total / 1000.0;
    if (schedule.basis == Basis::Lab2) {
      const auto& s = std::get<SingleQubitParams>(params);
      if (s.f_mw && *s.f_mw > 0.0) cap = std::min(cap, 1.0 / (20.0 * *s.f_mw));
    }
    double seg_start = 0.0;
    for (const auto& seg : schedule.segments) {
      for (double f : {0.0, 0.5, 1.0}) {
        const double t = seg_start + f * seg.duration;
        const auto p = params_at(params, seg, seg_start, t);
        const CMatrix m = build(schedule.basis, p, t).matrix();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) max_off = std::max(max_off, std::abs(m(i, j)));
          }
        }
      }
      for (const auto& w : seg.waveforms) {
        if (const auto* s = std::get_if<Sinusoid>(&w.kind)) {
          cap = std::min(cap, 1.0 / (20.0 * s->frequency));
        }
      }
      seg_start += seg.duration;
    }
    dt = max_off > 0.0 ? std::min(cap, 1.0 / (8.0 * max_off)) : cap;
  }

  double seg_start = 0.0;
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const auto& seg = schedule.segments[s];
    const double seg_end = seg_start + seg.duration;
    std::vector<double> cuts{seg_start, seg_end};
    for (const auto& w : seg.waveforms) w.breakpoints(seg_start, seg_end, cuts);
    for (double t : plan.sample_times) {
      if (t > seg_start && t < seg_end) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    const double min_gap = 1e-12 * std::max(seg.duration, 1e-300);
    double prev = cuts.front();
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      double t = cuts[k];
      if (k + 1 == cuts.size()) t = seg_end;
      if (t - prev <= min_gap && k + 1 != cuts.size()) continue;
      if (t <= prev) continue;
      Interval iv;
      iv.t0 = prev;
      iv.t1 = t;
      iv.segment = s;
      iv.seg_start = seg_start;
      iv.base_steps = static_cast<std::size_t>(
          std::max(1.0, std::ceil((t - prev) / dt * (1.0 - 1e-12))));
      plan.intervals.push_back(iv);
      prev = t;
    }
    seg_start = seg_end;
  }
  return plan;
}

// H(t) for one segment. Every builder except Lab2 is affine in the
// parameters, so the driven targets are precomputed as
//   H = H_base + sum_k (w_k(t) - p_k) H_k
// with linearity checked numerically; anything else falls back to a full
// rebuild per step.
class SegmentHamiltonian {
 public:
  SegmentHamiltonian(Basis basis, const ParamSet& params, const Segment& seg,
                     double seg_start)
      : basis_(basis), params_(params), seg_(seg), seg_start_(seg_start) {
    const CMatrix base = build(basis_, params_, seg_start_).matrix();
    real_ = base.imag().cwiseAbs().maxCoeff() == 0.0;
    affine_ = basis_ != Basis::Lab2 && distinct_targets();
    std::vector<CMatrix> terms;
    for (const auto& w : seg_.waveforms) {
      if (!affine_) break;
      const double p0 = get(w.target);
      const double s = std::max({std::abs(p0), base.cwiseAbs().maxCoeff(), 1.0});
      try {
        const CMatrix h1 = build(basis_, with(w.target, p0 + s), 0.0).matrix();
        const CMatrix h2 =
            build(basis_, with(w.target, p0 + 2.0 * s), 0.0).matrix();
        const CMatrix term = (h1 - base) / s;
        const double scale = std::max(h2.cwiseAbs().maxCoeff(), 1e-300);
        if ((h2 - base - 2.0 * s * term).cwiseAbs().maxCoeff() > 1e-12 * scale) {
          affine_ = false;
        }
        real_ = real_ && term.imag().cwiseAbs().maxCoeff() == 0.0;
        terms.push_back(term);
        p0_.push_back(p0);
      } catch (const Error&) {
        affine_ = false;
      }
    }
    base_c_ = base;
    terms_c_ = std::move(terms);
    if (real_ && affine_) {
      base_r_ = base_c_.real();
      for (const auto& t : terms_c_) terms_r_.push_back(t.real());
    }
  }

  bool real() const { return real_ && affine_; }

  void at(double t, Eigen::MatrixXd& h) const {
    h = base_r_;
    for (std::size_t k = 0; k < terms_r_.size(); ++k) {
      h += (value(k, t) - p0_[k]) * terms_r_[k];
    }
  }

  void at(double t, CMatrix& h) const {
    if (affine_) {
      h = base_c_;
      for (std::size_t k = 0; k < terms_c_.size(); ++k) {
        h += (value(k, t) - p0_[k]) * terms_c_[k];
      }
      return;
    }
    h = build(basis_, params_at(params_, seg_, seg_start_, t), t).matrix();
  }

 private:
  double value(std::size_t k, double t) const {
    return seg_.waveforms[k].value(t, seg_start_, seg_.duration);
  }

  double get(const std::string& name) const {
    return std::visit([&](const auto& q) { return get_param(q, name); },
                      params_);
  }

  ParamSet with(const std::string& name, double v) const {
    ParamSet p = params_;
    std::visit([&](auto& q) { set_param(q, name, v); }, p);
    return p;
  }

  bool distinct_targets() const {
    for (std::size_t i = 0; i < seg_.waveforms.size(); ++i) {
      for (std::size_t j = i + 1; j < seg_.waveforms.size(); ++j) {
        if (seg_.waveforms[i].target == seg_.waveforms[j].target) return false;
      }
    }
    return true;
  }

  Basis basis_;
  const ParamSet& params_;
  const Segment& seg_;
  double seg_start_;
  bool real_ = false;
  bool affine_ = false;
  std::vector<double> p0_;
  CMatrix base_c_;
  std::vector<CMatrix> terms_c_;
  Eigen::MatrixXd base_r_;
  std::vector<Eigen::MatrixXd> terms_r_;
};

// Real symmetric eigensolver for slowly varying matrices: cyclic Jacobi
// sweeps started from the previous eigenbasis, which is already nearly
// diagonalising. A fresh decomposition every kRefresh calls bounds the
// accumulated loss of orthogonality.
class WarmJacobi {
 public:
  void compute(const Eigen::MatrixXd& h) {
    const Eigen::Index n = h.rows();
    if (calls_ % kRefresh == 0 || v_.rows() != n) {
      fresh_.compute(h);
      v_ = fresh_.eigenvectors();
      w_ = fresh_.eigenvalues();
      ++calls_;
      return;
    }
    ++calls_;
    tmp_.noalias() = h * v_;
    a_.noalias() = v_.transpose() * tmp_;
    const double tol = 1e-15 * h.cwiseAbs().maxCoeff();
    for (int sweep = 0; sweep < 30; ++sweep) {
      double off = 0.0;
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          off = std::max(off, std::abs(a_(p, q)));
        }
      }
      if (off <= tol) break;
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          if (std::abs(a_(p, q)) <= tol) continue;
          Eigen::JacobiRotation<double> j;
          j.makeJacobi(a_, p, q);
          a_.applyOnTheLeft(p, q, j.adjoint());
          a_.applyOnTheRight(p, q, j);
          v_.applyOnTheRight(p, q, j);
        }
      }
    }
    w_ = a_.diagonal();
    // Rotations leak orthogonality at the ulp level; without this the state
    // norm drifts linearly with the number of steps.
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < k; ++j) {
        v_.col(k) -= v_.col(j).dot(v_.col(k)) * v_.col(j);
      }
      v_.col(k).normalize();
    }
  }

  const RVector& values() const { return w_; }
  const Eigen::MatrixXd& vectors() const { return v_; }

 private:
  static constexpr std::size_t kRefresh = 1024;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fresh_;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd tmp_;
  RVector w_;
  std::size_t calls_ = 0;
};

// exp(-i 2 pi H dt) applied to the columns of psi.
class Stepper {
 public:
  template <class State>
  void apply(const Eigen::MatrixXd& h, double dt, State& psi) {
    if (h.rows() == 2) {
      apply2(h(0, 0), h(1, 1), Complex(h(0, 1), 0.0), dt, psi);
      return;
    }
    warm_.compute(h);
    phase(warm_.values(), dt);
    tmp_real_side(warm_.vectors(), psi);
  }

  template <class State>
  void apply(const CMatrix& h, double dt, State& psi) {
    if (h.rows() == 2) {
      apply2(h(0, 0).real(), h(1, 1).real(), h(0, 1), dt, psi);
      return;
    }
    complex_.compute(h);
    const auto& v = complex_.eigenvectors();
    phase(complex_.eigenvalues(), dt);
    State tmp = v.adjoint() * psi;
    tmp = phases_.asDiagonal() * tmp;
    psi.noalias() = v * tmp;
  }

 private:
  // [[a, b], [conj b, d]] = m I + K with K^2 = r^2 I.
  template <class State>
  void apply2(double a, double d, Complex b, double dt, State& psi) {
    const double m = 0.5 * (a + d);
    const double z = 0.5 * (a - d);
    const double r = std::sqrt(z * z + std::norm(b));
    const double phi = 2.0 * kPi * dt;
    const Complex g = std::exp(Complex(0.0, -phi * m));
    const double c = std::cos(phi * r);
    const double sr = r > 0.0 ? std::sin(phi * r) / r : phi;
    const Complex u00 = g * Complex(c, -sr * z);
    const Complex u11 = g * Complex(c, sr * z);
    const Complex u01 = g * Complex(0.0, -sr) * b;
    const Complex u10 = g * Complex(0.0, -sr) * std::conj(b);
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      const Complex x0 = psi(0, j);
      const Complex x1 = psi(1, j);
      psi(0, j) = u00 * x0 + u01 * x1;
      psi(1, j) = u10 * x0 + u11 * x1;
    }
  }

  template <class State>
  void tmp_real_side(const Eigen::MatrixXd& v, State& psi) {
    const Eigen::Index n = v.rows();
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      work_.resize(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) acc += v(i, k) * psi(i, j);
        work_(k) = phases_(k) * acc;
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) acc += v(i, k) * work_(k);
        psi(i, j) = acc;
      }
    }
  }

  void phase(const RVector& values, double dt) {
    phases_.resize(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      const double a = -2.0 * kPi * values(k) * dt;
      phases_(k) = Complex(std::cos(a), std::sin(a));
    }
  }

  WarmJacobi warm_;
  Eigen::SelfAdjointEigenSolver<CMatrix> complex_;
  CVector phases_;
  CVector work_;
};

template <class State>
using SampleOf = std::conditional_t<std::is_same_v<State, CVector>, Sample,
                                    UnitarySample>;

template <class State>
struct LevelRun {
  State state;
  std::vector<SampleOf<State>> samples;
  std::size_t steps = 0;
  double max_norm_drift = 0.0;
};

template <class State>
LevelRun<State> run_level(const PulseSchedule& schedule, const ParamSet& params,
                          const Plan& plan, const State& start,
                          std::size_t multiplier, bool record) {
  LevelRun<State> out;
  out.state = start;
  Stepper stepper;
  std::size_t next_sample = 0;
  auto take_samples = [&](double t) {
    while (record && next_sample < plan.sample_times.size() &&
           plan.sample_times[next_sample] <= t) {
      if constexpr (std::is_same_v<State, CVector>) {
        out.samples.push_back(
            {plan.sample_times[next_sample], out.state.cwiseAbs2()});
      } else {
        out.samples.push_back({plan.sample_times[next_sample], out.state});
      }
      ++next_sample;
    }
  };
  take_samples(0.0);
  std::vector<SegmentHamiltonian> hams;
  hams.reserve(schedule.segments.size());
  double seg_start = 0.0;
  for (const auto& seg : schedule.segments) {
    hams.emplace_back(schedule.basis, params, seg, seg_start);
    seg_start += seg.duration;
  }
  Eigen::MatrixXd hr;
  CMatrix hc;
  for (const auto& iv : plan.intervals) {
    const auto& ham = hams[iv.segment];
    const std::size_t n = iv.base_steps * multiplier;
    const double h = (iv.t1 - iv.t0) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double tm = iv.t0 + (static_cast<double>(k) + 0.5) * h;
      if (ham.real()) {
        ham.at(tm, hr);
        stepper.apply(hr, h, out.state);
      } else {
        ham.at(tm, hc);
        stepper.apply(hc, h, out.state);
      }
    }
    out.steps += n;
    if constexpr (std::is_same_v<State, CVector>) {
      out.max_norm_drift =
          std::max(out.max_norm_drift, std::abs(out.state.norm() - 1.0));
    } else {
      const auto d = out.state.rows();
      out.max_norm_drift = std::max(
          out.max_norm_drift,
          (out.state.adjoint() * out.state - CMatrix::Identity(d, d))
              .cwiseAbs()
              .maxCoeff());
    }
    take_samples(iv.t1);
  }
  take_samples(std::numeric_limits<double>::infinity());
  return out;
}

template <class State>
struct Converged {
  LevelRun<State> run;
  bool converged = false;
  double error = std::numeric_limits<double>::infinity();
};

template <class State, class Diff>
Converged<State> converge(const PulseSchedule& schedule, const ParamSet& params,
                          const Plan& plan, const State& start,
                          const StepControl& ctrl, bool record, Diff diff) {
  Converged<State> out;
  std::size_t base = 0;
  for (const auto& iv : plan.intervals) base += iv.base_steps;
  out.run = run_level(schedule, params, plan, start, 1, record);
  if (plan.intervals.empty()) {
    out.converged = true;
    out.error = 0.0;
    return out;
  }
  std::size_t multiplier = 1;
  for (int level = 1; level <= ctrl.max_halvings; ++level) {
    multiplier *= 2;
    if (base * multiplier > ctrl.max_steps) break;
    auto finer = run_level(schedule, params, plan, start, multiplier, record);
    out.error = diff(finer.state, out.run.state);
    out.run = std::move(finer);
    if (out.error < ctrl.tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

void check_control(const StepControl& ctrl) {
  if (!(ctrl.tolerance > 0.0)) {
    throw ContractViolation("StepControl tolerance must be > 0");
  }
  if (ctrl.max_halvings < 0) {
    throw ContractViolation("StepControl max_halvings must be >= 0");
  }
}

void check_bound(const PulseSchedule& schedule, const ParamSet& params) {
  schedule.validate();
  for (const auto& seg : schedule.segments) {
    for (const auto& w : seg.waveforms) check_target(params, w.target);
  }
  const bool single = std::holds_alternative<SingleQubitParams>(params);
  const bool single_basis = schedule.basis == Basis::Lab2 ||
                            schedule.basis == Basis::Rot2 ||
                            schedule.basis == Basis::Dressed2;
  if (single != single_basis) {
    throw BasisMismatch(fmt::format("{} parameters cannot drive a {} schedule",
                                    single ? "single-qubit" : "double-dot",
                                    basis_name(schedule.basis)));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Waveforms and schedules

double ControlWaveform::value(double t, double seg_start,
                              double seg_duration) const {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [&](const Square& s) {
            const double x = (t + s.phase_offset) / s.period;
            const double frac = x - std::floor(x);
            return frac < s.duty ? s.level_on : s.level_off;
          },
          [&](const Sinusoid& s) {
            return s.amplitude * std::sin(2.0 * kPi * s.frequency * t + s.phase);
          },
          [&](const LinearRamp& r) {
            const double f = seg_duration > 0.0 ? (t - seg_start) / seg_duration
                                                : 0.0;
            return r.start + (r.end - r.start) * f;
          },
      },
      kind);
}

void ControlWaveform::breakpoints(double t0, double t1,
                                  std::vector<double>& out) const {
  const auto* s = std::get_if<Square>(&kind);
  if (s == nullptr) return;
  const double k0 = std::floor((t0 + s->phase_offset) / s->period) - 1.0;
  const double k1 = std::ceil((t1 + s->phase_offset) / s->period) + 1.0;
  for (double k = k0; k <= k1; k += 1.0) {
    for (double edge : {k, k + s->duty}) {
      const double t = edge * s->period - s->phase_offset;
      if (t > t0 && t < t1) out.push_back(t);
    }
  }
}

void ControlWaveform::validate() const {
  std::visit(
      overloaded{
          [](const Constant&) {},
          [](const Square& s) {
            if (!(s.duty > 0.0 && s.duty < 1.0)) {
              throw ContractViolation(
                  fmt::format("square duty {} outside (0, 1)", s.duty));
            }
            if (!(s.period > 0.0) || !std::isfinite(s.period)) {
              throw ContractViolation("square period must be > 0");
            }
          },
          [](const Sinusoid& s) {
            if (!(s.frequency > 0.0) || !std::isfinite(s.frequency)) {
              throw ContractViolation("sinusoid frequency must be > 0");
            }
          },
          [](const LinearRamp&) {},
      },
      kind);
}

double PulseSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void PulseSchedule::validate() const {
  for (const auto& s : segments) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw ContractViolation(
          fmt::format("segment duration {} must be finite and > 0",
                      s.duration));
    }
    for (const auto& w : s.waveforms) w.validate();
  }
}

ParamSet params_at(const ParamSet& base, const Segment& seg, double seg_start,
                   double t) {
  ParamSet p = base;
  std::visit(
      [&](auto& q) {
        for (const auto& w : seg.waveforms) {
          set_param(q, w.target, w.value(t, seg_start, seg.duration));
        }
      },
      p);
  return p;
}

HermitianOperator hamiltonian_at(const PulseSchedule& schedule,
                                 const ParamSet& base, double t) {
  double seg_start = 0.0;
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const auto& seg = schedule.segments[s];
    const bool last = s + 1 == schedule.segments.size();
    if (t < seg_start + seg.duration || last) {
      return build(schedule.basis, params_at(base, seg, seg_start, t), t);
    }
    seg_start += seg.duration;
  }
  return build(schedule.basis, base, t);
}

// ---------------------------------------------------------------------------
// Evolution

EvolutionResult evolve(const PulseSchedule& schedule, const ParamSet& params,
                       const StateVector& psi0, const StepControl& ctrl,
                       const EvolveOptions& options) {
  if (psi0.basis() != schedule.basis) {
    throw BasisMismatch(fmt::format("initial state in {}, schedule in {}",
                                    basis_name(psi0.basis()),
                                    basis_name(schedule.basis)));
  }
  check_control(ctrl);
  check_bound(schedule, params);
  const Plan plan = make_plan(schedule, params, ctrl, options);
  auto c = converge<CVector>(
      schedule, params, plan, psi0.amplitudes(), ctrl, true,
      [](const CVector& a, const CVector& b) { return (a - b).norm(); });

  return {StateVector::normalized(c.run.state, schedule.basis),
          std::move(c.run.samples), c.run.steps, c.converged, c.error,
          c.run.max_norm_drift};
}

UnitaryEvolution evolve_unitary(const PulseSchedule& schedule,
                                const ParamSet& params,
                                const StepControl& ctrl,
                                const EvolveOptions& options) {
  check_control(ctrl);
  check_bound(schedule, params);
  const Plan plan = make_plan(schedule, params, ctrl, options);
  const auto d = static_cast<Eigen::Index>(dimension(schedule.basis));
  const CMatrix start = CMatrix::Identity(d, d);
  auto c = converge<CMatrix>(
      schedule, params, plan, start, ctrl, true,
      [](const CMatrix& a, const CMatrix& b) {
        return (a - b).cwiseAbs().maxCoeff();
      });
  double defect = 0.0;
  auto check = [&](CMatrix& u) {
    const double e =
        (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    defect = std::max(defect, e);
    if (e > kUnitarityTolerance) {
      Eigen::JacobiSVD<CMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = svd.matrixU() * svd.matrixV().adjoint();
    }
  };
  check(c.run.state);
  for (auto& s : c.run.samples) check(s.propagator);
  const bool ok = c.converged && defect <= kUnitarityTolerance;
  return {UnitaryOperator(c.run.state, schedule.basis), c.run.steps, ok,
          ok ? c.error : std::max(c.error, defect), std::move(c.run.samples),
          defect};
}

// ---------------------------------------------------------------------------
// Spectrum

std::vector<SpectrumPoint> spectrum_scan(const DoubleDotParams& params,
                                         std::span<const double> eps_values,
                                         Basis basis) {
  if (basis != Basis::Dressed5 && basis != Basis::DressedST5) {
    throw ContractViolation(fmt::format(
        "spectrum_scan needs Dressed5 or DressedST5, got {}",
        basis_name(basis)));
  }
  const auto d = static_cast<int>(dimension(basis));
  std::vector<SpectrumPoint> out;
  out.reserve(eps_values.size());
  CMatrix prev_vectors;
  std::vector<int> prev_branch;
  for (double eps : eps_values) {
    if (!std::isfinite(eps)) throw ContractViolation("non-finite eps value");
    DoubleDotParams p = params;
    p.eps = eps;
    const auto dec = eigh(build_hamiltonian(basis, p));
    const CMatrix& v = dec.vectors.matrix();
    SpectrumPoint pt;
    pt.eps = eps;
    pt.energies = dec.values;
    pt.composition = v.cwiseAbs2().transpose();
    pt.branch.resize(static_cast<std::size_t>(d));
    if (prev_branch.empty()) {
      std::iota(pt.branch.begin(), pt.branch.end(), 0);
    } else {
      // overlap(k, j) between new eigenvector k and previous eigenvector j
      const Eigen::MatrixXd overlap = (v.adjoint() * prev_vectors).cwiseAbs2();
      std::vector<int> perm(static_cast<std::size_t>(d));
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> best = perm;
      double best_score = -1.0;
      do {
        double score = 0.0;
        for (int k = 0; k < d; ++k) score += overlap(k, perm[k]);
        if (score > best_score + 1e-14) {
          best_score = score;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (int k = 0; k < d; ++k) {
        pt.branch[static_cast<std::size_t>(k)] =
            prev_branch[static_cast<std::size_t>(best[k])];
      }
    }
    prev_vectors = v;
    prev_branch = pt.branch;
    out.push_back(std::move(pt));
  }
  return out;
}

double character_gap(const DoubleDotParams& params, Basis basis,
                     std::size_t ket_a, std::size_t ket_b) {
  const auto d = dimension(basis);
  if (ket_a >= d || ket_b >= d || ket_a == ket_b) {
    throw ContractViolation("character_gap needs two distinct kets");
  }
  const auto dec = eigh(build_hamiltonian(basis, params));
  const CMatrix& v = dec.vectors.matrix();
  const auto ia = static_cast<Eigen::Index>(ket_a);
  const auto ib = static_cast<Eigen::Index>(ket_b);
  std::vector<std::pair<double, Eigen::Index>> weight;
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    weight.emplace_back(std::norm(v(ia, k)) + std::norm(v(ib, k)), k);
  }
  std::sort(weight.begin(), weight.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  return std::abs(dec.values(weight[0].second) - dec.values(weight[1].second));
}

GapMinimum minimum_character_gap(const DoubleDotParams& params, Basis basis,
                                 std::size_t ket_a, std::size_t ket_b,
                                 double eps_lo, double eps_hi,
                                 std::size_t n_scan) {
  if (!(eps_hi > eps_lo) || n_scan < 3) {
    throw ContractViolation("minimum_character_gap needs eps_lo < eps_hi and "
                            "at least 3 scan points");
  }
  auto gap_at = [&](double eps) {
    DoubleDotParams p = params;
    p.eps = eps;
    return character_gap(p, basis, ket_a, ket_b);
  };
  const double step = (eps_hi - eps_lo) / static_cast<double>(n_scan - 1);
  GapMinimum best{eps_lo, gap_at(eps_lo)};
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < n_scan; ++i) {
    const double eps = eps_lo + step * static_cast<double>(i);
    const double g = gap_at(eps);
    if (g < best.gap) {
      best = {eps, g};
      best_i = i;
    }
  }
  const double lo = eps_lo + step * static_cast<double>(best_i > 0 ? best_i - 1 : 0);
  const double hi = std::min(
      eps_hi, eps_lo + step * static_cast<double>(best_i + 1));
  const double tol = 1e-12 * std::max({std::abs(eps_lo), std::abs(eps_hi), 1.0});
  const double eps = golden_section_minimize(gap_at, lo, hi, tol);
  const double g = gap_at(eps);
  if (g < best.gap) best = {eps, g};
  return best;
}

}  // namespace dressim
