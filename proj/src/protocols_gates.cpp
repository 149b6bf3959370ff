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

#include "dressim/errors.hpp"
#include "dressim/protocols.hpp"

namespace dressim {

namespace {

// The logical phase reference sits a quarter turn from the dressed frame, so
// a sine modulation at zero phase drives about +x.
constexpr double kFrameOffset = -kPi / 2;

CMatrix rz(double a) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * (a / 2));
  m(1, 1) = std::exp(kI * (a / 2));
  return m;
}

SingleQubitParams dressed_qubit(double omega_R) {
  SingleQubitParams p;
  p.omega_R = omega_R;
  return p;
}

PulseSchedule fsk_schedule(double delta, double f_N, double phase,
                           double duration) {
  PulseSchedule s;
  s.basis = Basis::Dressed2;
  const double period = 1.0 / f_N;
  s.segments.push_back(
      {duration,
       {{Square{delta, -delta, period, 0.5, phase / (2.0 * kPi * f_N)},
         "delta_nu"}}});
  return s;
}

PulseSchedule fm_schedule(double omega_R, double delta, double phase,
                          double duration) {
  PulseSchedule s;
  s.basis = Basis::Dressed2;
  s.segments.push_back(
      {duration, {{Sinusoid{delta, omega_R, phase}, "delta_nu"}}});
  return s;
}

void check_drive(double omega_R, double delta, double duration) {
  if (!(omega_R > 0.0)) throw ContractViolation("omega_R must be > 0");
  if (!(delta >= 0.0)) throw ContractViolation("delta must be >= 0");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ContractViolation("gate duration must be finite and >= 0");
  }
}

GateReport make_report(const PulseSchedule& s, double omega_R, double frame,
                       double phase, double duration, double target_angle,
                       const StepControl& ctrl) {
  UnitaryEvolution u{UnitaryOperator::identity(Basis::Dressed2), 0, true, 0.0,
                     {}, 0.0};
  if (duration > 0.0) {
    u = evolve_unitary(s, dressed_qubit(omega_R), ctrl);
  }
  const auto achieved = to_logical_frame(u.unitary, frame, duration);
  const auto target = logical_rotation(phase, target_angle);
  GateReport r{achieved, target, gate_fidelity(achieved, target), duration,
               {}, u.converged, {}};
  if (!u.converged) {
    r.warnings.push_back(fmt::format(
        "evolution not converged (estimated error {:.3g})", u.estimated_error));
  }
  return r;
}

}  // namespace

UnitaryOperator logical_rotation(double phase, double angle) {
  return {pauli::rotation({std::cos(phase), std::sin(phase), 0.0}, angle),
          Basis::Dressed2};
}

UnitaryOperator to_logical_frame(const UnitaryOperator& u,
                                 double frame_frequency, double t) {
  if (u.basis() != Basis::Dressed2) {
    throw BasisMismatch("to_logical_frame needs a Dressed2 propagator");
  }
  // Undo the free precession exp(-i pi f t sigma_z), then move the phase
  // reference.
  const CMatrix free_inv = rz(-2.0 * kPi * frame_frequency * t);
  CMatrix m = rz(-kFrameOffset) * free_inv * u.matrix() * rz(kFrameOffset);
  return {std::move(m), Basis::Dressed2};
}

double default_fsk_frame(double omega_R, double delta) {
  return generalized_rabi(omega_R, delta);
}

GateReport fsk_gate(double omega_R, double delta, double f_N, double phase,
                    double duration, const StepControl& ctrl,
                    double target_angle) {
  check_drive(omega_R, delta, duration);
  if (!(f_N > 0.0)) throw ContractViolation("f_N must be > 0");
  const auto s = fsk_schedule(delta, f_N, phase, duration);
  auto r = make_report(s, omega_R, f_N, phase, duration, target_angle, ctrl);
  r.calibration = {delta, phase, f_N};
  if (delta >= omega_R) {
    r.warnings.push_back(fmt::format(
        "keying amplitude {} Hz is not below omega_R {} Hz", delta, omega_R));
  }
  return r;
}

GateReport fm_gate(double omega_R, double delta, double phase, double duration,
                   const StepControl& ctrl, double target_angle) {
  check_drive(omega_R, delta, duration);
  const auto s = fm_schedule(omega_R, delta, phase, duration);
  auto r = make_report(s, omega_R, omega_R, phase, duration, target_angle, ctrl);
  r.calibration = {delta, phase, omega_R};
  if (delta > 0.1 * omega_R) {
    r.warnings.push_back(fmt::format(
        "modulation amplitude {} Hz is not small against omega_R {} Hz; "
        "rotating-wave description unreliable",
        delta, omega_R));
  }
  return r;
}

CalibrationResult calibrate_gate(GateScheme scheme, double omega_R,
                                 double delta, double phase,
                                 double target_angle, const StepControl& ctrl,
                                 std::optional<double> f_N) {
  if (!(delta > 0.0)) {
    throw CalibrationFailed("calibration needs a modulation amplitude > 0");
  }
  if (!(omega_R > 0.0)) throw ContractViolation("omega_R must be > 0");
  const double window = 4.0 / delta;
  const double frame = scheme == GateScheme::FM
                           ? omega_R
                           : f_N.value_or(default_fsk_frame(omega_R, delta));
  const auto target = logical_rotation(phase, target_angle);

  auto schedule_for = [&](double duration) {
    return scheme == GateScheme::FM
               ? fm_schedule(omega_R, delta, phase, duration)
               : fsk_schedule(delta, frame, phase, duration);
  };
  auto fidelity_at = [&](double duration) {
    if (duration <= 0.0) {
      return gate_fidelity(to_logical_frame(
                               UnitaryOperator::identity(Basis::Dressed2),
                               frame, 0.0),
                           target);
    }
    const auto u =
        evolve_unitary(schedule_for(duration), dressed_qubit(omega_R), ctrl);
    return gate_fidelity(to_logical_frame(u.unitary, frame, duration), target);
  };

  // Coarse scan from a single trajectory, at least eight points per frame
  // period so the frame micromotion does not alias.
  const auto n = static_cast<std::size_t>(
      std::max(400.0, std::ceil(8.0 * window * frame)));
  EvolveOptions opt;
  for (std::size_t k = 0; k <= n; ++k) {
    opt.sample_times.push_back(window * static_cast<double>(k) /
                               static_cast<double>(n));
  }
  const auto traj =
      evolve_unitary(schedule_for(window), dressed_qubit(omega_R), ctrl, opt);
  std::vector<double> f(traj.samples.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const UnitaryOperator u(traj.samples[k].propagator, Basis::Dressed2);
    f[k] = gate_fidelity(to_logical_frame(u, frame, traj.samples[k].time),
                         target);
  }
  const double best = *std::max_element(f.begin(), f.end());
  if (!(best > 0.5)) {
    throw CalibrationFailed(fmt::format(
        "no duration in (0, {} s] reaches fidelity 0.5 (best {:.4f})", window,
        best));
  }
  // Shortest local maximum that is as good as the best one.
  std::size_t pick = 0;
  for (std::size_t k = 1; k < f.size(); ++k) {
    const bool left = f[k] >= f[k - 1];
    const bool right = k + 1 == f.size() || f[k] >= f[k + 1];
    if (left && right && f[k] >= best - 1e-4) {
      pick = k;
      break;
    }
  }
  const double t_pick = traj.samples[pick].time;
  const double lo = traj.samples[pick > 0 ? pick - 1 : 0].time;
  const double hi = traj.samples[std::min(pick + 1, f.size() - 1)].time;
  const double t_best = golden_section_minimize(
      [&](double t) { return -fidelity_at(t); }, lo, hi, 1e-4 * t_pick);
  const double f_best = fidelity_at(t_best);
  if (f_best >= f[pick]) return {t_best, f_best};
  return {t_pick, f[pick]};
}

RwaReport rwa_crosscheck(const SingleQubitParams& p, double duration,
                         const StepControl& ctrl, std::size_t n_samples) {
  if (!p.g || !p.B0 || !p.B1 || !p.f_mw) {
    throw ConfigurationError("rwa_crosscheck needs g, B0, B1 and f_mw");
  }
  if (!(duration > 0.0)) throw ContractViolation("duration must be > 0");
  if (n_samples == 0) throw ContractViolation("n_samples must be > 0");
  p.validate();
  EvolveOptions opt;
  for (std::size_t k = 0; k <= n_samples; ++k) {
    opt.sample_times.push_back(duration * static_cast<double>(k) /
                               static_cast<double>(n_samples));
  }
  PulseSchedule lab;
  lab.basis = Basis::Lab2;
  lab.segments.push_back({duration, {}});
  PulseSchedule rot = lab;
  rot.basis = Basis::Rot2;
  const auto up_lab = StateVector::basis_state(Basis::Lab2, 0);
  const auto up_rot = StateVector::basis_state(Basis::Rot2, 0);
  const auto a = evolve(lab, p, up_lab, ctrl, opt);
  const auto b = evolve(rot, p, up_rot, ctrl, opt);
  RwaReport out;
  out.converged = a.converged && b.converged;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    out.times.push_back(a.samples[k].time);
    out.p_down_lab.push_back(a.samples[k].populations(1));
    out.p_down_rot.push_back(b.samples[k].populations(1));
    out.max_deviation = std::max(
        out.max_deviation, std::abs(out.p_down_lab.back() - out.p_down_rot.back()));
  }
  return out;
}

}  // namespace dressim
