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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dressim/dynamics.hpp"
#include "dressim/errors.hpp"
#include "testutil.hpp"

namespace dressim {
namespace test_dynamics {

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using test::kGHz;
using test::kMHz;

static PulseSchedule constant_schedule(Basis basis, double duration) {
  PulseSchedule s;
  s.basis = basis;
  s.segments.push_back({duration, {}});
  return s;
}

static SingleQubitParams rabi(double delta_nu, double omega_R) {
  SingleQubitParams p;
  p.delta_nu = delta_nu;
  p.omega_R = omega_R;
  return p;
}

TEST_CASE("Zero-duration schedule leaves the state alone") {
  PulseSchedule s;
  s.basis = Basis::Rot2;
  CVector v(2);
  v << 0.6, 0.8 * kI;
  const StateVector psi(v, Basis::Rot2);
  const auto r = evolve(s, rabi(0, 10 * kMHz), psi, {});
  CHECK(r.converged);
  CHECK(r.steps_used == 0);
  CHECK((r.final_state.amplitudes() - v).norm() == 0.0);
}

TEST_CASE("Resonant pi pulse") {
  const auto r = evolve(constant_schedule(Basis::Rot2, 50e-9),
                        rabi(0.0, 10 * kMHz),
                        StateVector::basis_state(Basis::Rot2, 0), {});
  CHECK(r.converged);
  CHECK_THAT(r.final_state.populations()(1), WithinAbs(1.0, 1e-9));
}

SCENARIO("Off-resonant Rabi oscillation") {
  const double omega = 10 * kMHz;
  for (double ratio : {0.0, 1.0, 3.0}) {
    GIVEN("delta_nu / Omega_R = " << ratio) {
      const double dnu = ratio * omega;
      const double w = std::sqrt(omega * omega + dnu * dnu);
      // Sample densely over one generalised period.
      EvolveOptions opt;
      for (int k = 0; k <= 400; ++k) opt.sample_times.push_back(k / (400.0 * w));
      const auto r = evolve(constant_schedule(Basis::Rot2, 1.0 / w),
                            rabi(dnu, omega),
                            StateVector::basis_state(Basis::Rot2, 0), {}, opt);
      double pmax = 0.0;
      for (const auto& s : r.samples) {
        CHECK_THAT(s.populations.sum(), WithinAbs(1.0, 1e-8));
        pmax = std::max(pmax, s.populations(1));
      }
      CHECK(r.samples.size() == 401);
      THEN("max P(flip) = Omega^2 / (Omega^2 + delta_nu^2)") {
        CHECK_THAT(pmax, WithinAbs(omega * omega / (w * w), 1e-3));
      }
    }
  }
}

TEST_CASE("Constant schedules reproduce the exact propagator") {
  DoubleDotParams p;
  p.delta_nu_1 = 1 * kMHz;
  p.delta_nu_2 = -0.3 * kMHz;
  p.omega_R1 = 10 * kMHz;
  p.omega_R2 = 12 * kMHz;
  p.t_c = 0.2 * kGHz;
  p.eps = -1 * kGHz;
  const double T = 37e-9;
  const auto u = evolve_unitary(constant_schedule(Basis::Dressed5, T), p, {});
  const auto exact = propagator(build_hamiltonian(Basis::Dressed5, p), T);
  CHECK(u.converged);
  CHECK(test::max_abs(u.unitary.matrix() - exact.matrix()) < 1e-10);
}

TEST_CASE("Keyed square waveform is integrated piecewise exactly") {
  const double omega = 10 * kMHz;
  const double delta = 0.5 * kMHz;
  const double period = 1.0 / omega;
  PulseSchedule s;
  s.basis = Basis::Dressed2;
  Segment seg;
  seg.duration = 2.3 * period;
  seg.waveforms.push_back({Square{delta, -delta, period, 0.5, 0.1 * period},
                           "delta_nu"});
  s.segments.push_back(seg);
  const auto u = evolve_unitary(s, rabi(0.0, omega), {});
  // Oracle: product of exact propagators between the edges.
  const std::vector<double> edges{0.0,          0.4 * period, 0.9 * period,
                                  1.4 * period, 1.9 * period, 2.3 * period};
  CMatrix oracle = CMatrix::Identity(2, 2);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double level = (k % 2 == 0) ? delta : -delta;
    const auto h = build_hamiltonian(Basis::Dressed2, rabi(level, omega));
    oracle = propagator(h, edges[k + 1] - edges[k]).matrix() * oracle;
  }
  CHECK(u.converged);
  CHECK(test::max_abs(u.unitary.matrix() - oracle) < 1e-12);
}

SCENARIO("Landau-Zener sweep through the singlet anticrossing") {
  DoubleDotParams p;
  p.t_c = 1 * kMHz;
  const double span = 400 * kMHz;
  // exp(-4 pi^2 t_c^2 / v) = 1/2
  const double v = 4.0 * kPi * kPi * p.t_c * p.t_c / std::log(2.0);
  const double T = span / v;
  PulseSchedule s;
  s.basis = Basis::Singlet2;
  s.segments.push_back(
      {T, {{LinearRamp{span / 2, -span / 2}, "eps"}}});
  StepControl ctrl;
  ctrl.tolerance = 1e-6;
  const auto r = evolve(s, p, StateVector::basis_state(Basis::Singlet2, 1), ctrl);
  THEN("The diabatic probability follows the Landau-Zener formula") {
    CHECK(r.converged);
    // Diabatic = staying in S(0,2).
    CHECK_THAT(r.final_state.populations()(1), WithinAbs(0.5, 0.01));
  }
  THEN("The norm is conserved") { CHECK(r.max_norm_drift < 1e-9); }
}

SCENARIO("Step-size self-consistency and time reversal") {
  DoubleDotParams p;
  p.delta_nu_1 = 2 * kMHz;
  p.delta_nu_2 = -1 * kMHz;
  p.omega_R1 = p.omega_R2 = 10 * kMHz;
  p.t_c = 20 * kMHz;
  const double T = 0.5e-6;
  PulseSchedule fwd;
  fwd.basis = Basis::Dressed5;
  fwd.segments.push_back({T, {{LinearRamp{200 * kMHz, -200 * kMHz}, "eps"}}});
  PulseSchedule mirrored = fwd;
  mirrored.segments[0].waveforms[0].kind = LinearRamp{-200 * kMHz, 200 * kMHz};
  StepControl ctrl;
  ctrl.tolerance = 1e-7;
  const auto psi0 = StateVector::basis_state(Basis::Dressed5, 0);
  const auto r = evolve(fwd, p, psi0, ctrl);
  REQUIRE(r.converged);

  THEN("Halving the converged step changes populations by < tolerance") {
    StepControl finer = ctrl;
    const double n = static_cast<double>(r.steps_used);
    finer.initial_dt = T / (2.0 * n);
    finer.max_halvings = 0;
    const auto r2 = evolve(fwd, p, psi0, finer);
    const RVector d = r2.final_state.populations() - r.final_state.populations();
    CHECK(d.cwiseAbs().maxCoeff() < ctrl.tolerance);
  }
  THEN("Mirrored schedule on the conjugated state returns to the start") {
    // H is real, so time reversal is complex conjugation.
    const StateVector back(r.final_state.amplitudes().conjugate(),
                           Basis::Dressed5);
    const auto r2 = evolve(mirrored, p, back, ctrl);
    const CVector out = r2.final_state.amplitudes().conjugate();
    CHECK((out - psi0.amplitudes()).norm() < 10 * ctrl.tolerance);
  }
  THEN("Populations sum to one and the norm is conserved") {
    CHECK_THAT(r.final_state.populations().sum(), WithinAbs(1.0, 1e-8));
    CHECK(r.max_norm_drift < 1e-9);
  }
}

TEST_CASE("Time reversal for a constant schedule") {
  const auto p = rabi(3 * kMHz, 10 * kMHz);
  const auto s = constant_schedule(Basis::Rot2, 0.37e-6);
  CVector v(2);
  v << 0.8, 0.6 * kI;
  const StateVector psi(v, Basis::Rot2);
  const auto r = evolve(s, p, psi, {});
  const StateVector back(r.final_state.amplitudes().conjugate(), Basis::Rot2);
  const auto r2 = evolve(s, p, back, {});
  CHECK((r2.final_state.amplitudes().conjugate() - v).norm() < 1e-7);
}

TEST_CASE("Non-convergence is reported, not thrown") {
  DoubleDotParams p;
  p.omega_R1 = p.omega_R2 = 10 * kMHz;
  p.t_c = 1 * kGHz;
  PulseSchedule s;
  s.basis = Basis::Dressed5;
  s.segments.push_back({10e-9, {{LinearRamp{50 * kGHz, -50 * kGHz}, "eps"}}});
  StepControl ctrl;
  ctrl.tolerance = 1e-14;
  ctrl.max_halvings = 1;
  const auto r = evolve(s, p, StateVector::basis_state(Basis::Dressed5, 0), ctrl);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.estimated_error));
  CHECK(r.estimated_error > 0.0);
}

TEST_CASE("Contract checks") {
  const auto p = rabi(0, 10 * kMHz);
  const auto psi = StateVector::basis_state(Basis::Rot2, 0);
  SECTION("Basis mismatch") {
    REQUIRE_THROWS_AS(evolve(constant_schedule(Basis::Dressed2, 1e-9), p, psi,
                             {}),
                      BasisMismatch);
    DoubleDotParams d;
    REQUIRE_THROWS_AS(evolve_unitary(constant_schedule(Basis::Rot2, 1e-9), d,
                                     {}),
                      BasisMismatch);
  }
  SECTION("Unknown target") {
    auto s = constant_schedule(Basis::Rot2, 1e-9);
    s.segments[0].waveforms.push_back({Constant{1.0}, "eps"});
    REQUIRE_THROWS_AS(evolve(s, p, psi, {}), ConfigurationError);
  }
  SECTION("Bad waveform") {
    auto s = constant_schedule(Basis::Rot2, 1e-9);
    s.segments[0].waveforms.push_back({Square{1, 0, 1e-9, 1.0, 0}, "delta_nu"});
    REQUIRE_THROWS_AS(evolve(s, p, psi, {}), ContractViolation);
    s.segments[0].waveforms[0].kind = Sinusoid{1, 0.0, 0};
    REQUIRE_THROWS_AS(evolve(s, p, psi, {}), ContractViolation);
  }
  SECTION("Bad duration and tolerance") {
    REQUIRE_THROWS_AS(evolve(constant_schedule(Basis::Rot2, 0.0), p, psi, {}),
                      ContractViolation);
    StepControl c;
    c.tolerance = 0.0;
    REQUIRE_THROWS_AS(evolve(constant_schedule(Basis::Rot2, 1e-9), p, psi, c),
                      ContractViolation);
  }
}

TEST_CASE("Waveform values") {
  const ControlWaveform sq{Square{1.0, -1.0, 4.0, 0.25, 1.0}, "x"};
  CHECK(sq.value(-1.0, 0, 1) == 1.0);
  CHECK(sq.value(0.5, 0, 1) == -1.0);
  CHECK(sq.value(3.2, 0, 1) == 1.0);
  std::vector<double> edges;
  sq.breakpoints(0.0, 8.0, edges);
  std::sort(edges.begin(), edges.end());
  CHECK(edges == std::vector<double>{3.0, 4.0, 7.0});

  const ControlWaveform ramp{LinearRamp{10.0, 20.0}, "x"};
  CHECK(ramp.value(3.0, 2.0, 4.0) == 12.5);
  const ControlWaveform sine{Sinusoid{2.0, 0.25, kPi / 2}, "x"};
  CHECK_THAT(sine.value(0.0, 0, 1), WithinAbs(2.0, 1e-15));
  CHECK_THAT(sine.value(1.0, 0, 1), WithinAbs(0.0, 1e-15));
}

SCENARIO("Spectrum against eps") {
  DoubleDotParams p;
  p.omega_R1 = p.omega_R2 = 10 * kMHz;
  p.t_c = 1 * kGHz;
  std::vector<double> eps;
  for (int k = 0; k <= 300; ++k) eps.push_back((50.0 - 5.0 * k) * kGHz);

  GIVEN("No detuning") {
    const auto scan = spectrum_scan(p, eps, Basis::DressedST5);
    REQUIRE(scan.size() == eps.size());
    THEN("Energies ascend and composition rows sum to one") {
      for (const auto& pt : scan) {
        for (Eigen::Index k = 1; k < pt.energies.size(); ++k) {
          CHECK(pt.energies(k) >= pt.energies(k - 1));
        }
        for (Eigen::Index k = 0; k < 5; ++k) {
          CHECK_THAT(pt.composition.row(k).sum(), WithinAbs(1.0, 1e-10));
        }
      }
    }
    THEN("The ground state at large positive eps is S(0,2)") {
      CHECK(scan.front().composition(0, 0) >= 0.999);
    }
    THEN("S(1,1) and T- cross") {
      const auto m = minimum_character_gap(p, Basis::DressedST5, 2, 4,
                                           -1500 * kGHz, 50 * kGHz, 2001);
      CHECK(m.gap < 1e3);
    }
  }
  GIVEN("Opposite detunings") {
    p.delta_nu_1 = 2 * kMHz;
    p.delta_nu_2 = -2 * kMHz;
    const auto scan = spectrum_scan(p, eps, Basis::DressedST5);
    THEN("Tracked branches change composition smoothly") {
      for (std::size_t i = 1; i < scan.size(); ++i) {
        for (int k = 0; k < 5; ++k) {
          // Find the eigenvector carrying the same branch at the previous point.
          const auto& cur = scan[i];
          const auto& prev = scan[i - 1];
          const auto it = std::find(prev.branch.begin(), prev.branch.end(),
                                    cur.branch[static_cast<std::size_t>(k)]);
          REQUIRE(it != prev.branch.end());
          const auto j = static_cast<Eigen::Index>(it - prev.branch.begin());
          const double jump =
              (cur.composition.row(k) - prev.composition.row(j))
                  .cwiseAbs()
                  .maxCoeff();
          CHECK(jump <= 0.5);
        }
      }
    }
    THEN("S(1,1) and T- anticross") {
      const auto m = minimum_character_gap(p, Basis::DressedST5, 2, 4,
                                           -1500 * kGHz, 50 * kGHz, 2001);
      CHECK(m.gap > 0.5 * kMHz);
    }
  }
  GIVEN("A single-qubit basis") {
    REQUIRE_THROWS_AS(spectrum_scan(p, eps, Basis::Rot4), ContractViolation);
  }
}

TEST_CASE("golden_section_minimize") {
  const double x =
      golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); },
                              -1.0, 2.0, 1e-10);
  CHECK_THAT(x, WithinAbs(0.3, 1e-9));
}

}  // namespace test_dynamics
}  // namespace dressim
