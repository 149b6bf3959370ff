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

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dressim/core.hpp"
#include "dressim/model.hpp"

namespace dressim {

// ---------------------------------------------------------------------------
// Control waveforms

struct Constant {
  double value = 0.0;
};

/** level_on while frac((t + phase_offset) / period) < duty, else level_off.
 * t is absolute schedule time. */
struct Square {
  double level_on = 0.0;
  double level_off = 0.0;
  double period = 0.0;
  double duty = 0.5;
  double phase_offset = 0.0;  // seconds
};

/** amplitude * sin(2 pi frequency t + phase), t absolute schedule time. */
struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

/** Linear interpolation from start to end across the owning segment. */
struct LinearRamp {
  double start = 0.0;
  double end = 0.0;
};

struct ControlWaveform {
  std::variant<Constant, Square, Sinusoid, LinearRamp> kind;
  std::string target;

  /** t: absolute time; seg_start/seg_duration locate the owning segment. */
  double value(double t, double seg_start, double seg_duration) const;
  /** Appends discontinuities strictly inside (t0, t1). */
  void breakpoints(double t0, double t1, std::vector<double>& out) const;
  void validate() const;
};

struct Segment {
  double duration = 0.0;
  std::vector<ControlWaveform> waveforms;
};

struct PulseSchedule {
  std::vector<Segment> segments;
  Basis basis = Basis::Rot2;

  double total_duration() const;
  void validate() const;
};

using ParamSet = std::variant<SingleQubitParams, DoubleDotParams>;

/** Parameters with every waveform of `seg` applied at time t. */
ParamSet params_at(const ParamSet& base, const Segment& seg, double seg_start,
                   double t);
HermitianOperator hamiltonian_at(const PulseSchedule& schedule,
                                 const ParamSet& base, double t);

// ---------------------------------------------------------------------------
// Evolution

struct StepControl {
  /** <= 0 selects min(duration / 1000, 1 / (8 max |off-diagonal H|)). */
  double initial_dt = 0.0;
  double tolerance = 1e-8;
  int max_halvings = 20;
  /** Per-level step budget; exceeding it ends the halving loop unconverged. */
  std::size_t max_steps = std::size_t{1} << 26;
};

struct Sample {
  double time = 0.0;
  RVector populations;
};

struct EvolutionResult {
  StateVector final_state;
  std::vector<Sample> samples;
  std::size_t steps_used = 0;  // steps in the returned (finest) level
  bool converged = false;
  double estimated_error = std::numeric_limits<double>::infinity();
  /** Largest | ||psi|| - 1 | seen along the returned trajectory. */
  double max_norm_drift = 0.0;
};

struct EvolveOptions {
  /** Populations are recorded exactly at these times (clipped to the
   * schedule). The staircase is split at each of them. */
  std::vector<double> sample_times;
};

/**
 * Midpoint staircase: within each step H is frozen at the mid-step parameter
 * values and applied through its exact exponential. The step is halved
 * globally until the final state moves by less than ctrl.tolerance (2-norm).
 * Non-convergence is reported in the result, not thrown.
 */
EvolutionResult evolve(const PulseSchedule& schedule, const ParamSet& params,
                       const StateVector& psi0, const StepControl& ctrl,
                       const EvolveOptions& options = {});

struct UnitarySample {
  double time = 0.0;
  CMatrix propagator;  // U(time, 0)
};

struct UnitaryEvolution {
  UnitaryOperator unitary;
  std::size_t steps_used = 0;
  bool converged = false;
  double estimated_error = std::numeric_limits<double>::infinity();
  std::vector<UnitarySample> samples;  // at options.sample_times
  /** max |U^dagger U - I| over the final propagator and the samples. Above
   * kUnitarityTolerance the run is reported as not converged and the
   * propagators are replaced by their polar (closest unitary) factors. */
  double max_unitarity_defect = 0.0;
};

/** Same scheme as evolve, propagating the full d x d propagator. Convergence
 * uses the max-abs entry difference of the final propagator. */
UnitaryEvolution evolve_unitary(const PulseSchedule& schedule,
                                const ParamSet& params,
                                const StepControl& ctrl,
                                const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Spectrum vs. eps

struct SpectrumPoint {
  double eps = 0.0;
  RVector energies;  // ascending, Hz
  /** composition(k, j) = |<ket j | eigenvector k>|^2; rows sum to 1. */
  Eigen::MatrixXd composition;
  /** branch[k]: continuous branch id of eigenvector k, tracked by overlap. */
  std::vector<int> branch;
};

/** basis must be Dressed5 or DressedST5. */
std::vector<SpectrumPoint> spectrum_scan(const DoubleDotParams& params,
                                         std::span<const double> eps_values,
                                         Basis basis);

/**
 * Gap between the two eigenstates carrying the most weight on
 * span{ket_a, ket_b}, evaluated at params.eps.
 */
double character_gap(const DoubleDotParams& params, Basis basis,
                     std::size_t ket_a, std::size_t ket_b);

struct GapMinimum {
  double eps = 0.0;
  double gap = 0.0;
};

/** Minimum of character_gap over [eps_lo, eps_hi]: uniform scan of n_scan
 * points, then golden-section refinement around the best point. */
GapMinimum minimum_character_gap(const DoubleDotParams& params, Basis basis,
                                 std::size_t ket_a, std::size_t ket_b,
                                 double eps_lo, double eps_hi,
                                 std::size_t n_scan);

/** Golden-section minimisation of f on [lo, hi] to absolute tolerance tol. */
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
  const double invphi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace dressim
