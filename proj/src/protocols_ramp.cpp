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

#include <cmath>
#include <fmt/format.h>

#include "dressim/errors.hpp"
#include "dressim/protocols.hpp"
#include "parallel.hpp"

namespace dressim {

void RampSpec::validate() const {
  if (!(ramp_time > 0.0) || !std::isfinite(ramp_time)) {
    throw ContractViolation(
        fmt::format("ramp_time must be finite and > 0 (got {})", ramp_time));
  }
  if (!std::isfinite(eps_start) || !std::isfinite(eps_end)) {
    throw ContractViolation("ramp endpoints must be finite");
  }
  if (direction == RampDirection::Init && !(eps_start > eps_end)) {
    throw ContractViolation("init ramp needs eps_start > eps_end");
  }
  if (direction == RampDirection::Readout && !(eps_start < eps_end)) {
    throw ContractViolation("readout ramp needs eps_start < eps_end");
  }
}

RampSpec init_ramp(double ramp_time) {
  return {kRampEpsHigh, kRampEpsLow, ramp_time, RampDirection::Init};
}

RampSpec readout_ramp_spec(double ramp_time) {
  return {kRampEpsLow, kRampEpsHigh, ramp_time, RampDirection::Readout};
}

namespace {

PulseSchedule ramp_schedule(const RampSpec& ramp) {
  PulseSchedule s;
  s.basis = Basis::Dressed5;
  s.segments.push_back(
      {ramp.ramp_time, {{LinearRamp{ramp.eps_start, ramp.eps_end}, "eps"}}});
  return s;
}

}  // namespace

RampResult initialize_ramp(const DoubleDotParams& dd, const RampSpec& ramp,
                           const StepControl& ctrl) {
  ramp.validate();
  if (ramp.direction != RampDirection::Init) {
    throw ContractViolation("initialize_ramp needs an init ramp");
  }
  DoubleDotParams start = dd;
  start.eps = ramp.eps_start;
  const auto dec = eigh(build_hamiltonian(Basis::Dressed5, start));
  const StateVector ground(dec.vectors.matrix().col(0), Basis::Dressed5);
  const auto r = evolve(ramp_schedule(ramp), dd, ground, ctrl);
  return {to_singlet_triplet(r.final_state).populations(), r.converged,
          r.estimated_error, r.steps_used};
}

std::vector<RampResult> ramp_time_sweep(const DoubleDotParams& dd,
                                        const RampSpec& ramp_template,
                                        std::span<const double> ramp_times,
                                        const StepControl& ctrl,
                                        unsigned threads) {
  std::vector<RampResult> out(ramp_times.size());
  detail::parallel_for(ramp_times.size(), threads, [&](std::size_t i) {
    RampSpec r = ramp_template;
    r.ramp_time = ramp_times[i];
    out[i] = initialize_ramp(dd, r, ctrl);
  });
  return out;
}

ReadoutResult readout_ramp(const DoubleDotParams& dd, const RampSpec& ramp,
                           const StateVector& psi, const StepControl& ctrl) {
  ramp.validate();
  if (ramp.direction != RampDirection::Readout) {
    throw ContractViolation("readout_ramp needs a readout ramp");
  }
  StateVector psi5 = psi;
  if (psi.basis() == Basis::DressedST5) {
    psi5 = from_singlet_triplet(psi);
  } else if (psi.basis() != Basis::Dressed5) {
    throw BasisMismatch(fmt::format("readout_ramp needs Dressed5 or DressedST5, "
                                    "got {}",
                                    basis_name(psi.basis())));
  }
  const auto r = evolve(ramp_schedule(ramp), dd, psi5, ctrl);
  return {r.final_state.populations()(0), r.converged, r.estimated_error};
}

}  // namespace dressim
