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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "dressim/errors.hpp"
#include "dressim/protocols.hpp"

namespace dressim::cli::detail {

std::string num(double v) { return fmt::format("{:.12g}", v); }

namespace {

StepControl step_control(const Config& c) {
  StepControl s;
  s.tolerance = c.number_or("numerics.tolerance", Unit::None, s.tolerance);
  s.max_halvings = static_cast<int>(
      c.count_or("numerics.max_halvings", static_cast<std::size_t>(s.max_halvings)));
  s.initial_dt = c.number_or("numerics.initial_dt", Unit::Time, 0.0);
  s.max_steps = c.count_or("numerics.max_steps", s.max_steps);
  return s;
}

double omega(const Config& c, const std::string& which) {
  if (c.has("system." + which, Unit::Frequency)) {
    return c.number("system." + which, Unit::Frequency);
  }
  return c.number("system.omega_r", Unit::Frequency);
}

DoubleDotParams double_dot(const Config& c) {
  DoubleDotParams p;
  p.omega_R1 = omega(c, "omega_r1");
  p.omega_R2 = omega(c, "omega_r2");
  p.t_c = c.number("system.t_c", Unit::Frequency);
  p.delta_nu_1 = c.number("system.delta_nu_1", Unit::Frequency);
  p.delta_nu_2 = c.number("system.delta_nu_2", Unit::Frequency);
  return p;
}

Basis ramp_basis(const std::string& name) {
  if (name == "dressed_st5") return Basis::DressedST5;
  if (name == "dressed5") return Basis::Dressed5;
  throw ConfigError(fmt::format(
      "protocol.basis must be dressed_st5 or dressed5, not '{}'", name));
}

std::size_t ket_index(Basis basis, const std::string& label) {
  const auto labels = ket_labels(basis);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return k;
  }
  throw ConfigError(fmt::format("no ket '{}' in basis {}", label,
                                basis_name(basis)));
}

std::string convergence(bool converged) {
  return converged ? "ok" : "not_converged";
}

// ---------------------------------------------------------------------------

CommandOutput spectrum(const Config& c, const RunOptions&) {
  const auto dd = double_dot(c);
  const Basis basis = ramp_basis(c.text_or("protocol.basis", "dressed_st5"));
  const auto eps = c.grid("protocol.eps", Unit::Frequency, "linear");
  const auto kets = c.words_or("protocol.gap_kets", {"s11", "tminus"});
  if (kets.size() != 2) {
    throw ConfigError("protocol.gap_kets needs exactly two ket labels");
  }
  const auto a = ket_index(basis, kets[0]);
  const auto b = ket_index(basis, kets[1]);

  CsvTable levels{"spectrum.csv", {"eps_hz", "level", "branch", "energy_hz"}, {}};
  for (const auto& label : ket_labels(basis)) {
    levels.columns.push_back("w_" + std::string(label));
  }
  for (const auto& pt : spectrum_scan(dd, eps, basis)) {
    for (Eigen::Index k = 0; k < pt.energies.size(); ++k) {
      std::vector<std::string> row{num(pt.eps), std::to_string(k),
                                   std::to_string(pt.branch[k]),
                                   num(pt.energies(k))};
      for (Eigen::Index j = 0; j < pt.composition.cols(); ++j) {
        row.push_back(num(pt.composition(k, j)));
      }
      levels.rows.push_back(std::move(row));
    }
  }
  const auto lo = *std::min_element(eps.begin(), eps.end());
  const auto hi = *std::max_element(eps.begin(), eps.end());
  const auto gap = minimum_character_gap(dd, basis, a, b, lo, hi, eps.size());
  CsvTable g{"spectrum_gap.csv",
             {"ket_a", "ket_b", "eps_hz", "gap_hz"},
             {{kets[0], kets[1], num(gap.eps), num(gap.gap)}}};
  return {{std::move(levels), std::move(g)}, true, {}};
}

RampSpec ramp_from(const Config& c, RampDirection dir) {
  RampSpec r = dir == RampDirection::Init ? init_ramp(0.0)
                                          : readout_ramp_spec(0.0);
  r.eps_start =
      c.number_or("protocol.eps_start", Unit::Frequency, r.eps_start);
  r.eps_end = c.number_or("protocol.eps_end", Unit::Frequency, r.eps_end);
  return r;
}

CommandOutput init_sweep(const Config& c, const RunOptions& opt) {
  const auto dd = double_dot(c);
  const auto times = c.grid("protocol.ramp_time", Unit::Time);
  const auto ramp = ramp_from(c, RampDirection::Init);
  const auto ctrl = step_control(c);
  const auto results = ramp_time_sweep(dd, ramp, times, ctrl, opt.threads);
  CsvTable t{"init_sweep.csv",
             {"ramp_time_s", "p_s02", "p_s11", "p_t0", "p_tplus", "p_tminus",
              "status"},
             {}};
  CommandOutput out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& p = results[k].populations;
    // DressedST5 order: S02, T+, S11, T0, T-.
    t.rows.push_back({num(times[k]), num(p(0)), num(p(2)), num(p(3)),
                      num(p(1)), num(p(4)), convergence(results[k].converged)});
    out.converged = out.converged && results[k].converged;
  }
  out.tables.push_back(std::move(t));
  return out;
}

StateVector readout_state(const std::string& name) {
  const double r = 1.0 / std::numbers::sqrt2;
  CVector v = CVector::Zero(5);
  if (name == "s11") {
    v(2) = 1.0;
  } else if (name == "tminus") {
    v(4) = 1.0;
  } else if (name == "tplus") {
    v(1) = 1.0;
  } else if (name == "t0") {
    v(3) = 1.0;
  } else if (name == "superposition") {
    v(2) = v(4) = r;
  } else {
    throw ConfigError(fmt::format(
        "unknown initial state '{}' (s11, tminus, tplus, t0, superposition)",
        name));
  }
  return {v, Basis::DressedST5};
}

CommandOutput readout(const Config& c, const RunOptions&) {
  const auto dd = double_dot(c);
  const auto times = c.grid("protocol.ramp_time", Unit::Time);
  const auto states = c.words_or("protocol.initial_states",
                                 {"s11", "tminus", "superposition"});
  auto ramp = ramp_from(c, RampDirection::Readout);
  const auto ctrl = step_control(c);
  CsvTable t{"readout.csv",
             {"ramp_time_s", "initial_state", "p_singlet", "status"},
             {}};
  CommandOutput out;
  for (const auto& name : states) {
    const auto psi = readout_state(name);
    for (double time : times) {
      ramp.ramp_time = time;
      const auto r = readout_ramp(dd, ramp, psi, ctrl);
      t.rows.push_back(
          {num(time), name, num(r.p_singlet), convergence(r.converged)});
      out.converged = out.converged && r.converged;
    }
  }
  out.tables.push_back(std::move(t));
  return out;
}

struct NamedGate {
  double phase;
  double angle;
};

NamedGate parse_gate(const std::string& name) {
  if (name == "sqrt_x") return {0.0, std::numbers::pi / 2};
  if (name == "sqrt_y") return {std::numbers::pi / 2, std::numbers::pi / 2};
  if (name == "x") return {0.0, std::numbers::pi};
  if (name == "y") return {std::numbers::pi / 2, std::numbers::pi};
  throw ConfigError(
      fmt::format("unknown gate '{}' (sqrt_x, sqrt_y, x, y)", name));
}

CommandOutput single_gate(const Config& c, const RunOptions&) {
  const double omega_R = c.number("system.omega_r", Unit::Frequency);
  const std::string scheme_name = c.text("protocol.scheme");
  GateScheme scheme;
  if (scheme_name == "fm") {
    scheme = GateScheme::FM;
  } else if (scheme_name == "fsk") {
    scheme = GateScheme::FSK;
  } else {
    throw ConfigError(
        fmt::format("protocol.scheme must be fm or fsk, not '{}'", scheme_name));
  }
  const double delta = c.number("protocol.delta", Unit::Frequency);
  const auto names = c.words_or("protocol.gates", {"sqrt_x", "sqrt_y"});
  const std::string mode = c.text_or("protocol.duration_mode", "calibrate");
  std::optional<double> fixed;
  if (mode == "fixed") {
    fixed = c.number("protocol.duration", Unit::Time);
  } else if (mode != "calibrate" && mode != "naive") {
    throw ConfigError(fmt::format(
        "protocol.duration_mode must be calibrate, naive or fixed, not '{}'",
        mode));
  }
  std::optional<double> f_N;
  if (scheme == GateScheme::FSK) {
    f_N = c.number_or("protocol.f_n", Unit::Frequency,
                      default_fsk_frame(omega_R, delta));
  }
  const auto ctrl = step_control(c);

  CsvTable t{"single_gate.csv",
             {"scheme", "gate", "phase_rad", "target_angle_rad", "delta_hz",
              "f_n_hz", "duration_s", "fidelity", "status"},
             {}};
  CommandOutput out;
  for (const auto& name : names) {
    const auto g = parse_gate(name);
    std::vector<std::string> row{scheme_name, name, num(g.phase), num(g.angle),
                                 num(delta), num(f_N.value_or(omega_R))};
    double duration = 0.0;
    if (fixed) {
      duration = *fixed;
    } else if (mode == "naive") {
      // Rotating-wave rate: delta / 2 for FM, (2 / pi) delta for the
      // fundamental of the FSK square wave.
      const double rate = scheme == GateScheme::FM ? delta / 2.0
                                                   : 2.0 * delta / std::numbers::pi;
      if (!(rate > 0.0)) throw ConfigError("protocol.delta must be > 0");
      duration = g.angle / (2.0 * std::numbers::pi * rate);
    } else {
      try {
        duration =
            calibrate_gate(scheme, omega_R, delta, g.phase, g.angle, ctrl, f_N)
                .duration;
      } catch (const CalibrationFailed& e) {
        out.warnings.push_back(fmt::format("{}: {}", name, e.what()));
        row.insert(row.end(), {num(NAN), num(NAN), "calibration_failed"});
        t.rows.push_back(std::move(row));
        continue;
      }
    }
    const auto r = scheme == GateScheme::FM
                       ? fm_gate(omega_R, delta, g.phase, duration, ctrl, g.angle)
                       : fsk_gate(omega_R, delta, *f_N, g.phase, duration, ctrl,
                                  g.angle);
    for (const auto& w : r.warnings) {
      out.warnings.push_back(fmt::format("{}: {}", name, w));
    }
    std::string status = "ok";
    if (!r.converged) {
      status = "not_converged";
    } else if (!r.warnings.empty()) {
      status = "warning";
    }
    out.converged = out.converged && r.converged;
    row.insert(row.end(), {num(duration), num(r.fidelity), status});
    t.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(t));
  return out;
}

CommandOutput crossover(const Config& c, const RunOptions&) {
  const auto t_cs = c.list("system.t_c", Unit::Frequency);
  const double U = c.number("system.u", Unit::Frequency);
  const double eps = c.number("system.eps", Unit::Frequency);
  const double omega_R = c.number("system.omega_r", Unit::Frequency);
  auto ratios = c.grid("protocol.ratio", Unit::None);
  if (c.flag_or("protocol.include_zero_ratio", true)) {
    ratios.insert(ratios.begin(), 0.0);
  }
  const std::string conv = c.text_or("protocol.convention", "delta2_zero");
  DetuningConvention convention;
  if (conv == "delta2_zero") {
    convention = DetuningConvention::Delta2Zero;
  } else if (conv == "delta1_zero") {
    convention = DetuningConvention::Delta1Zero;
  } else {
    throw ConfigError(fmt::format(
        "protocol.convention must be delta2_zero or delta1_zero, not '{}'",
        conv));
  }
  CsvTable t{"crossover.csv", {"t_c_hz", "ratio", "theta_rad", "status"}, {}};
  for (const auto& p :
       crossover_sweep(t_cs, ratios, convention, U, eps, omega_R)) {
    t.rows.push_back({num(p.t_c), num(p.ratio), num(p.theta), p.status});
  }
  return {{std::move(t)}, true, {}};
}

CommandOutput sw_validate(const Config& c, const RunOptions&) {
  const auto n = c.count_or("protocol.n_draws", 200);
  const auto seed = c.count_or("protocol.seed", 1);
  const auto rep = sw_random_validation(n, seed);
  CsvTable draws{"sw_validate.csv",
                 {"draw", "t_c_over_u", "t_c_hz", "u_hz", "eps_hz",
                  "omega_r_hz", "delta_nu_1_hz", "delta_nu_2_hz",
                  "reduced_0_hz", "reduced_1_hz", "full_0_hz", "full_1_hz",
                  "relative_error", "status"},
                 {}};
  for (std::size_t k = 0; k < rep.draws.size(); ++k) {
    const auto& d = rep.draws[k];
    const auto& p = d.params;
    const auto& r = d.result;
    draws.rows.push_back(
        {std::to_string(k), num(d.t_c_over_U), num(p.t_c), num(*p.U),
         num(p.eps), num(p.omega_R1), num(p.delta_nu_1), num(p.delta_nu_2),
         num(r.reduced(0)), num(r.reduced(1)), num(r.full(0)), num(r.full(1)),
         num(r.relative_error), r.status});
  }
  CsvTable bins{"sw_bins.csv",
                {"t_c_over_u_lo", "t_c_over_u_hi", "median_relative_error"},
                {}};
  for (std::size_t b = 0; b < rep.bin_medians.size(); ++b) {
    bins.rows.push_back({num(rep.bin_edges[b]), num(rep.bin_edges[b + 1]),
                         num(rep.bin_medians[b])});
  }
  return {{std::move(draws), std::move(bins)}, true, {}};
}

CommandOutput decompose_check(const Config& c, const RunOptions&) {
  const double threshold = c.number_or("protocol.min_fidelity", Unit::None,
                                       1.0 - 1e-9);
  CsvTable t{"decompose.csv",
             {"name", "gate_count", "sqrt_swap_count", "fidelity", "status"},
             {}};
  for (const auto& [name, circ] : builtin_decompositions()) {
    const double f =
        gate_fidelity(circuit_unitary(circ), decomposition_target(name));
    const auto swaps = std::count_if(
        circ.gates.begin(), circ.gates.end(), [](const CircuitGate& g) {
          return std::holds_alternative<SqrtSwapGate>(g);
        });
    t.rows.push_back({name, std::to_string(circ.gates.size()),
                      std::to_string(swaps), num(f),
                      f >= threshold ? "ok" : "mismatch"});
  }
  const Circuit twice{{SqrtSwapGate{}, SqrtSwapGate{}}};
  const double f = gate_fidelity(circuit_unitary(twice),
                                 UnitaryOperator(gates::swap(), Basis::Dressed4));
  t.rows.push_back({"SQRT_SWAP_SQUARED", "2", "2", num(f),
                    f >= threshold ? "ok" : "mismatch"});
  return {{std::move(t)}, true, {}};
}

CommandOutput rwa_check(const Config& c, const RunOptions&) {
  const double g = c.number("system.g");
  const double B0 = c.number("system.b0", Unit::Field);
  const double B1 = c.number("system.b1", Unit::Field);
  const double f_mw = c.number("system.f_mw", Unit::Frequency);
  const auto p = SingleQubitParams::from_lab(g, B0, B1, f_mw);
  const double duration = c.number("protocol.duration", Unit::Time);
  const auto n = c.count_or("protocol.n_samples", 200);
  const auto r = rwa_crosscheck(p, duration, step_control(c), n);
  CsvTable t{"rwa.csv", {"time_s", "p_down_lab", "p_down_rot", "deviation"}, {}};
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.rows.push_back({num(r.times[k]), num(r.p_down_lab[k]),
                      num(r.p_down_rot[k]),
                      num(std::abs(r.p_down_lab[k] - r.p_down_rot[k]))});
  }
  CommandOutput out{{std::move(t)}, r.converged, {}};
  return out;
}

}  // namespace

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> all{
      {"spectrum", {spectrum, "Energy levels and composition against eps"}},
      {"init-sweep", {init_sweep, "Initialisation ramp populations against ramp time"}},
      {"readout", {readout, "Readout ramp singlet probability"}},
      {"single-gate", {single_gate, "Calibrated FSK or FM single-qubit gates"}},
      {"crossover", {crossover, "Exchange/Ising axis angle against detuning ratio"}},
      {"sw-validate", {sw_validate, "Seeded Schrieffer-Wolff accuracy draws"}},
      {"decompose-check", {decompose_check, "Builtin circuit decompositions"}},
      {"rwa-check", {rwa_check, "Lab frame against rotating-wave populations"}},
  };
  return all;
}

}  // namespace dressim::cli::detail
