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

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <system_error>

#include "commands.hpp"
#include "dressim/errors.hpp"

namespace dressim::cli {

namespace {

namespace fs = std::filesystem;
using detail::CsvTable;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

std::string render(const CsvTable& t, const std::string& command,
                   const Config& cfg) {
  std::string out = fmt::format("# dressim {}\n# command = {}\n", version(),
                                command);
  for (const auto& [k, v] : cfg.resolved()) {
    out += fmt::format("# {} = {}\n", k, v);
  }
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    return line + '\n';
  };
  out += join(t.columns);
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) {
      throw std::logic_error(fmt::format("{}: row of {} cells for {} columns",
                                         t.file, row.size(), t.columns.size()));
    }
    out += join(row);
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot open {}", tmp.string()));
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    f.flush();
    if (!f) throw IoError(fmt::format("cannot write {}", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot rename onto {}", path.string()));
  }
}

}  // namespace

std::string_view version() { return DRESSIM_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Dressed-spin qubit simulations", "dressim"};
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--set", overrides, "Override, section.key=value")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--seed", seed, "Seed for random draws (protocol.seed)");
  app.add_option("--threads", threads,
                 "Worker threads for sweeps (0 = all cores)");
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  for (const auto& [name, cmd] : detail::commands()) {
    app.add_subcommand(name, cmd.description)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dressim: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Config cfg;
  detail::CommandOutput result;
  try {
    if (!config_path.empty()) cfg = Config::load(config_path);
    for (const auto& o : overrides) cfg.set(o);
    if (seed) cfg.set(fmt::format("protocol.seed={}", *seed));
    result = detail::commands().at(command).fn(cfg, {threads});
  } catch (const ConfigError& e) {
    err << "dressim: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "dressim: invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "dressim: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& k : cfg.unused()) {
    err << "dressim: warning: unused config key " << k << '\n';
  }
  for (const auto& w : result.warnings) {
    err << "dressim: warning: " << w << '\n';
  }

  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
      throw IoError(fmt::format("cannot create output directory {}", out_dir));
    }
    for (const auto& t : result.tables) {
      write_atomic(fs::path(out_dir) / t.file, render(t, command, cfg));
      out << (fs::path(out_dir) / t.file).string() << '\n';
    }
  } catch (const IoError& e) {
    err << "dressim: " << e.what() << '\n';
    return kExitIo;
  }
  if (!result.converged) {
    err << "dressim: numerics did not converge for some points (see status "
           "column)\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace dressim::cli
