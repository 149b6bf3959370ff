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

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dressim::cli {

/** Malformed or incomplete configuration (exit code 2). */
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Output could not be written (exit code 74). */
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Unit { Frequency, Time, Field, Angle, None };

/**
 * Flat "section.key" view of an INI file. Physical quantities carry their
 * unit in the key name (t_c_ghz, ramp_time_us, b1_mt); lookups take the key
 * without the suffix and return SI values (Hz, s, T, rad).
 *
 * Every lookup is remembered with the text it resolved to, defaults
 * included, so the CSV header can record the configuration that actually
 * produced the data.
 */
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::string_view ini_text);

  /** "section.key=value"; replaces or adds. */
  void set(std::string_view assignment);

  bool has(std::string_view key, Unit unit = Unit::None) const;

  std::string text(std::string_view key) const;
  std::string text_or(std::string_view key, std::string_view fallback) const;
  double number(std::string_view key, Unit unit = Unit::None) const;
  double number_or(std::string_view key, Unit unit, double fallback) const;
  std::optional<double> number_opt(std::string_view key,
                                   Unit unit = Unit::None) const;
  std::vector<double> list(std::string_view key, Unit unit = Unit::None) const;
  std::vector<std::string> words_or(std::string_view key,
                                    std::vector<std::string> fallback) const;
  std::size_t count_or(std::string_view key, std::size_t fallback) const;
  bool flag_or(std::string_view key, bool fallback) const;

  /**
   * Explicit list `<base>s` (e.g. protocol.ramp_times_us), or a grid from
   * `<base>_min`, `<base>_max`, `<base>_points` and `<base>_spacing`
   * (log | linear).
   */
  std::vector<double> grid(std::string_view base, Unit unit,
                           std::string_view default_spacing = "log") const;

  /** Sorted key/value pairs that were looked up. */
  const std::map<std::string, std::string>& resolved() const {
    return used_;
  }
  /** Keys present in the file that nothing looked up. */
  std::vector<std::string> unused() const;

 private:
  std::optional<std::pair<std::string, double>> find(std::string_view key,
                                                      Unit unit) const;
  const std::string& raw(const std::string& full) const;

  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> used_;
};

/** Tool version written into every CSV header. */
std::string_view version();

/**
 * Parses `args` (without the program name), runs the subcommand and writes
 * its CSV files. Returns the process exit code: 0 success, 2 configuration
 * error, 3 numerics did not converge (CSVs are still written), 64 usage
 * error, 74 output error.
 */
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dressim::cli
