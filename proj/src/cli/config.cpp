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
#include <array>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <numbers>
#include <span>
#include <sstream>

#include "dressim/cli.hpp"

namespace dressim::cli {

namespace {

struct Suffix {
  std::string_view text;
  double scale;
};

constexpr std::array<Suffix, 4> kFrequency{
    {{"_hz", 1.0}, {"_khz", 1e3}, {"_mhz", 1e6}, {"_ghz", 1e9}}};
constexpr std::array<Suffix, 4> kTime{
    {{"_s", 1.0}, {"_ms", 1e-3}, {"_us", 1e-6}, {"_ns", 1e-9}}};
constexpr std::array<Suffix, 2> kField{{{"_t", 1.0}, {"_mt", 1e-3}}};
constexpr std::array<Suffix, 2> kAngle{
    {{"_rad", 1.0}, {"_deg", std::numbers::pi / 180.0}}};
constexpr std::array<Suffix, 1> kNone{{{"", 1.0}}};

std::span<const Suffix> suffixes(Unit unit) {
  switch (unit) {
    case Unit::Frequency: return kFrequency;
    case Unit::Time: return kTime;
    case Unit::Field: return kField;
    case Unit::Angle: return kAngle;
    case Unit::None: return kNone;
  }
  return kNone;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size() ||
      !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, t));
  }
  return v;
}

std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string expected_keys(std::string_view key, Unit unit) {
  std::string out;
  for (const auto& s : suffixes(unit)) {
    if (!out.empty()) out += ", ";
    out += std::string(key) + std::string(s.text);
  }
  return out;
}

}  // namespace

Config Config::parse(std::string_view ini_text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(ini_text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError(
          fmt::format("key '{}' outside a [section]", section));
    }
    for (const auto& [key, value] : body) {
      c.values_[section + "." + key] = trim(value.data());
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const std::string key = trim(assignment.substr(0, eq));
  if (eq == std::string_view::npos || key.find('.') == std::string::npos ||
      key.front() == '.' || key.back() == '.') {
    throw ConfigError(fmt::format(
        "override '{}' is not of the form section.key=value", assignment));
  }
  values_[key] = trim(assignment.substr(eq + 1));
}

std::optional<std::pair<std::string, double>> Config::find(
    std::string_view key, Unit unit) const {
  std::optional<std::pair<std::string, double>> hit;
  for (const auto& s : suffixes(unit)) {
    std::string full = std::string(key) + std::string(s.text);
    if (values_.count(full)) {
      if (hit) {
        throw ConfigError(fmt::format("both {} and {} are set", hit->first,
                                      full));
      }
      hit.emplace(std::move(full), s.scale);
    }
  }
  return hit;
}

const std::string& Config::raw(const std::string& full) const {
  const auto& v = values_.at(full);
  used_[full] = v;
  return v;
}

bool Config::has(std::string_view key, Unit unit) const {
  return find(key, unit).has_value();
}

std::string Config::text(std::string_view key) const {
  const std::string k(key);
  if (!values_.count(k)) {
    throw ConfigError(fmt::format("missing required field {}", k));
  }
  return raw(k);
}

std::string Config::text_or(std::string_view key,
                            std::string_view fallback) const {
  const std::string k(key);
  if (values_.count(k)) return raw(k);
  used_[k] = std::string(fallback);
  return std::string(fallback);
}

std::optional<double> Config::number_opt(std::string_view key,
                                         Unit unit) const {
  const auto hit = find(key, unit);
  if (!hit) return std::nullopt;
  return to_double(hit->first, raw(hit->first)) * hit->second;
}

double Config::number(std::string_view key, Unit unit) const {
  const auto v = number_opt(key, unit);
  if (!v) {
    throw ConfigError(fmt::format("missing required field {} (set one of {})",
                                  key, expected_keys(key, unit)));
  }
  return *v;
}

double Config::number_or(std::string_view key, Unit unit,
                         double fallback) const {
  if (const auto v = number_opt(key, unit)) return *v;
  // Defaults are recorded in the first (SI) unit.
  used_[std::string(key) + std::string(suffixes(unit).front().text)] =
      fmt::format("{:.12g}", fallback);
  return fallback;
}

std::vector<double> Config::list(std::string_view key, Unit unit) const {
  const auto hit = find(key, unit);
  if (!hit) {
    throw ConfigError(fmt::format("missing required field {} (set one of {})",
                                  key, expected_keys(key, unit)));
  }
  std::vector<double> out;
  for (const auto& item : split(raw(hit->first))) {
    out.push_back(to_double(hit->first, item) * hit->second);
  }
  if (out.empty()) throw ConfigError(fmt::format("{} is empty", hit->first));
  return out;
}

std::vector<std::string> Config::words_or(
    std::string_view key, std::vector<std::string> fallback) const {
  const std::string k(key);
  if (!values_.count(k)) {
    std::string joined;
    for (const auto& w : fallback) joined += (joined.empty() ? "" : ", ") + w;
    used_[k] = joined;
    return fallback;
  }
  auto out = split(raw(k));
  if (out.empty()) throw ConfigError(fmt::format("{} is empty", k));
  return out;
}

std::size_t Config::count_or(std::string_view key,
                             std::size_t fallback) const {
  const std::string k(key);
  if (!values_.count(k)) {
    used_[k] = std::to_string(fallback);
    return fallback;
  }
  const std::string t = raw(k);
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", k, t));
  }
  return v;
}

bool Config::flag_or(std::string_view key, bool fallback) const {
  const std::string k(key);
  if (!values_.count(k)) {
    used_[k] = fallback ? "true" : "false";
    return fallback;
  }
  std::string t = raw(k);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", k, t));
}

std::vector<double> Config::grid(std::string_view base, Unit unit,
                                 std::string_view default_spacing) const {
  const std::string b(base);
  if (has(b + "s", unit)) return list(b + "s", unit);
  const double lo = number(b + "_min", unit);
  const double hi = number(b + "_max", unit);
  const std::size_t n = count_or(b + "_points", 0);
  if (n == 0) throw ConfigError(fmt::format("{}_points must be >= 1", b));
  const std::string spacing = text_or(b + "_spacing", default_spacing);
  std::vector<double> out(n);
  if (spacing == "log") {
    if (!(lo > 0.0 && hi > 0.0)) {
      throw ConfigError(fmt::format("log grid {} needs positive bounds", b));
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double u = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      out[k] = lo * std::pow(hi / lo, u);
    }
  } else if (spacing == "linear") {
    for (std::size_t k = 0; k < n; ++k) {
      const double u = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      out[k] = lo + (hi - lo) * u;
    }
  } else {
    throw ConfigError(
        fmt::format("{}_spacing must be log or linear, not '{}'", b, spacing));
  }
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

}  // namespace dressim::cli
