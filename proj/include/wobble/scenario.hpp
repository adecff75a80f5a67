/*
 * Copyright 2026 The uav-wobble Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file scenario.hpp
 * @brief Scenario description and the flat key = value scenario file format.
 *
 * Example:
 *
 *   # wobbling with rotor vibration
 *   name          = table1_row10
 *   mu            = 30
 *   omega_v       = 20pi
 *   sigma_d_scale = 0.001          # or: sigma_v = 0.0127
 *   f_c_hz        = 28e9
 *   t_max         = 0.1
 *   products      = sigma_d2, acf
 *
 * Numbers accept an optional `pi` factor (`20pi`, `20*pi`, `pi`).
 * `sigma_d_scale = s` sets sigma_v = s * n(mu, omega_v), with the per-regime
 * normalisation n = sqrt(2), omega_v/sqrt(2), sqrt(mu) or
 * sqrt((omega_v^2 + mu^2)/mu), which makes sigma_d^2 grow like s^2 dt^2,
 * s^2 sin^2(omega_v dt/2), s^2 dt or s^2 dt respectively.
 */

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wobble/doppler_psd.hpp"
#include "wobble/link_bep.hpp"
#include "wobble/montecarlo.hpp"
#include "wobble/temporal_acf.hpp"
#include "wobble/wobble_process.hpp"

namespace wobble {

enum class Product { SigmaD2, Acf, Psd, Abep };

constexpr std::string_view to_string(Product p) noexcept {
  switch (p) {
    case Product::SigmaD2: return "sigma_d2";
    case Product::Acf: return "acf";
    case Product::Psd: return "psd";
    case Product::Abep: return "abep";
  }
  return "unknown";
}

inline std::optional<Product> parse_product(std::string_view s) {
  if (s == "sigma_d2" || s == "sigma-d" || s == "sigma_d") return Product::SigmaD2;
  if (s == "acf") return Product::Acf;
  if (s == "psd") return Product::Psd;
  if (s == "abep" || s == "bep") return Product::Abep;
  return std::nullopt;
}

enum class OutputFormat { Csv, Json };

/// Normalisation that makes sigma_d_scale the displacement scale of each regime.
inline double sigma_v_for_displacement_scale(double scale, double mu,
                                             double omega_v) {
  const WobbleParams probe{1.0, mu, omega_v};
  switch (classify_regime(probe)) {
    case Regime::FreeDrift: return scale * std::numbers::sqrt2;
    case Regime::PureVibration: return scale * omega_v / std::numbers::sqrt2;
    case Regime::CorrelatedDrift: return scale * std::sqrt(mu);
    case Regime::General:
      return scale * std::sqrt((omega_v * omega_v + mu * mu) / mu);
  }
  return scale;
}

struct Scenario {
  std::string name = "scenario";
  WobbleParams params;
  CarrierParams carrier;
  TimeGrid grid;
  McConfig mc;
  std::vector<Product> outputs{Product::SigmaD2, Product::Acf};

  /// Output every lag_stride-th grid sample for sigma_d2 / acf / abep.
  std::size_t lag_stride = 1;
  Window window = Window::Rectangular;
  std::size_t pad_factor = 1;
  /// Longest ACF lag fed to the PSD (the ACF is also cut once below 1e-3).
  double psd_t_cap = 1.0;
  double psd_threshold = 1e-3;
  ModulationSpec modulation;
  OutputFormat format = OutputFormat::Csv;

  void validate() const {
    params.validate();
    carrier.validate();
    grid.validate();
    mc.validate();
    if (lag_stride < 1) throw std::invalid_argument("Scenario: lag_stride >= 1 violated");
    if (pad_factor < 1) throw std::invalid_argument("Scenario: pad_factor >= 1 violated");
    if (!(psd_t_cap > 0.0)) throw std::invalid_argument("Scenario: psd_t_max > 0 violated");
    if (outputs.empty()) throw std::invalid_argument("Scenario: products must not be empty");
    for (Product p : outputs) {
      if ((p == Product::SigmaD2 || p == Product::Acf) && mc.n_realizations < 100) {
        throw std::invalid_argument("Scenario: n_realizations >= 100 violated");
      }
      if (p == Product::Abep) modulation.validate();
    }
  }
};

/// Parse or validation failure, with file/line/key context in what().
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view text) {
  std::string_view s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = std::numbers::pi;
    s.remove_suffix(2);
    s = trim(s);
    if (!s.empty() && s.back() == '*') {
      s.remove_suffix(1);
      s = trim(s);
    }
    if (s.empty()) return factor;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v * factor;
}

inline std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
  const std::string_view s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // Accept integral values written in floating notation, e.g. 1e4.
    const auto d = parse_number(s);
    if (d && *d >= 0.0 && *d == std::floor(*d) && *d < 1.8e19) {
      return static_cast<std::uint64_t>(*d);
    }
    return std::nullopt;
  }
  return v;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') s.remove_prefix(1);
  if (!s.empty() && s.back() == ']') s.remove_suffix(1);
  std::vector<std::string_view> items;
  while (!s.empty()) {
    const auto pos = s.find(',');
    const auto item = trim(s.substr(0, pos));
    if (!item.empty()) items.push_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return items;
}

}  // namespace detail

/**
 * Parses scenario text. `origin` prefixes diagnostics (usually the path).
 * Unknown keys, malformed values and invariant violations throw ScenarioError.
 */
inline Scenario parse_scenario(std::string_view text,
                               const std::string& origin = "<scenario>") {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry, std::less<>> kv;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string value{detail::trim(line.substr(eq + 1))};
    if (key.empty()) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (kv.contains(key)) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) + ": key '" +
                          key + "' given twice");
    }
    kv.emplace(key, Entry{value, line_no});
  }

  auto where = [&](const std::string& key) {
    return origin + ":" + std::to_string(kv.at(key).line) + ": key '" + key + "'";
  };
  auto number = [&](const std::string& key) -> std::optional<double> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    const auto v = detail::parse_number(it->second.value);
    if (!v) throw ScenarioError(where(key) + ": expected a number, got '" + it->second.value + "'");
    return v;
  };
  auto count = [&](const std::string& key) -> std::optional<std::uint64_t> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    const auto v = detail::parse_unsigned(it->second.value);
    if (!v) {
      throw ScenarioError(where(key) + ": expected a non-negative integer, got '" +
                          it->second.value + "'");
    }
    return v;
  };

  static const std::vector<std::string> known = {
      "name",    "sigma_v",  "sigma_d_scale", "mu",        "omega_v",   "f_c_hz",
      "c",       "dt",       "t_max",         "n_realizations", "seed", "threads",
      "products", "lag_stride", "window",     "pad_factor", "psd_t_max",
      "psd_threshold", "modulation", "order", "snr_db",   "format"};
  for (const auto& [key, entry] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ScenarioError(origin + ":" + std::to_string(entry.line) +
                          ": unknown key '" + key + "'");
    }
  }

  Scenario s;
  if (kv.contains("name")) s.name = kv.at("name").value;
  s.params.mu = number("mu").value_or(0.0);
  s.params.omega_v = number("omega_v").value_or(0.0);
  const auto sigma_v = number("sigma_v");
  const auto scale = number("sigma_d_scale");
  if (sigma_v && scale) {
    throw ScenarioError(where("sigma_d_scale") + ": give either sigma_v or sigma_d_scale");
  }
  if (!sigma_v && !scale) {
    throw ScenarioError(origin + ": missing key 'sigma_v' (or 'sigma_d_scale')");
  }
  s.params.sigma_v = sigma_v ? *sigma_v
                             : sigma_v_for_displacement_scale(*scale, s.params.mu,
                                                              s.params.omega_v);
  const double c = number("c").value_or(kSpeedOfLight);
  s.carrier = CarrierParams::from_frequency(number("f_c_hz").value_or(28e9), c);

  const double dt = number("dt").value_or(0.0);
  const double t_max = number("t_max").value_or(0.1);
  if (!(t_max > 0.0)) throw ScenarioError(where("t_max") + ": t_max > 0 violated");
  if (kv.contains("dt") && !(dt > 0.0)) {
    throw ScenarioError(where("dt") + ": dt > 0 violated");
  }

  s.mc.n_realizations = count("n_realizations").value_or(10000);
  s.mc.master_seed = count("seed").value_or(s.mc.master_seed);
  s.mc.n_threads = static_cast<unsigned>(count("threads").value_or(1));
  s.lag_stride = count("lag_stride").value_or(1);
  s.pad_factor = count("pad_factor").value_or(1);
  s.psd_t_cap = number("psd_t_max").value_or(1.0);
  s.psd_threshold = number("psd_threshold").value_or(1e-3);

  if (kv.contains("products")) {
    s.outputs.clear();
    for (auto item : detail::split_list(kv.at("products").value)) {
      const auto p = parse_product(item);
      if (!p) {
        throw ScenarioError(where("products") + ": unknown product '" +
                            std::string(item) + "'");
      }
      s.outputs.push_back(*p);
    }
  }
  if (kv.contains("window")) {
    const auto& w = kv.at("window").value;
    if (w == "rect" || w == "rectangular") s.window = Window::Rectangular;
    else if (w == "hann") s.window = Window::Hann;
    else throw ScenarioError(where("window") + ": expected rect or hann");
  }
  if (kv.contains("format")) {
    const auto& f = kv.at("format").value;
    if (f == "csv") s.format = OutputFormat::Csv;
    else if (f == "json") s.format = OutputFormat::Json;
    else throw ScenarioError(where("format") + ": expected csv or json");
  }
  if (kv.contains("modulation")) {
    const auto& m = kv.at("modulation").value;
    if (m == "psk") s.modulation.scheme = Scheme::PSK;
    else if (m == "qam") s.modulation.scheme = Scheme::QAM;
    else throw ScenarioError(where("modulation") + ": expected psk or qam");
  }
  s.modulation.M = static_cast<unsigned>(count("order").value_or(4));
  s.modulation.snr_db = number("snr_db").value_or(20.0);

  // Invariants on the physical parameters before deriving the grid.
  try {
    s.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
  const double step = dt > 0.0 ? dt : default_dt(s.params);
  s.grid = TimeGrid::covering(step, t_max);

  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace wobble
