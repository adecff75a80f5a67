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
 * @file harness.hpp
 * @brief Scenario execution, data export and the built-in figure sets.
 *
 * Tables are written as CSV (header row, %.17g numbers) or as JSON objects
 * with one array per column. Every run directory also receives a
 * manifest.json describing the parameters, seed, build and wall time.
 */

#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "wobble/displacement_stats.hpp"
#include "wobble/doppler_psd.hpp"
#include "wobble/link_bep.hpp"
#include "wobble/scenario.hpp"
#include "wobble/temporal_acf.hpp"

#ifndef WOBBLE_GIT_DESCRIBE
#define WOBBLE_GIT_DESCRIBE "unknown"
#endif

namespace wobble {

namespace fs = std::filesystem;

/// Column-major numeric table; `name` becomes the file stem.
struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

struct RunReport {
  fs::path out_dir;
  std::vector<fs::path> files;
  double wall_seconds = 0.0;
};

namespace detail {

inline void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v,
                    std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  out.append(buf.data(), ptr);
}

inline void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + dir.string() +
                             "': " + ec.message());
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

template <class T>
std::vector<T> every_nth(const std::vector<T>& v, std::size_t stride) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
  return out;
}

}  // namespace detail

inline std::string to_csv(const DataTable& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) {
      if (c) out += ',';
      detail::append_number(out, t.data[c][r]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const DataTable& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  nlohmann::ordered_json cols = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) cols[t.columns[c]] = t.data[c];
  j["data"] = std::move(cols);
  return j;
}

inline fs::path write_table(const DataTable& t, const fs::path& dir,
                            OutputFormat format) {
  if (t.columns.size() != t.data.size()) {
    throw std::logic_error("table '" + t.name + "': column count mismatch");
  }
  if (format == OutputFormat::Csv) {
    const fs::path p = dir / (t.name + ".csv");
    detail::write_text(p, to_csv(t));
    return p;
  }
  const fs::path p = dir / (t.name + ".json");
  detail::write_text(p, to_json(t).dump(2) + "\n");
  return p;
}

// ---------------------------------------------------------------- products

inline DataTable sigma_d2_table(const Scenario& s, std::string name = "sigma_d2") {
  const auto emp = sigma_d2_empirical_curve(s.params, s.grid, s.mc, s.lag_stride);
  DataTable t{std::move(name),
              {"delta_t", "sigma_d2_exact", "sigma_d2_asymptotic", "sigma_d2_empirical"},
              {{}, {}, {}, {}}};
  for (std::size_t i = 0; i < emp.delta_t.size(); ++i) {
    const double lag = emp.delta_t[i];
    t.data[0].push_back(lag);
    t.data[1].push_back(sigma_d2_exact(s.params, lag).value);
    t.data[2].push_back(sigma_d2_asymptotic(s.params, lag).value);
    t.data[3].push_back(emp.mean[i]);
  }
  return t;
}

inline DataTable acf_table(const Scenario& s, std::string name = "acf") {
  const auto emp = acf_empirical(s.params, s.carrier, s.grid, s.mc);
  const auto lags = detail::every_nth(emp.delta_t, s.lag_stride);
  const auto values = detail::every_nth(*emp.empirical, s.lag_stride);
  DataTable t{std::move(name),
              {"delta_t", "acf_analytic", "acf_empirical_re", "acf_empirical_im"},
              {lags, acf_closed_form_values(s.params, s.carrier, lags), {}, {}}};
  for (const auto& z : values) {
    t.data[2].push_back(z.real());
    t.data[3].push_back(z.imag());
  }
  return t;
}

inline DopplerSpectrum scenario_spectrum(const Scenario& s) {
  const auto acf = acf_analytic_until_decay(s.params, s.carrier, s.grid.dt,
                                            s.psd_threshold, s.psd_t_cap);
  return doppler_psd(acf, s.window, s.pad_factor);
}

inline DataTable psd_table(const Scenario& s, std::string name = "psd") {
  const auto spec = scenario_spectrum(s);
  return DataTable{std::move(name), {"f_d", "psd"}, {spec.freq, spec.psd}};
}

inline DataTable abep_table(const Scenario& s, std::string name = "abep") {
  const auto curve = abep_vs_time(s.params, s.carrier, s.modulation, s.grid, s.mc);
  return DataTable{std::move(name),
                   {"t", "abep", "abep_std_error"},
                   {detail::every_nth(curve.t, s.lag_stride),
                    detail::every_nth(curve.abep, s.lag_stride),
                    detail::every_nth(curve.std_error, s.lag_stride)}};
}

inline DataTable product_table(const Scenario& s, Product p, std::string name) {
  switch (p) {
    case Product::SigmaD2: return sigma_d2_table(s, std::move(name));
    case Product::Acf: return acf_table(s, std::move(name));
    case Product::Psd: return psd_table(s, std::move(name));
    case Product::Abep: return abep_table(s, std::move(name));
  }
  throw std::logic_error("unknown product");
}

// ---------------------------------------------------------------- manifest

inline nlohmann::ordered_json scenario_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["regime"] = std::string(to_string(classify_regime(s.params)));
  j["sigma_v"] = s.params.sigma_v;
  j["mu"] = s.params.mu;
  j["omega_v"] = s.params.omega_v;
  j["f_c_hz"] = s.carrier.omega_c / (2.0 * std::numbers::pi);
  j["c"] = s.carrier.c;
  j["dt"] = s.grid.dt;
  j["n_samples"] = s.grid.n;
  j["t_max"] = s.grid.dt * static_cast<double>(s.grid.n - 1);
  j["n_realizations"] = s.mc.n_realizations;
  j["seed"] = s.mc.master_seed;
  std::vector<std::string> products;
  for (Product p : s.outputs) products.emplace_back(to_string(p));
  j["products"] = products;
  j["lag_stride"] = s.lag_stride;
  for (Product p : s.outputs) {
    if (p == Product::Psd) {
      j["window"] = std::string(to_string(s.window));
      j["pad_factor"] = s.pad_factor;
      j["psd_t_max"] = s.psd_t_cap;
      j["psd_threshold"] = s.psd_threshold;
    }
    if (p == Product::Abep) {
      j["modulation"] = std::string(to_string(s.modulation.scheme));
      j["order"] = s.modulation.M;
      j["snr_db"] = s.modulation.snr_db;
    }
  }
  return j;
}

inline nlohmann::ordered_json build_json(double wall_seconds, unsigned threads) {
  nlohmann::ordered_json j;
  j["git_describe"] = WOBBLE_GIT_DESCRIBE;
  j["threads"] = resolve_threads(threads);
  j["wall_time_s"] = wall_seconds;
  return j;
}

/**
 * Runs every requested product of `s` and writes <product>.csv (or .json)
 * plus manifest.json into out_dir. Table files are byte-identical across
 * reruns with the same scenario and seed, whatever the thread count.
 */
inline RunReport run_scenario(const Scenario& s, const fs::path& out_dir) {
  s.validate();
  const auto start = std::chrono::steady_clock::now();
  detail::ensure_directory(out_dir);
  RunReport report;
  report.out_dir = out_dir;
  for (Product p : s.outputs) {
    const auto table = product_table(s, p, std::string(to_string(p)));
    report.files.push_back(write_table(table, out_dir, s.format));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json m;
  m["scenario"] = scenario_json(s);
  std::vector<std::string> files;
  for (const auto& f : report.files) files.push_back(f.filename().string());
  m["files"] = files;
  m["build"] = build_json(report.wall_seconds, s.mc.n_threads);
  const fs::path manifest = out_dir / "manifest.json";
  detail::write_text(manifest, m.dump(2) + "\n");
  report.files.push_back(manifest);
  return report;
}

// ---------------------------------------------------------------- figures

/// One row of the ACF simulation parameter table.
struct Table1Row {
  double mu = 0.0;
  double omega_v = 0.0;
  double scale = 0.0;  ///< displacement scale, see sigma_v_for_displacement_scale
  std::string figure;  ///< panel tag, e.g. "3d"

  double sigma_v() const { return sigma_v_for_displacement_scale(scale, mu, omega_v); }
};

inline std::vector<Table1Row> table1_rows() {
  constexpr double pi = std::numbers::pi;
  const std::array<double, 3> scales{0.001, 0.005, 0.01};
  std::vector<Table1Row> rows;
  auto sweep_scale = [&](double mu, double w, const char* tag) {
    for (double s : scales) rows.push_back({mu, w, s, tag});
  };
  sweep_scale(0, 0, "3a");
  sweep_scale(0, 20 * pi, "3b");
  sweep_scale(30, 0, "3c");
  sweep_scale(30, 20 * pi, "3d");
  for (double w : {10 * pi, 20 * pi, 30 * pi}) rows.push_back({0, w, 0.005, "4a"});
  for (double w : {10 * pi, 20 * pi, 30 * pi}) rows.push_back({30, w, 0.005, "4b"});
  for (double mu : {10.0, 30.0, 50.0}) rows.push_back({mu, 0, 0.005, "5a"});
  for (double mu : {10.0, 30.0, 50.0}) rows.push_back({mu, 20 * pi, 0.005, "5b"});
  return rows;
}

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {
      "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c",
      "fig3d", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b",
      "fig7a", "fig7b", "fig8",  "fig9",  "fig10a", "fig10b"};
  return ids;
}

struct FigureOptions {
  McConfig mc;
  OutputFormat format = OutputFormat::Csv;
  double f_c_hz = 28e9;
};

struct FigureCurve {
  std::string label;  ///< legend text
  std::string file;   ///< table stem
  Scenario scenario;
};

enum class FigureKind { Curves, MuSweepSigmaD2, MuSweepAcf };

struct FigureSpec {
  std::string id;
  std::string title;
  std::string xlabel;
  std::string ylabel;
  Product product = Product::Acf;
  FigureKind kind = FigureKind::Curves;
  bool log_y = false;
  bool non_quantitative = false;
  std::string note;
  std::vector<FigureCurve> curves;
};

// Spectrum settings shared by the PSD figures: a Hann taper and a horizon long
// enough for the ACF to decay below 1e-3.
struct PsdFigureSettings {
  double dt;
  double t_cap;
};

inline PsdFigureSettings psd_figure_settings(double mu, double omega_v) {
  if (mu == 0.0 && omega_v == 0.0) return {0.01, 2000.0};
  return {2.5e-4, 60.0};
}

namespace detail {

inline std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string omega_label(double w) {
  if (w == 0.0) return "0";
  return format_value(w / std::numbers::pi) + "pi";
}

inline Scenario figure_scenario(const FigureOptions& o, double mu, double w,
                                double sigma_v, const std::string& name) {
  Scenario s;
  s.name = name;
  s.params = {sigma_v, mu, w};
  s.carrier = CarrierParams::from_frequency(o.f_c_hz);
  s.mc = o.mc;
  s.format = o.format;
  s.grid = TimeGrid::covering(default_dt(s.params), 0.1);
  return s;
}

inline FigureCurve table1_curve(const FigureOptions& o, const Table1Row& r,
                                const std::string& id, std::size_t index) {
  std::string label = "mu=" + format_value(r.mu) + ", omega_v=" + omega_label(r.omega_v) +
                      ", scale=" + format_value(r.scale);
  auto s = figure_scenario(o, r.mu, r.omega_v, r.sigma_v(), id + "_" + std::to_string(index));
  s.outputs = {Product::Acf};
  return {std::move(label), s.name, std::move(s)};
}

inline FigureCurve psd_curve(const FigureOptions& o, double mu, double w,
                             double scale, const std::string& name,
                             std::string label) {
  auto s = figure_scenario(o, mu, w, sigma_v_for_displacement_scale(scale, mu, w), name);
  const auto cfg = psd_figure_settings(mu, w);
  s.grid = TimeGrid::covering(cfg.dt, cfg.t_cap);
  s.psd_t_cap = cfg.t_cap;
  s.window = Window::Hann;
  s.outputs = {Product::Psd};
  return {std::move(label), name, std::move(s)};
}

}  // namespace detail

/// Parameter sets behind each figure id. Throws std::invalid_argument for unknown ids.
inline FigureSpec figure_spec(const std::string& id, const FigureOptions& o = {}) {
  constexpr double pi = std::numbers::pi;
  FigureSpec f;
  f.id = id;

  if (id.size() == 5 && id.starts_with("fig2")) {
    struct Panel {
      char tag;
      double mu, w;
    };
    static constexpr std::array<Panel, 4> panels{
        {{'a', 40, 20 * pi}, {'b', 0, 0}, {'c', 40, 0}, {'d', 0, 20 * pi}}};
    for (const auto& p : panels) {
      if (id[4] != p.tag) continue;
      f.title = "sigma_d^2, mu=" + detail::format_value(p.mu) +
                ", omega_v=" + detail::omega_label(p.w) + ", sigma_v=1";
      f.xlabel = "delta t [s]";
      f.ylabel = "sigma_d^2 [m^2]";
      f.product = Product::SigmaD2;
      auto s = detail::figure_scenario(o, p.mu, p.w, 1.0, id);
      // 50 separations 0.004 s apart, on a grid fine enough for the dynamics.
      const double dt = default_dt(s.params);
      s.lag_stride = static_cast<std::size_t>(std::llround(0.004 / dt));
      s.grid = TimeGrid::covering(dt, 0.2);
      s.outputs = {Product::SigmaD2};
      f.curves.push_back({"sigma_v=1", id, std::move(s)});
      return f;
    }
  }

  const std::string tag = id.size() > 3 ? id.substr(3) : "";
  if (tag == "3a" || tag == "3b" || tag == "3c" || tag == "3d" || tag == "4a" ||
      tag == "4b" || tag == "5a" || tag == "5b") {
    f.title = "temporal ACF (" + tag + ")";
    f.xlabel = "delta t [s]";
    f.ylabel = "C(delta t)";
    f.product = Product::Acf;
    std::size_t i = 0;
    for (const auto& r : table1_rows()) {
      if (r.figure == tag) f.curves.push_back(detail::table1_curve(o, r, id, i++));
    }
    return f;
  }

  if (id == "fig6a") {
    f.title = "sigma_d^2 at delta t = 0.1 s versus mu";
    f.xlabel = "mu [1/s]";
    f.ylabel = "sigma_d^2 [m^2]";
    f.product = Product::SigmaD2;
    f.kind = FigureKind::MuSweepSigmaD2;
    for (double w : {10 * pi, 20 * pi, 30 * pi}) {
      auto s = detail::figure_scenario(o, 30, w, sigma_v_for_displacement_scale(0.005, 30, w), "");
      s.name = "fig6a_omega_" + detail::omega_label(w);
      f.curves.push_back({"omega_v=" + detail::omega_label(w), s.name, std::move(s)});
    }
    return f;
  }
  if (id == "fig6b") {
    f.title = "temporal ACF versus mu, omega_v=20pi";
    f.xlabel = "mu [1/s]";
    f.ylabel = "C(delta t)";
    f.product = Product::Acf;
    f.kind = FigureKind::MuSweepAcf;
    for (double lag : {0.01, 0.05, 0.1}) {
      auto s = detail::figure_scenario(
          o, 30, 20 * pi, sigma_v_for_displacement_scale(0.005, 30, 20 * pi), "");
      s.name = "fig6b_dt_" + detail::format_value(lag);
      s.grid = TimeGrid::covering(default_dt(s.params), lag);
      f.curves.push_back({"delta t=" + detail::format_value(lag) + " s", s.name, std::move(s)});
    }
    return f;
  }

  if (id == "fig7a" || id == "fig7b" || id == "fig8" || id == "fig9") {
    f.xlabel = "f_D [Hz]";
    f.ylabel = "PSD [1/Hz]";
    f.product = Product::Psd;
    std::size_t i = 0;
    auto add = [&](double mu, double w, double scale, std::string label) {
      f.curves.push_back(detail::psd_curve(o, mu, w, scale, id + "_" + std::to_string(i++),
                                           std::move(label)));
    };
    if (id == "fig7a" || id == "fig7b") {
      const double mu = id == "fig7a" ? 0.0 : 30.0;
      const double w = id == "fig7a" ? 0.0 : 200 * pi;
      f.title = "Doppler PSD, mu=" + detail::format_value(mu) +
                ", omega_v=" + detail::omega_label(w);
      for (double s : {0.001, 0.005, 0.01}) add(mu, w, s, "scale=" + detail::format_value(s));
    } else if (id == "fig8") {
      f.title = "Doppler PSD versus omega_v, mu=30";
      for (double w : {100 * pi, 200 * pi, 400 * pi}) {
        add(30, w, 0.005, "omega_v=" + detail::omega_label(w));
      }
    } else {
      f.title = "Doppler PSD versus mu, omega_v=200pi";
      for (double mu : {10.0, 30.0, 50.0}) {
        add(mu, 200 * pi, 0.005, "mu=" + detail::format_value(mu));
      }
    }
    return f;
  }

  if (id == "fig10a" || id == "fig10b") {
    const bool psk = id == "fig10a";
    f.title = psk ? "ABEP, PSK" : "ABEP, QAM";
    f.xlabel = "t [s]";
    f.ylabel = "ABEP";
    f.product = Product::Abep;
    f.log_y = true;
    f.non_quantitative = true;
    f.note =
        "modulation orders and SNR are repository choices (20 dB average symbol "
        "SNR, mu=30, omega_v=20pi, displacement scale 0.005); curves are "
        "illustrative, not a quantitative reproduction";
    const std::array<unsigned, 3> orders = psk ? std::array<unsigned, 3>{2, 4, 8}
                                               : std::array<unsigned, 3>{4, 16, 64};
    for (unsigned M : orders) {
      auto s = detail::figure_scenario(
          o, 30, 20 * pi, sigma_v_for_displacement_scale(0.005, 30, 20 * pi),
          id + "_M" + std::to_string(M));
      s.modulation = {psk ? Scheme::PSK : Scheme::QAM, M, 20.0};
      s.outputs = {Product::Abep};
      s.lag_stride = 6;
      f.curves.push_back({std::to_string(M) + (psk ? "-PSK" : "-QAM"), s.name, std::move(s)});
    }
    return f;
  }

  throw std::invalid_argument("unknown figure id '" + id + "'");
}

namespace detail {

inline DataTable mu_sweep_sigma_d2(const FigureCurve& c) {
  DataTable t{c.file, {"mu", "sigma_d2_exact", "sigma_d2_empirical"}, {{}, {}, {}}};
  const double w = c.scenario.params.omega_v;
  for (int m = 0; m <= 20; ++m) {
    const double mu = m == 0 ? 1.0 : 5.0 * m;
    const WobbleParams p{sigma_v_for_displacement_scale(0.005, mu, w), mu, w};
    t.data[0].push_back(mu);
    t.data[1].push_back(sigma_d2_exact(p, 0.1).value);
    t.data[2].push_back(sigma_d2_empirical(p, 0.1, c.scenario.mc).value);
  }
  return t;
}

inline DataTable mu_sweep_acf(const FigureCurve& c) {
  DataTable t{c.file,
              {"mu", "acf_analytic", "acf_empirical_re", "acf_empirical_im"},
              {{}, {}, {}, {}}};
  const double w = c.scenario.params.omega_v;
  const double lag = c.scenario.grid.dt * static_cast<double>(c.scenario.grid.n - 1);
  for (int m = 0; m <= 20; ++m) {
    const double mu = m == 0 ? 1.0 : 5.0 * m;
    const WobbleParams p{sigma_v_for_displacement_scale(0.005, mu, w), mu, w};
    const auto steps = std::max<std::size_t>(
        200, static_cast<std::size_t>(std::ceil(lag / default_dt(p))));
    const TimeGrid grid{lag / static_cast<double>(steps), steps + 1, 0.0};
    const auto emp = acf_empirical(p, c.scenario.carrier, grid, c.scenario.mc);
    t.data[0].push_back(mu);
    t.data[1].push_back(acf_closed_form(p, c.scenario.carrier, lag));
    t.data[2].push_back(emp.empirical->back().real());
    t.data[3].push_back(emp.empirical->back().imag());
  }
  return t;
}

inline std::string gnuplot_script(const FigureSpec& f) {
  std::ostringstream gp;
  gp << "# " << f.title << "\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << f.id << ".png'\n"
     << "set datafile separator ','\n"
     << "set key top right\n"
     << "set grid\n"
     << "set title \"" << f.title << "\"\n"
     << "set xlabel \"" << f.xlabel << "\"\n"
     << "set ylabel \"" << f.ylabel << "\"\n";
  if (f.log_y) gp << "set logscale y\n";
  gp << "plot ";
  for (std::size_t i = 0; i < f.curves.size(); ++i) {
    const auto& c = f.curves[i];
    const std::string file = "'" + c.file + ".csv'";
    const std::string lc = " lc " + std::to_string(i + 1);
    if (i) gp << ", \\\n     ";
    gp << file << " using 1:2 skip 1 with lines" << lc << " title \"" << c.label << "\"";
    switch (f.product) {
      case Product::SigmaD2:
        gp << ", \\\n     " << file << " using 1:"
           << (f.kind == FigureKind::Curves ? 4 : 3) << " skip 1 with points" << lc
           << " pt 6 notitle";
        break;
      case Product::Acf:
        gp << ", \\\n     " << file << " using 1:3 skip 1 with points" << lc
           << " pt 6 notitle";
        break;
      case Product::Psd:
      case Product::Abep:
        break;
    }
  }
  gp << "\n";
  return gp.str();
}

}  // namespace detail

/**
 * Computes every curve of figure `id` into out_dir/<id>/: one CSV per curve
 * (plus JSON when requested), a gnuplot script and manifest.json.
 */
inline RunReport reproduce_figure(const std::string& id, const fs::path& out_dir,
                                  const FigureOptions& o = {}) {
  const FigureSpec f = figure_spec(id, o);
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = out_dir / id;
  detail::ensure_directory(dir);
  RunReport report;
  report.out_dir = dir;

  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const auto& c : f.curves) {
    DataTable t;
    switch (f.kind) {
      case FigureKind::Curves: t = product_table(c.scenario, f.product, c.file); break;
      case FigureKind::MuSweepSigmaD2: t = detail::mu_sweep_sigma_d2(c); break;
      case FigureKind::MuSweepAcf: t = detail::mu_sweep_acf(c); break;
    }
    report.files.push_back(write_table(t, dir, OutputFormat::Csv));
    if (o.format == OutputFormat::Json) {
      report.files.push_back(write_table(t, dir, OutputFormat::Json));
    }
    nlohmann::ordered_json cj;
    cj["label"] = c.label;
    cj["file"] = c.file + ".csv";
    cj["scenario"] = scenario_json(c.scenario);
    if (f.kind != FigureKind::Curves) {
      cj["sweep"] = "mu in {1, 5, 10, ..., 100}, sigma_v = 0.005 sqrt((omega_v^2 + mu^2) / mu)";
    }
    curves.push_back(std::move(cj));
  }
  const fs::path script = dir / (id + ".gp");
  detail::write_text(script, detail::gnuplot_script(f));
  report.files.push_back(script);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json m;
  m["figure"] = f.id;
  m["title"] = f.title;
  m["non_quantitative"] = f.non_quantitative;
  if (!f.note.empty()) m["note"] = f.note;
  m["curves"] = std::move(curves);
  m["build"] = build_json(report.wall_seconds, o.mc.n_threads);
  const fs::path manifest = dir / "manifest.json";
  detail::write_text(manifest, m.dump(2) + "\n");
  report.files.push_back(manifest);
  return report;
}

}  // namespace wobble
