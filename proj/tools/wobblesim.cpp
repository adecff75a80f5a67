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

// wobblesim: command-line front end for the wobbling channel simulator.
//
//   wobblesim acf --mu 30 --omega-v 20pi --sigma-d-scale 0.005 --out run/acf
//   wobblesim psd --mu 30 --omega-v 200pi --sigma-v 0.57 --window hann
//   wobblesim bep --mu 30 --omega-v 20pi --modulation qam --order 16
//   wobblesim reproduce-figure fig3d --out figures
//   wobblesim run scenarios/table1_row10.txt --out run/row10

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wobble/wobble.hpp"

namespace {

struct Common {
  std::string sigma_v;
  std::string sigma_d_scale;
  std::string mu = "0";
  std::string omega_v = "0";
  double fc_hz = 28e9;
  double dt = 0.0;
  double t_max = 0.1;
  std::size_t realizations = 10000;
  std::uint64_t seed = wobble::McConfig{}.master_seed;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
  std::string window = "rect";
  std::size_t pad_factor = 1;
  double psd_t_max = 1.0;
  std::size_t lag_stride = 1;
  std::string modulation = "psk";
  unsigned order = 4;
  double snr_db = 20.0;
};

double number_or_throw(const std::string& text, const char* flag) {
  const auto v = wobble::detail::parse_number(text);
  if (!v) throw CLI::ValidationError(flag, "expected a number, got '" + text + "'");
  return *v;
}

void add_physics(CLI::App* sub, Common& c) {
  sub->add_option("--sigma-v", c.sigma_v, "Envelope standard deviation [m/s]");
  sub->add_option("--sigma-d-scale", c.sigma_d_scale,
                  "Displacement scale; sets sigma_v via the per-regime normalisation")
      ->excludes(sub->get_option("--sigma-v"));
  sub->add_option("--mu", c.mu, "Envelope decorrelation rate [1/s] (accepts e.g. 30)");
  sub->add_option("--omega-v", c.omega_v, "Vibration angular frequency [rad/s] (accepts e.g. 20pi)");
  sub->add_option("--fc-hz", c.fc_hz, "Carrier frequency [Hz]")->capture_default_str();
  sub->add_option("--dt", c.dt, "Simulation step [s] (default: derived from mu, omega_v)");
  sub->add_option("--t-max", c.t_max, "Largest separation / time [s]")->capture_default_str();
  sub->add_option("--lag-stride", c.lag_stride, "Write every n-th grid sample")
      ->check(CLI::PositiveNumber);
}

void add_run_control(CLI::App* sub, Common& c) {
  sub->add_option("--realizations", c.realizations, "Monte Carlo realizations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--format", c.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

wobble::Scenario scenario_from_flags(const Common& c, wobble::Product product,
                                     const std::string& name) {
  wobble::Scenario s;
  s.name = name;
  s.params.mu = number_or_throw(c.mu, "--mu");
  s.params.omega_v = number_or_throw(c.omega_v, "--omega-v");
  if (!c.sigma_v.empty()) {
    s.params.sigma_v = number_or_throw(c.sigma_v, "--sigma-v");
  } else if (!c.sigma_d_scale.empty()) {
    s.params.sigma_v = wobble::sigma_v_for_displacement_scale(
        number_or_throw(c.sigma_d_scale, "--sigma-d-scale"), s.params.mu, s.params.omega_v);
  } else {
    throw CLI::RequiredError("--sigma-v or --sigma-d-scale");
  }
  s.params.validate();
  s.carrier = wobble::CarrierParams::from_frequency(c.fc_hz);
  const double dt = c.dt > 0.0 ? c.dt : wobble::default_dt(s.params);
  s.grid = wobble::TimeGrid::covering(dt, product == wobble::Product::Psd ? c.psd_t_max : c.t_max);
  s.mc = {c.realizations, c.seed, c.threads};
  s.outputs = {product};
  s.lag_stride = c.lag_stride;
  s.window = c.window == "hann" ? wobble::Window::Hann : wobble::Window::Rectangular;
  s.pad_factor = c.pad_factor;
  s.psd_t_cap = c.psd_t_max;
  s.modulation = {c.modulation == "qam" ? wobble::Scheme::QAM : wobble::Scheme::PSK,
                  c.order, c.snr_db};
  s.format = c.format == "json" ? wobble::OutputFormat::Json : wobble::OutputFormat::Csv;
  s.validate();
  return s;
}

void print_report(const wobble::RunReport& r) {
  for (const auto& f : r.files) std::cout << f.string() << '\n';
  std::cout << "wall time " << r.wall_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV wobbling mmWave channel simulator"};
  app.require_subcommand(1);
  Common c;

  struct ProductCommand {
    const char* name;
    const char* help;
    wobble::Product product;
  };
  const std::vector<ProductCommand> product_commands = {
      {"sigma-d", "Displacement variance versus separation", wobble::Product::SigmaD2},
      {"acf", "Temporal ACF, closed form and ensemble", wobble::Product::Acf},
      {"psd", "Doppler power spectral density", wobble::Product::Psd},
      {"bep", "Average bit error probability versus time", wobble::Product::Abep},
  };
  std::vector<CLI::App*> product_subs;
  for (const auto& pc : product_commands) {
    auto* sub = app.add_subcommand(pc.name, pc.help);
    add_physics(sub, c);
    add_run_control(sub, c);
    if (pc.product == wobble::Product::Psd) {
      sub->add_option("--window", c.window, "Taper applied to the ACF")
          ->check(CLI::IsMember({"rect", "hann"}))
          ->capture_default_str();
      sub->add_option("--pad-factor", c.pad_factor, "Zero-padding factor")
          ->check(CLI::PositiveNumber);
      sub->add_option("--psd-t-max", c.psd_t_max, "Longest ACF lag used [s]")
          ->capture_default_str();
    }
    if (pc.product == wobble::Product::Abep) {
      sub->add_option("--modulation", c.modulation, "psk or qam")
          ->check(CLI::IsMember({"psk", "qam"}))
          ->capture_default_str();
      sub->add_option("--order", c.order, "Constellation size M")->capture_default_str();
      sub->add_option("--snr-db", c.snr_db, "Average symbol SNR [dB]")->capture_default_str();
    }
    product_subs.push_back(sub);
  }

  std::string figure;
  auto* fig = app.add_subcommand("reproduce-figure", "Regenerate a built-in figure data set");
  fig->add_option("id", figure, "Figure id, or 'all'")->required();
  fig->add_option("--fc-hz", c.fc_hz, "Carrier frequency [Hz]")->capture_default_str();
  add_run_control(fig, c);

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", c.out, "Output directory");
  std::optional<unsigned> run_threads;
  run->add_option("--threads", run_threads, "Override the scenario's thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < product_subs.size(); ++i) {
      if (!product_subs[i]->parsed()) continue;
      const auto& pc = product_commands[i];
      const auto s = scenario_from_flags(c, pc.product, pc.name);
      print_report(wobble::run_scenario(s, c.out.empty() ? "out/" + std::string(pc.name) : c.out));
      return 0;
    }
    if (fig->parsed()) {
      wobble::FigureOptions o;
      o.mc = {c.realizations, c.seed, c.threads};
      o.format = c.format == "json" ? wobble::OutputFormat::Json : wobble::OutputFormat::Csv;
      o.f_c_hz = c.fc_hz;
      const std::string out = c.out.empty() ? "figures" : c.out;
      const std::vector<std::string> ids =
          figure == "all" ? wobble::figure_ids() : std::vector<std::string>{figure};
      for (const auto& id : ids) print_report(wobble::reproduce_figure(id, out, o));
      return 0;
    }
    if (run->parsed()) {
      auto s = wobble::load_scenario(scenario_path);
      if (run_threads) s.mc.n_threads = *run_threads;
      print_report(wobble::run_scenario(s, c.out.empty() ? "out/" + s.name : c.out));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "wobblesim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
