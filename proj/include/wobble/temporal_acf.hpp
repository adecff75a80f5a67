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
 * @file temporal_acf.hpp
 * @brief Channel temporal autocorrelation under UAV wobbling.
 *
 * The LoS channel is a pure phase modulation h(t) = h0 exp(j k d(t)) with
 * k = omega_c / c. Conditioned on the vibration phase the displacement is
 * Gaussian, so the ACF is a Gaussian characteristic function averaged over
 * that phase, which produces
 *
 *   C(dt) = exp(-X) I0(Y),
 *
 *   X = k^2 sigma_d^2(dt) / 2,
 *   Y = sigma_v^2 k^2 / 2 * [mu sin(w dt) - w cos(w dt) + w e^{-mu dt}]
 *                           / ((w^2 + mu^2) w)
 *
 * for mu != 0, omega_v != 0. In every degenerate regime Y = X.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wobble/displacement_stats.hpp"
#include "wobble/montecarlo.hpp"
#include "wobble/specfun.hpp"
#include "wobble/wobble_process.hpp"

namespace wobble {

inline constexpr double kSpeedOfLight = 299792458.0;

struct CarrierParams {
  double omega_c = 2.0 * std::numbers::pi * 28e9;  ///< [rad/s]
  double c = kSpeedOfLight;                         ///< [m/s]

  static CarrierParams from_frequency(double f_c_hz, double c = kSpeedOfLight) {
    return CarrierParams{2.0 * std::numbers::pi * f_c_hz, c};
  }

  double wavenumber() const noexcept { return omega_c / c; }

  void validate() const {
    if (!(std::isfinite(omega_c) && omega_c > 0.0)) {
      throw std::invalid_argument("CarrierParams: omega_c > 0 violated");
    }
    if (!(std::isfinite(c) && c > 0.0)) {
      throw std::invalid_argument("CarrierParams: c > 0 violated");
    }
  }
};

/// Exponent and Bessel arguments of the closed-form ACF.
struct AcfTerms {
  double X = 0.0;
  double Y = 0.0;
};

namespace detail {

inline double sin_minus_identity(double x) {
  if (std::fabs(x) < 0.5) {
    // -x^3/3! + x^5/5! - ...
    const double x2 = x * x;
    double term = -x * x2 / 6.0;
    double sum = term;
    for (int k = 2; k < 12; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return sum;
  }
  return std::sin(x) - x;
}

// [mu sin(wT) - w cos(wT) + w e^{-mu T}] / ((w^2 + mu^2) w), rearranged so
// that the O(1) and O(T) parts cancel analytically.
inline double vibration_kernel(double mu, double w, double T) {
  const double x = w * T;
  const double h = std::sin(0.5 * x);
  const double bracket = mu * sin_minus_identity(x) + 2.0 * w * h * h +
                         w * drift_kernel(mu * T);
  return bracket / ((w * w + mu * mu) * w);
}

}  // namespace detail

inline AcfTerms acf_terms(const WobbleParams& params,
                          const CarrierParams& carrier, double delta_t) {
  carrier.validate();
  const double k = carrier.wavenumber();
  const double half_k2 = 0.5 * k * k;
  AcfTerms t;
  t.X = half_k2 * sigma_d2_exact(params, delta_t).value;
  if (classify_regime(params) == Regime::General) {
    t.Y = half_k2 * params.sigma_v * params.sigma_v *
          detail::vibration_kernel(params.mu, params.omega_v, delta_t);
  } else {
    t.Y = t.X;
  }
  return t;
}

/// e^{-X} I0(Y) with its logarithm; log_value stays finite when value underflows.
inline specfun::ScaledBesselResult acf_closed_form_scaled(
    const WobbleParams& params, const CarrierParams& carrier, double delta_t) {
  const auto t = acf_terms(params, carrier, delta_t);
  auto r = specfun::exp_scaled_i0(t.X, t.Y);
  // X >= |Y| analytically; clip rounding noise so that C <= 1.
  if (r.log_value > 0.0) r = {0.0, 1.0};
  return r;
}

inline double acf_closed_form(const WobbleParams& params,
                              const CarrierParams& carrier, double delta_t) {
  return acf_closed_form_scaled(params, carrier, delta_t).value;
}

struct CirTrajectory {
  TimeGrid grid;
  std::vector<std::complex<double>> h;
  std::complex<double> h0{1.0, 0.0};
};

inline CirTrajectory cir_realization(const DisplacementTrajectory& disp,
                                     const CarrierParams& carrier,
                                     std::complex<double> h0) {
  carrier.validate();
  CirTrajectory cir;
  cir.grid = disp.grid;
  cir.h0 = h0;
  const double k = carrier.wavenumber();
  cir.h.reserve(disp.samples.size());
  for (double d : disp.samples) cir.h.push_back(h0 * std::polar(1.0, k * d));
  return cir;
}

struct AcfCurve {
  std::vector<double> delta_t;
  std::optional<std::vector<double>> analytic;
  std::optional<std::vector<std::complex<double>>> empirical;
  /// Monte Carlo standard errors of the real and imaginary parts.
  std::optional<std::vector<double>> empirical_se_re;
  std::optional<std::vector<double>> empirical_se_im;
  std::size_t n_realizations = 0;
};

/// Closed-form ACF at the given separations.
inline std::vector<double> acf_closed_form_values(
    const WobbleParams& params, const CarrierParams& carrier,
    const std::vector<double>& delta_t) {
  std::vector<double> out;
  out.reserve(delta_t.size());
  for (double dt : delta_t) out.push_back(acf_closed_form(params, carrier, dt));
  return out;
}

inline AcfCurve acf_analytic_curve(const WobbleParams& params,
                                   const CarrierParams& carrier,
                                   const TimeGrid& grid) {
  grid.validate();
  AcfCurve curve;
  for (std::size_t i = 0; i < grid.n; ++i) {
    curve.delta_t.push_back(static_cast<double>(i) * grid.dt);
  }
  curve.analytic = acf_closed_form_values(params, carrier, curve.delta_t);
  return curve;
}

/**
 * Closed-form ACF sampled every dt from 0 until it first drops below
 * `threshold` or the lag reaches `t_cap`, whichever comes first.
 */
inline AcfCurve acf_analytic_until_decay(const WobbleParams& params,
                                         const CarrierParams& carrier,
                                         double dt, double threshold = 1e-3,
                                         double t_cap = 1.0) {
  if (!(dt > 0.0) || !(t_cap > 0.0)) {
    throw std::invalid_argument("acf_analytic_until_decay: dt, t_cap > 0");
  }
  AcfCurve curve;
  std::vector<double> values;
  const auto max_steps = static_cast<std::size_t>(std::llround(t_cap / dt));
  for (std::size_t i = 0; i <= max_steps; ++i) {
    const double lag = static_cast<double>(i) * dt;
    const double c = acf_closed_form(params, carrier, lag);
    curve.delta_t.push_back(lag);
    values.push_back(c);
    if (c < threshold && i >= 1) break;
  }
  curve.analytic = std::move(values);
  return curve;
}

/**
 * Ensemble ACF E[h(0) h*(dt)] / |h0|^2 at lags k * grid.dt, averaged over
 * n_realizations wobble paths, each with its own phi0.
 */
inline AcfCurve acf_empirical(const WobbleParams& params,
                              const CarrierParams& carrier,
                              const TimeGrid& grid, const McConfig& mc) {
  params.validate();
  carrier.validate();
  grid.validate();
  detail::require_realizations(mc, 100, "acf_empirical");
  const std::size_t n = grid.n;
  const double k = carrier.wavenumber();

  struct Acc {
    std::vector<double> re, im, re2, im2;
  };
  auto make = [n] {
    return Acc{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
               std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  };
  auto body = [&](RandomStream& stream, std::size_t, Acc& acc) {
    const auto disp = simulate_displacement(params, grid, stream);
    for (std::size_t i = 0; i < n; ++i) {
      // h(0) h*(dt) / |h0|^2 = exp(-j k d(dt)) since d(0) = 0.
      const double phase = k * disp.samples[i];
      const double re = std::cos(phase);
      const double im = -std::sin(phase);
      acc.re[i] += re;
      acc.im[i] += im;
      acc.re2[i] += re * re;
      acc.im2[i] += im * im;
    }
  };
  auto merge = [n](Acc& into, const Acc& from) {
    for (std::size_t i = 0; i < n; ++i) {
      into.re[i] += from.re[i];
      into.im[i] += from.im[i];
      into.re2[i] += from.re2[i];
      into.im2[i] += from.im2[i];
    }
  };
  const Acc acc = reduce_realizations(mc, make, body, merge);

  AcfCurve curve;
  curve.n_realizations = mc.n_realizations;
  const double R = static_cast<double>(mc.n_realizations);
  std::vector<std::complex<double>> emp(n);
  std::vector<double> se_re(n), se_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    curve.delta_t.push_back(static_cast<double>(i) * grid.dt);
    const double mr = acc.re[i] / R;
    const double mi = acc.im[i] / R;
    emp[i] = {mr, mi};
    se_re[i] = std::sqrt(std::max(0.0, acc.re2[i] / R - mr * mr) / (R - 1.0));
    se_im[i] = std::sqrt(std::max(0.0, acc.im2[i] / R - mi * mi) / (R - 1.0));
  }
  curve.empirical = std::move(emp);
  curve.empirical_se_re = std::move(se_re);
  curve.empirical_se_im = std::move(se_im);
  return curve;
}

}  // namespace wobble
