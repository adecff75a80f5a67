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
 * @file displacement_stats.hpp
 * @brief Variance of the wobbling displacement over a time separation.
 *
 * sigma_d^2(T) = E[(d(t+T) - d(t))^2]
 *              = sigma_v^2 int_0^T (T - u) e^{-mu u} cos(omega_v u) du.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wobble/montecarlo.hpp"
#include "wobble/wobble_process.hpp"

namespace wobble {

enum class SigmaD2Formula { Exact, Asymptotic, Empirical };

constexpr std::string_view to_string(SigmaD2Formula f) noexcept {
  switch (f) {
    case SigmaD2Formula::Exact: return "exact";
    case SigmaD2Formula::Asymptotic: return "asymptotic";
    case SigmaD2Formula::Empirical: return "empirical";
  }
  return "unknown";
}

struct SigmaD2Result {
  double value = 0.0;    ///< [m^2]
  double delta_t = 0.0;  ///< [s]
  SigmaD2Formula formula = SigmaD2Formula::Exact;
  double std_error = 0.0;  ///< Monte Carlo standard error, 0 for closed forms
};

namespace detail {

inline void require_nonnegative_lag(double delta_t, const char* what) {
  if (!(delta_t >= 0.0) || !std::isfinite(delta_t)) {
    throw std::domain_error(std::string(what) + ": delta_t >= 0 required");
  }
}

// T^2 sum_k (-zT)^k / (k+2)!  ==  int_0^T (T - u) e^{-z u} du.
inline std::complex<double> ramp_laplace_series(std::complex<double> z,
                                                double T) {
  const std::complex<double> x = -z * T;
  std::complex<double> term = 0.5;  // 1/2!
  std::complex<double> sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= x / static_cast<double>(k + 2);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return T * T * sum;
}

// (x - 1 + e^{-x}) / x^2 * x^2, stable for small x.
inline double drift_kernel(double x) {
  if (x < 0.5) {
    return std::real(ramp_laplace_series({1.0, 0.0}, x));
  }
  return x + std::expm1(-x);
}

// sigma_d^2 / sigma_v^2 for mu != 0, omega_v != 0.
inline double general_kernel(double mu, double omega, double T) {
  const std::complex<double> z{mu, -omega};
  if (std::abs(z) * T < 0.5) return std::real(ramp_laplace_series(z, T));
  const double s = mu * mu + omega * omega;
  const double e = std::exp(-mu * T);
  const double c = std::cos(omega * T);
  const double sn = std::sin(omega * T);
  return mu * T / s + (omega * omega - mu * mu - omega * omega * e * c -
                       2.0 * mu * omega * e * sn + mu * mu * e * c) /
                          (s * s);
}

}  // namespace detail

/// Exact displacement variance, with analytic limits in the degenerate regimes.
inline SigmaD2Result sigma_d2_exact(const WobbleParams& params,
                                    double delta_t) {
  params.validate();
  detail::require_nonnegative_lag(delta_t, "sigma_d2_exact");
  const double s2 = params.sigma_v * params.sigma_v;
  const double mu = params.mu;
  const double w = params.omega_v;
  const double T = delta_t;
  double v = 0.0;
  switch (classify_regime(params)) {
    case Regime::General: v = s2 * detail::general_kernel(mu, w, T); break;
    case Regime::FreeDrift: v = 0.5 * s2 * T * T; break;
    case Regime::CorrelatedDrift:
      v = s2 * detail::drift_kernel(mu * T) / (mu * mu);
      break;
    case Regime::PureVibration: {
      const double h = std::sin(0.5 * w * T);
      v = 2.0 * s2 * h * h / (w * w);
      break;
    }
  }
  return {std::max(v, 0.0), delta_t, SigmaD2Formula::Exact, 0.0};
}

/// Large-separation form: only the linearly growing term is kept where one exists.
inline SigmaD2Result sigma_d2_asymptotic(const WobbleParams& params,
                                         double delta_t) {
  params.validate();
  detail::require_nonnegative_lag(delta_t, "sigma_d2_asymptotic");
  const double s2 = params.sigma_v * params.sigma_v;
  const double mu = params.mu;
  const double w = params.omega_v;
  const double T = delta_t;
  double v = 0.0;
  switch (classify_regime(params)) {
    case Regime::General: v = s2 * mu * T / (w * w + mu * mu); break;
    case Regime::FreeDrift: v = 0.5 * s2 * T * T; break;
    case Regime::CorrelatedDrift: v = s2 * T / mu; break;
    case Regime::PureVibration: v = s2 * (1.0 - std::cos(w * T)) / (w * w); break;
  }
  return {v, delta_t, SigmaD2Formula::Asymptotic, 0.0};
}

/// Monte Carlo mean of d^2 on a lag grid, with standard errors.
struct EmpiricalMoments {
  std::vector<double> delta_t;
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t n_realizations = 0;
};

namespace detail {

struct MomentAccumulator {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  void merge(const MomentAccumulator& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
  }
};

inline void require_realizations(const McConfig& mc, std::size_t minimum,
                                 const char* what) {
  mc.validate();
  if (mc.n_realizations < minimum) {
    throw std::invalid_argument(std::string(what) + ": n_realizations >= " +
                                std::to_string(minimum) + " required");
  }
}

}  // namespace detail

/**
 * d^2 statistics at lags k * stride * grid.dt for k = 0 .. (grid.n-1)/stride,
 * every realization starting at t = 0 with a fresh phi0.
 */
inline EmpiricalMoments sigma_d2_empirical_curve(const WobbleParams& params,
                                                 const TimeGrid& grid,
                                                 const McConfig& mc,
                                                 std::size_t stride = 1) {
  params.validate();
  grid.validate();
  detail::require_realizations(mc, 100, "sigma_d2_empirical");
  if (stride == 0) throw std::invalid_argument("stride >= 1 required");
  const std::size_t n_lags = (grid.n - 1) / stride + 1;

  auto make = [&] {
    return detail::MomentAccumulator{std::vector<double>(n_lags, 0.0),
                                     std::vector<double>(n_lags, 0.0)};
  };
  auto body = [&](RandomStream& stream, std::size_t,
                  detail::MomentAccumulator& acc) {
    const auto disp = simulate_displacement(params, grid, stream);
    for (std::size_t k = 0; k < n_lags; ++k) {
      const double d = disp.samples[k * stride];
      const double d2 = d * d;
      acc.sum[k] += d2;
      acc.sum_sq[k] += d2 * d2;
    }
  };
  auto merge = [](detail::MomentAccumulator& into,
                  const detail::MomentAccumulator& from) { into.merge(from); };
  const auto acc = reduce_realizations(mc, make, body, merge);

  EmpiricalMoments out;
  out.n_realizations = mc.n_realizations;
  const double R = static_cast<double>(mc.n_realizations);
  for (std::size_t k = 0; k < n_lags; ++k) {
    const double m = acc.sum[k] / R;
    const double var = std::max(0.0, acc.sum_sq[k] / R - m * m);
    out.delta_t.push_back(static_cast<double>(k * stride) * grid.dt);
    out.mean.push_back(m);
    out.std_error.push_back(std::sqrt(var / std::max(1.0, R - 1.0)));
  }
  return out;
}

/**
 * Ensemble estimate of sigma_d^2 at a single separation. The simulation step
 * is the default step refined so that delta_t falls on the grid with at least
 * 200 steps.
 */
inline SigmaD2Result sigma_d2_empirical(const WobbleParams& params,
                                        double delta_t, const McConfig& mc) {
  params.validate();
  detail::require_nonnegative_lag(delta_t, "sigma_d2_empirical");
  detail::require_realizations(mc, 100, "sigma_d2_empirical");
  if (delta_t == 0.0) return {0.0, 0.0, SigmaD2Formula::Empirical, 0.0};
  const auto steps = std::max<std::size_t>(
      200, static_cast<std::size_t>(std::ceil(delta_t / default_dt(params))));
  const TimeGrid grid{delta_t / static_cast<double>(steps), steps + 1, 0.0};
  const auto curve = sigma_d2_empirical_curve(params, grid, mc, steps);
  return {curve.mean.back(), delta_t, SigmaD2Formula::Empirical,
          curve.std_error.back()};
}

}  // namespace wobble
