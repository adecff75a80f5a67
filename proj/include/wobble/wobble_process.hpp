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
 * @file wobble_process.hpp
 * @brief Sample paths of the hovering-UAV wobbling process.
 *
 * The radial velocity is V(t) = a(t) cos(omega_v t + phi0), where the
 * envelope a(t) is a stationary Gauss-Markov process with variance sigma_v^2
 * and autocorrelation sigma_v^2 exp(-mu |dt|), and phi0 ~ U[0, 2 pi).
 * The envelope is sampled with the exact AR(1) recursion
 *
 *   a[0] = sigma_v b_0,
 *   a[n] = rho a[n-1] + sigma_v sqrt(1 - rho^2) b_n,   rho = exp(-mu dt),
 *
 * and the displacement d(t) = int_0^t V is a left Riemann sum on the same
 * grid.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wobble/random.hpp"

namespace wobble {

/// Stochastic wobbling description.
struct WobbleParams {
  double sigma_v = 1.0;  ///< envelope standard deviation [m/s]
  double mu = 0.0;       ///< envelope decorrelation rate [1/s]
  double omega_v = 0.0;  ///< rotor vibration angular frequency [rad/s]

  void validate() const {
    if (!(std::isfinite(sigma_v) && sigma_v > 0.0)) {
      throw std::invalid_argument("WobbleParams: sigma_v > 0 violated");
    }
    if (!(std::isfinite(mu) && mu >= 0.0)) {
      throw std::invalid_argument("WobbleParams: mu >= 0 violated");
    }
    if (!(std::isfinite(omega_v) && omega_v >= 0.0)) {
      throw std::invalid_argument("WobbleParams: omega_v >= 0 violated");
    }
  }
};

enum class Regime { General, FreeDrift, CorrelatedDrift, PureVibration };

constexpr std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::General: return "general";
    case Regime::FreeDrift: return "free_drift";
    case Regime::CorrelatedDrift: return "correlated_drift";
    case Regime::PureVibration: return "pure_vibration";
  }
  return "unknown";
}

/// Regimes are model choices, so zero means exactly 0.0.
constexpr Regime classify_regime(const WobbleParams& p) noexcept {
  const bool has_mu = p.mu != 0.0;
  const bool has_omega = p.omega_v != 0.0;
  if (has_mu && has_omega) return Regime::General;
  if (has_mu) return Regime::CorrelatedDrift;
  if (has_omega) return Regime::PureVibration;
  return Regime::FreeDrift;
}

/// Uniform sampling grid t_n = t0 + n dt, n in [0, n).
struct TimeGrid {
  double dt = 1e-3;
  std::size_t n = 2;
  double t0 = 0.0;

  double time(std::size_t i) const noexcept {
    return t0 + static_cast<double>(i) * dt;
  }

  void validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) {
      throw std::invalid_argument("TimeGrid: dt > 0 violated");
    }
    if (n < 2) throw std::invalid_argument("TimeGrid: n >= 2 violated");
    if (!std::isfinite(t0)) throw std::invalid_argument("TimeGrid: t0 finite");
  }

  /// Grid starting at 0 that contains t_max (rounded to the nearest sample).
  static TimeGrid covering(double dt, double t_max) {
    if (!(dt > 0.0) || !(t_max > 0.0)) {
      throw std::invalid_argument("TimeGrid: dt > 0 and t_max > 0 required");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    return TimeGrid{dt, std::max<std::size_t>(steps, 1) + 1, 0.0};
  }
};

/**
 * Default simulation step: 1/200 of the fastest characteristic time among
 * 2 pi / omega_v and 1 / mu, never coarser than 1 ms.
 */
inline double default_dt(const WobbleParams& p) {
  double fastest = 0.2;  // 200 * 1 ms
  if (p.omega_v != 0.0) {
    fastest = std::min(fastest, 2.0 * std::numbers::pi / p.omega_v);
  }
  if (p.mu != 0.0) fastest = std::min(fastest, 1.0 / p.mu);
  return fastest / 200.0;
}

struct EnvelopeTrajectory {
  TimeGrid grid;
  std::vector<double> a;  ///< envelope samples [m/s]
  double phi0 = 0.0;      ///< initial vibration phase, [0, 2 pi)
};

struct VelocityTrajectory {
  TimeGrid grid;
  std::vector<double> samples;  ///< radial velocity [m/s]
};

struct DisplacementTrajectory {
  TimeGrid grid;
  std::vector<double> samples;  ///< radial displacement [m], samples[0] = 0
};

/**
 * Draws phi0 first, then the n Gaussian innovations, all from `stream`.
 * With mu = 0 the innovation weight vanishes and a[n] is constant.
 */
inline EnvelopeTrajectory sample_envelope(const WobbleParams& params,
                                          const TimeGrid& grid,
                                          RandomStream& stream) {
  params.validate();
  grid.validate();
  EnvelopeTrajectory env;
  env.grid = grid;
  env.phi0 = 2.0 * std::numbers::pi * stream.uniform();
  env.a.resize(grid.n);

  const double rho = std::exp(-params.mu * grid.dt);
  const double innovation =
      params.sigma_v * std::sqrt(-std::expm1(-2.0 * params.mu * grid.dt));
  double a = params.sigma_v * stream.normal();
  env.a[0] = a;
  for (std::size_t i = 1; i < grid.n; ++i) {
    a = rho * a + innovation * stream.normal();
    env.a[i] = a;
  }
  return env;
}

inline EnvelopeTrajectory sample_envelope(const WobbleParams& params,
                                          const TimeGrid& grid,
                                          std::uint64_t seed) {
  RandomStream stream(seed);
  return sample_envelope(params, grid, stream);
}

inline VelocityTrajectory radial_velocity(const EnvelopeTrajectory& env,
                                          double omega_v) {
  VelocityTrajectory vel;
  vel.grid = env.grid;
  vel.samples.resize(env.a.size());
  for (std::size_t i = 0; i < env.a.size(); ++i) {
    vel.samples[i] = env.a[i] * std::cos(omega_v * env.grid.time(i) + env.phi0);
  }
  return vel;
}

/// Left Riemann sum: d[0] = 0, d[n] = d[n-1] + V[n-1] dt.
inline DisplacementTrajectory wobble_distance(const VelocityTrajectory& vel) {
  DisplacementTrajectory disp;
  disp.grid = vel.grid;
  disp.samples.resize(vel.samples.size());
  if (disp.samples.empty()) return disp;
  double d = 0.0;
  disp.samples[0] = 0.0;
  for (std::size_t i = 1; i < vel.samples.size(); ++i) {
    d += vel.samples[i - 1] * vel.grid.dt;
    disp.samples[i] = d;
  }
  return disp;
}

/// One displacement realization: envelope, velocity, then integration.
inline DisplacementTrajectory simulate_displacement(const WobbleParams& params,
                                                    const TimeGrid& grid,
                                                    RandomStream& stream) {
  return wobble_distance(
      radial_velocity(sample_envelope(params, grid, stream), params.omega_v));
}

}  // namespace wobble
