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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wobble/wobble_process.hpp"

namespace {

using namespace wobble;
constexpr double pi = std::numbers::pi;

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(WobbleParams, ValidationNamesTheConstraint) {
  EXPECT_NE(error_of([] { WobbleParams{-1.0, 0, 0}.validate(); }).find("sigma_v > 0"),
            std::string::npos);
  EXPECT_NE(error_of([] { WobbleParams{0.0, 0, 0}.validate(); }).find("sigma_v > 0"),
            std::string::npos);
  EXPECT_NE(error_of([] { WobbleParams{1.0, -2, 0}.validate(); }).find("mu >= 0"),
            std::string::npos);
  EXPECT_NE(error_of([] { WobbleParams{1.0, 0, -1}.validate(); }).find("omega_v >= 0"),
            std::string::npos);
  EXPECT_THROW((WobbleParams{std::nan(""), 0, 0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((WobbleParams{1.0, 0, 0}.validate()));
}

TEST(Regime, ClassificationUsesExactZero) {
  EXPECT_EQ(classify_regime({1, 30, 20 * pi}), Regime::General);
  EXPECT_EQ(classify_regime({1, 0, 0}), Regime::FreeDrift);
  EXPECT_EQ(classify_regime({1, 30, 0}), Regime::CorrelatedDrift);
  EXPECT_EQ(classify_regime({1, 0, 20 * pi}), Regime::PureVibration);
  EXPECT_EQ(classify_regime({1, 1e-300, 1e-300}), Regime::General);
  static_assert(classify_regime(WobbleParams{1, 0, 0}) == Regime::FreeDrift);
}

TEST(TimeGrid, CoveringAndValidation) {
  const auto g = TimeGrid::covering(1e-3, 0.1);
  EXPECT_EQ(g.n, 101u);
  EXPECT_DOUBLE_EQ(g.time(100), 0.1);
  EXPECT_THROW((TimeGrid{0.0, 10, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((TimeGrid{1e-3, 1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW(TimeGrid::covering(-1.0, 1.0), std::invalid_argument);
}

TEST(DefaultDt, ResolvesFastestTimescale) {
  EXPECT_DOUBLE_EQ(default_dt({1, 0, 0}), 1e-3);
  EXPECT_DOUBLE_EQ(default_dt({1, 40, 0}), 1.0 / 40 / 200);
  EXPECT_DOUBLE_EQ(default_dt({1, 0, 20 * pi}), 0.1 / 200);
  EXPECT_DOUBLE_EQ(default_dt({1, 30, 400 * pi}), 0.005 / 200);
}

TEST(SampleEnvelope, FreeDriftEnvelopeIsConstant) {
  RandomStream s(3);
  const auto env = sample_envelope({2.0, 0, 0}, TimeGrid{1e-3, 500, 0}, s);
  for (double a : env.a) EXPECT_EQ(a, env.a[0]);
  EXPECT_GE(env.phi0, 0.0);
  EXPECT_LT(env.phi0, 2 * pi);
}

TEST(SampleEnvelope, StationaryVarianceAtEveryIndex) {
  const WobbleParams p{0.7, 25, 0};
  const TimeGrid grid{2e-3, 60, 0};
  const int paths = 20000;
  std::vector<double> m2(grid.n, 0.0);
  for (int r = 0; r < paths; ++r) {
    auto s = RandomStream::for_realization(5, static_cast<std::uint64_t>(r));
    const auto env = sample_envelope(p, grid, s);
    for (std::size_t i = 0; i < grid.n; ++i) m2[i] += env.a[i] * env.a[i];
  }
  const double var = p.sigma_v * p.sigma_v;
  // se of the mean of a^2 is var sqrt(2 / paths)
  const double tol = 4.0 * var * std::sqrt(2.0 / paths);
  for (std::size_t i = 0; i < grid.n; i += 7) EXPECT_NEAR(m2[i] / paths, var, tol) << i;
}

TEST(SampleEnvelope, ReproducibleFromSeed) {
  const WobbleParams p{1, 30, 20 * pi};
  const TimeGrid g{1e-4, 300, 0};
  const auto a = sample_envelope(p, g, 77);
  const auto b = sample_envelope(p, g, 77);
  const auto c = sample_envelope(p, g, 78);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.phi0, b.phi0);
  EXPECT_NE(a.a, c.a);
}

TEST(RadialVelocityAndDistance, DefinitionsHold) {
  const WobbleParams p{1, 10, 20 * pi};
  const TimeGrid g{1e-3, 200, 0.0};
  const auto env = sample_envelope(p, g, 5);
  const auto vel = radial_velocity(env, p.omega_v);
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_DOUBLE_EQ(vel.samples[i], env.a[i] * std::cos(p.omega_v * g.time(i) + env.phi0));
  }
  const auto d = wobble_distance(vel);
  EXPECT_EQ(d.samples[0], 0.0);
  double sum = 0.0;
  for (std::size_t i = 1; i < g.n; ++i) {
    sum += vel.samples[i - 1] * g.dt;
    EXPECT_NEAR(d.samples[i], sum, 1e-15);
  }
}

TEST(Displacement, FreeDriftIsLinearInTime) {
  RandomStream s(9);
  const TimeGrid g{1e-3, 101, 0};
  const auto d = simulate_displacement({1.5, 0, 0}, g, s);
  const double slope = d.samples[1] / g.dt;
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_NEAR(d.samples[i], slope * g.time(i), 1e-14);
  }
}

TEST(Displacement, PureVibrationReturnsToZeroEachPeriod) {
  // With a constant envelope and a grid holding whole periods, the left sum
  // of cos over one period vanishes.
  const double w = 20 * pi;
  const std::size_t per_period = 100;
  const TimeGrid g{2 * pi / w / per_period, 3 * per_period + 1, 0};
  RandomStream s(12);
  const auto d = simulate_displacement({1.0, 0, w}, g, s);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_NEAR(d.samples[k * per_period], 0.0, 1e-14);
}

}  // namespace
