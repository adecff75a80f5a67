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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles/oracles.hpp"
#include "wobble/link_bep.hpp"

namespace {

using namespace wobble;
constexpr double pi = std::numbers::pi;

TEST(ModulationSpec, Validation) {
  EXPECT_NO_THROW((ModulationSpec{Scheme::PSK, 2, 10}.validate()));
  EXPECT_NO_THROW((ModulationSpec{Scheme::QAM, 64, 10}.validate()));
  EXPECT_THROW((ModulationSpec{Scheme::PSK, 6, 10}.validate()), std::domain_error);
  EXPECT_THROW((ModulationSpec{Scheme::QAM, 8, 10}.validate()), std::domain_error);
  EXPECT_THROW((ModulationSpec{Scheme::QAM, 2, 10}.validate()), std::domain_error);
  EXPECT_THROW((ModulationSpec{Scheme::PSK, 4, std::nan("")}.validate()), std::domain_error);
  EXPECT_EQ((ModulationSpec{Scheme::QAM, 64, 0}.bits_per_symbol()), 6u);
}

TEST(AwgnBep, TextbookValues) {
  const double g = std::pow(10.0, 1.0);
  EXPECT_NEAR(awgn_bep({Scheme::PSK, 2, 10}), oracle::bpsk_bep(g, 0.0), 1e-16);
  // Gray QPSK: Q(sqrt(g))
  EXPECT_NEAR(awgn_bep({Scheme::PSK, 4, 10}), 0.5 * std::erfc(std::sqrt(g / 2)), 1e-16);
  // Gray 16-QAM exact: (1/4)[3 Q(a) + 2 Q(3a) - Q(5a)], a = sqrt(g/5)
  const double a = std::sqrt(std::pow(10.0, 1.5) / 5);
  auto Q = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
  EXPECT_NEAR(awgn_bep({Scheme::QAM, 16, 15}), 0.25 * (3 * Q(a) + 2 * Q(3 * a) - Q(5 * a)),
              1e-15);
}

TEST(PhaseErrorBep, BpskMatchesCosineLaw) {
  const PhaseErrorBep f({Scheme::PSK, 2, 7});
  const double g = std::pow(10.0, 0.7);
  for (double th = -3.0; th <= 3.0; th += 0.173) {
    EXPECT_NEAR(f(th), oracle::bpsk_bep(g, th), 1e-15) << th;
  }
}

// Monte Carlo of a Gray-mapped square QAM detector under rotation.
double qam_bep_simulated(unsigned M, double snr_db, double theta, int n_sym) {
  const unsigned L = 1u << (std::countr_zero(M) / 2);
  const double d = std::sqrt(3.0 / (2.0 * (M - 1.0)));
  const double sigma = 1.0 / std::sqrt(2.0 * std::pow(10.0, snr_db / 10));
  std::mt19937_64 eng(5);
  std::normal_distribution<double> n(0, sigma);
  std::uniform_int_distribution<unsigned> pick(0, L - 1);
  auto level = [&](unsigned l) { return (2.0 * l - (L - 1.0)) * d; };
  auto decide = [&](double y) {
    const double idx = std::round(y / (2 * d) + (L - 1.0) / 2);
    return static_cast<unsigned>(std::clamp(idx, 0.0, L - 1.0));
  };
  auto gray = [](unsigned i) { return i ^ (i >> 1); };
  const std::complex<double> rot = std::polar(1.0, theta);
  long errors = 0;
  for (int i = 0; i < n_sym; ++i) {
    const unsigned a = pick(eng), b = pick(eng);
    const auto y = std::complex<double>(level(a), level(b)) * rot +
                   std::complex<double>(n(eng), n(eng));
    errors += std::popcount(gray(a) ^ gray(decide(y.real())));
    errors += std::popcount(gray(b) ^ gray(decide(y.imag())));
  }
  return static_cast<double>(errors) / (static_cast<double>(n_sym) * std::countr_zero(M));
}

TEST(PhaseErrorBep, SquareQamMatchesDetectorSimulation) {
  for (unsigned M : {4u, 16u}) {
    const PhaseErrorBep f({Scheme::QAM, M, 12});
    for (double th : {0.0, 0.1, 0.3, 0.7}) {
      const int n = 400000;
      const double p = qam_bep_simulated(M, 12, th, n);
      const double se = std::sqrt(p * (1 - p) / (n * std::countr_zero(M))) * 2;
      EXPECT_NEAR(f(th), p, 4 * se + 1e-5) << "M=" << M << " theta=" << th;
    }
  }
}

TEST(PhaseErrorBep, QpskAsPskEqualsFourQam) {
  const PhaseErrorBep psk({Scheme::PSK, 4, 14});
  const PhaseErrorBep qam({Scheme::QAM, 4, 14});
  for (double th = -1.0; th < 1.0; th += 0.05) EXPECT_DOUBLE_EQ(psk(th), qam(th));
}

TEST(PhaseErrorBep, EightPskSectorForm) {
  const PhaseErrorBep f({Scheme::PSK, 8, 20});
  for (double th : {0.05, 0.2, 0.35}) {
    EXPECT_NEAR(f(th), f(-th), 1e-15);
    EXPECT_NEAR(f(th + 2 * pi), f(th), 1e-14);
  }
  // A full-sector rotation decides every symbol as its neighbour, which is
  // one Gray bit away out of three.
  EXPECT_NEAR(f(2 * pi / 8), 1.0 / 3.0, 1e-6);
  // A rotation by half a sector puts the point on a boundary: about half of
  // the symbols land in the neighbour, which differs in one bit out of three.
  EXPECT_NEAR(f(pi / 8), 1.0 / 6.0, 1e-3);
  EXPECT_LT(f(0.0), f(0.2));
}

TEST(RandomPhaseFloor, MatchesAdaptiveQuadrature) {
  for (const auto& mod : {ModulationSpec{Scheme::PSK, 2, 10}, ModulationSpec{Scheme::PSK, 4, 20},
                          ModulationSpec{Scheme::PSK, 8, 20}, ModulationSpec{Scheme::QAM, 16, 20}}) {
    const PhaseErrorBep f(mod);
    const double expected = oracle::phase_average([&](double th) { return f(th); });
    EXPECT_NEAR(random_phase_floor(mod), expected, 1e-6) << mod.M;
  }
  EXPECT_NEAR(random_phase_floor({Scheme::PSK, 2, 30}), 0.5, 1e-3);
}

TEST(AbepVsTime, StartsAtBaselineAndRises) {
  const WobbleParams p{0.005 * std::sqrt((400 * pi * pi + 900) / 30), 30, 20 * pi};
  const auto carrier = CarrierParams::from_frequency(28e9);
  const ModulationSpec mod{Scheme::PSK, 2, 10};
  const auto c = abep_vs_time(p, carrier, mod, TimeGrid{1e-3, 101, 0}, McConfig{2000, 3, 2});
  EXPECT_NEAR(c.abep[0], c.baseline, 1e-12 * c.baseline);
  EXPECT_EQ(c.std_error[0], 0.0);
  EXPECT_EQ(c.step_std_error.size(), c.abep.size() - 1);
  EXPECT_GT(c.abep.back(), c.baseline);
  EXPECT_LE(c.abep.back(), random_phase_floor(mod) + 4 * c.std_error.back());
}

}  // namespace
