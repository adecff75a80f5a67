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
 * @file link_bep.hpp
 * @brief Average bit error probability with an outdated channel estimate.
 *
 * The receiver estimates h(0) = h0 and keeps using it. Because |h(t)| = |h0|,
 * the only impairment is the constellation rotation
 * theta(t) = k d(t) seen by a coherent detector over AWGN. The conditional
 * BEP under a rotation is:
 *
 *   - BPSK:            Q(sqrt(2 g) cos theta), exact.
 *   - QPSK, square QAM: exact for Gray-coded per-axis PAM decisions; the
 *                       rotated point is projected on each axis and every
 *                       decision interval is weighted by its Hamming
 *                       distance, averaged over all transmitted symbols.
 *   - M-PSK, M >= 8:   nearest-decision-boundary form. The rotated point
 *                       lies in sector j with offset delta from its centre;
 *                       only the sector and its two neighbours are kept,
 *                       with crossing probabilities Q(sqrt(2 g) sin(pi/M -+
 *                       delta)) and Gray Hamming distances averaged over the
 *                       transmitted symbol.
 *
 * g is the average symbol SNR with unit-energy constellations.
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wobble/montecarlo.hpp"
#include "wobble/temporal_acf.hpp"
#include "wobble/wobble_process.hpp"

namespace wobble {

enum class Scheme { PSK, QAM };

constexpr std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::PSK ? "psk" : "qam";
}

struct ModulationSpec {
  Scheme scheme = Scheme::PSK;
  unsigned M = 4;
  double snr_db = 20.0;  ///< average symbol SNR

  double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

  unsigned bits_per_symbol() const {
    return static_cast<unsigned>(std::countr_zero(M));
  }

  void validate() const {
    if (!std::isfinite(snr_db)) {
      throw std::domain_error("ModulationSpec: snr_db must be finite");
    }
    if (M < 2 || !std::has_single_bit(M)) {
      throw std::domain_error("ModulationSpec: M must be a power of two >= 2");
    }
    if (scheme == Scheme::QAM && (M < 4 || bits_per_symbol() % 2 != 0)) {
      throw std::domain_error(
          "ModulationSpec: QAM order must be a square power of two >= 4");
    }
  }
};

inline double q_function(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Conditional BEP as a function of the residual phase error.
class PhaseErrorBep {
 public:
  explicit PhaseErrorBep(const ModulationSpec& mod) : mod_(mod) {
    mod_.validate();
    gamma_ = mod_.snr_linear();
    if (mod_.scheme == Scheme::QAM || mod_.M == 4) {
      init_square_qam();
    } else if (mod_.M >= 8) {
      init_psk_sectors();
    }
  }

  const ModulationSpec& modulation() const noexcept { return mod_; }

  double operator()(double theta) const {
    if (mod_.scheme == Scheme::PSK && mod_.M == 2) {
      return q_function(std::sqrt(2.0 * gamma_) * std::cos(theta));
    }
    if (mod_.scheme == Scheme::QAM || mod_.M == 4) return square_qam(theta);
    return psk_sector(theta);
  }

 private:
  static unsigned gray(unsigned i) noexcept { return i ^ (i >> 1); }

  void init_square_qam() {
    levels_ = 1u << (mod_.bits_per_symbol() / 2);
    half_spacing_ = std::sqrt(3.0 / (2.0 * (static_cast<double>(mod_.M) - 1.0)));
    noise_sigma_ = 1.0 / std::sqrt(2.0 * gamma_);
    hamming_.assign(levels_ * levels_, 0.0);
    for (unsigned a = 0; a < levels_; ++a) {
      for (unsigned b = 0; b < levels_; ++b) {
        hamming_[a * levels_ + b] = std::popcount(gray(a) ^ gray(b));
      }
    }
  }

  void init_psk_sectors() {
    const unsigned M = mod_.M;
    hamming_.assign(M, 0.0);
    for (unsigned j = 0; j < M; ++j) {
      double sum = 0.0;
      for (unsigned i = 0; i < M; ++i) {
        sum += std::popcount(gray(i) ^ gray((i + j) % M));
      }
      hamming_[j] = sum / M;
    }
  }

  double level(unsigned l) const {
    return (2.0 * l - (static_cast<double>(levels_) - 1.0)) * half_spacing_;
  }

  // P(noise pushes mean m into [lo, hi)), using the tail that avoids
  // cancellation.
  double interval_probability(double m, double lo, double hi) const {
    const double s = noise_sigma_;
    if (!std::isinf(hi) && (std::isinf(lo) || 0.5 * (lo + hi) < m)) {
      // Interval below the mean: Phi((hi-m)/s) - Phi((lo-m)/s).
      const double upper = q_function((m - hi) / s);
      const double lower = std::isinf(lo) ? 0.0 : q_function((m - lo) / s);
      return upper - lower;
    }
    const double from_lo = std::isinf(lo) ? 1.0 : q_function((lo - m) / s);
    const double from_hi = std::isinf(hi) ? 0.0 : q_function((hi - m) / s);
    return from_lo - from_hi;
  }

  double axis_bit_errors(unsigned tx, double m) const {
    const double inf = std::numeric_limits<double>::infinity();
    double errors = 0.0;
    for (unsigned l = 0; l < levels_; ++l) {
      if (l == tx) continue;
      const double lo = (l == 0) ? -inf : level(l) - half_spacing_;
      const double hi = (l + 1 == levels_) ? inf : level(l) + half_spacing_;
      errors += hamming_[tx * levels_ + l] * interval_probability(m, lo, hi);
    }
    return errors;
  }

  double square_qam(double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double errors = 0.0;
    for (unsigned li = 0; li < levels_; ++li) {
      for (unsigned lq = 0; lq < levels_; ++lq) {
        const double x = level(li);
        const double y = level(lq);
        errors += axis_bit_errors(li, x * c - y * s);
        errors += axis_bit_errors(lq, x * s + y * c);
      }
    }
    return errors / (static_cast<double>(mod_.M) * mod_.bits_per_symbol());
  }

  double psk_sector(double theta) const {
    const unsigned M = mod_.M;
    const double seg = 2.0 * std::numbers::pi / M;
    const double j = std::round(theta / seg);
    const double delta = theta - j * seg;
    const auto wrap = [M](long long v) {
      const long long m = static_cast<long long>(M);
      return static_cast<std::size_t>(((v % m) + m) % m);
    };
    const long long j0 = static_cast<long long>(j);
    const double a = std::sqrt(2.0 * gamma_);
    const double half = std::numbers::pi / M;
    const double p_up = q_function(a * std::sin(half - delta));
    const double p_down = q_function(a * std::sin(half + delta));
    const double errors = hamming_[wrap(j0)] * (1.0 - p_up - p_down) +
                          hamming_[wrap(j0 + 1)] * p_up +
                          hamming_[wrap(j0 - 1)] * p_down;
    return errors / mod_.bits_per_symbol();
  }

  ModulationSpec mod_;
  double gamma_ = 1.0;
  unsigned levels_ = 0;
  double half_spacing_ = 0.0;
  double noise_sigma_ = 1.0;
  std::vector<double> hamming_;
};

/// BEP with a perfect channel estimate.
inline double awgn_bep(const ModulationSpec& mod) { return PhaseErrorBep(mod)(0.0); }

/// Conditional BEP averaged over a uniform phase error (periodic trapezoid).
inline double random_phase_floor(const ModulationSpec& mod,
                                 std::size_t n_points = 8192) {
  const PhaseErrorBep f(mod);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    sum += f(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_points));
  }
  return sum / static_cast<double>(n_points);
}

struct AbepCurve {
  std::vector<double> t;          ///< elapsed time since estimation [s]
  std::vector<double> abep;
  std::vector<double> std_error;
  /// Standard error of abep[i+1] - abep[i], paired over realizations.
  std::vector<double> step_std_error;
  double baseline = 0.0;  ///< perfect-CSI AWGN BEP
  std::size_t n_realizations = 0;
};

/**
 * ABEP at t_i = i * grid.dt: every realization draws one wobble path starting
 * at the estimation instant and contributes f(k d(t_i)) at each time.
 */
inline AbepCurve abep_vs_time(const WobbleParams& params,
                              const CarrierParams& carrier,
                              const ModulationSpec& mod, const TimeGrid& grid,
                              const McConfig& mc) {
  params.validate();
  carrier.validate();
  grid.validate();
  mc.validate();
  const PhaseErrorBep f(mod);
  const std::size_t n = grid.n;
  const double k = carrier.wavenumber();

  struct Acc {
    std::vector<double> sum, sum_sq, step_sq;
  };
  auto make = [n] {
    return Acc{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
               std::vector<double>(n, 0.0)};
  };
  auto body = [&](RandomStream& stream, std::size_t, Acc& acc) {
    const auto disp = simulate_displacement(params, grid, stream);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = f(k * disp.samples[i]);
      acc.sum[i] += v;
      acc.sum_sq[i] += v * v;
      if (i > 0) acc.step_sq[i] += (v - prev) * (v - prev);
      prev = v;
    }
  };
  auto merge = [n](Acc& into, const Acc& from) {
    for (std::size_t i = 0; i < n; ++i) {
      into.sum[i] += from.sum[i];
      into.sum_sq[i] += from.sum_sq[i];
      into.step_sq[i] += from.step_sq[i];
    }
  };
  const Acc acc = reduce_realizations(mc, make, body, merge);

  AbepCurve out;
  out.baseline = f(0.0);
  out.n_realizations = mc.n_realizations;
  const double R = static_cast<double>(mc.n_realizations);
  const double dof = std::max(1.0, R - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.t.push_back(static_cast<double>(i) * grid.dt);
    const double m = acc.sum[i] / R;
    out.abep.push_back(m);
    out.std_error.push_back(
        std::sqrt(std::max(0.0, acc.sum_sq[i] / R - m * m) / dof));
    if (i > 0) {
      const double dm = m - out.abep[i - 1];
      out.step_std_error.push_back(
          std::sqrt(std::max(0.0, acc.step_sq[i] / R - dm * dm) / dof));
    }
  }
  return out;
}

}  // namespace wobble
