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
 * @file specfun.hpp
 * @brief Modified Bessel function I0 and its exponentially scaled form.
 *
 * J0(j*x) = I0(x) for real x, so every Bessel factor of the wobbling ACF is
 * an I0 of a real argument. The ACF path always goes through exp_scaled_i0,
 * which works in the log domain so that e^{-X} I0(Y) stays finite when I0(Y)
 * alone would overflow.
 */

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wobble::specfun {

/// e^{-X} I0(Y) in log and linear form. `value` may underflow to 0.
struct ScaledBesselResult {
  double log_value = 0.0;
  double value = 1.0;
};

namespace detail {

/// Power series / asymptotic switchover on |x|.
inline constexpr double kSeriesLimit = 15.0;

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": argument must be finite");
  }
}

// sum_k (x^2/4)^k / (k!)^2, all terms positive. Used for |x| <= kSeriesLimit,
// where I0 <= 3.4e5 and about 40 terms reach machine precision.
inline double i0_series(double ax) {
  const double q = 0.25 * ax * ax;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term <= sum * std::numeric_limits<double>::epsilon() * 0.5) break;
  }
  return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) ~ sum_k ((2k-1)!!)^2 / (k! (8x)^k), x > kSeriesLimit.
// The series is divergent; it is cut at the smallest term, which for x > 15
// is below 1e-13.
inline double i0e_asymptotic_sum(double ax) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * ax);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term <= sum * std::numeric_limits<double>::epsilon() * 0.5) break;
  }
  return sum;
}

// log(I0(|x|)) without forming I0 for large arguments.
inline double log_i0(double ax) {
  if (ax <= kSeriesLimit) return std::log(i0_series(ax));
  return ax + std::log(i0e_asymptotic_sum(ax)) -
         0.5 * std::log(2.0 * std::numbers::pi * ax);
}

}  // namespace detail

/// I0(x). Exposed for testing; overflows to +inf beyond |x| ~ 713.
inline double bessel_i0(double x) {
  detail::require_finite(x, "bessel_i0");
  const double ax = std::fabs(x);
  if (ax <= detail::kSeriesLimit) return detail::i0_series(ax);
  return std::exp(ax) * detail::i0e_asymptotic_sum(ax) /
         std::sqrt(2.0 * std::numbers::pi * ax);
}

/// e^{-X} I0(Y), evaluated as exp(-X + log I0(|Y|)).
inline ScaledBesselResult exp_scaled_i0(double X, double Y) {
  detail::require_finite(X, "exp_scaled_i0");
  detail::require_finite(Y, "exp_scaled_i0");
  ScaledBesselResult r;
  r.log_value = -X + detail::log_i0(std::fabs(Y));
  r.value = std::exp(r.log_value);
  return r;
}

}  // namespace wobble::specfun
