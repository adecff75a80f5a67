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
 * @file doppler_psd.hpp
 * @brief Doppler power spectral density as the Fourier transform of the ACF.
 *
 * The one-sided ACF samples C[0..K-1] (spacing dt, t_max = (K-1) dt) are
 * even-extended to C(-tau) = C(tau), windowed, zero-padded to
 * L = pad_factor * 2 (K-1) points and transformed. The DFT is scaled by dt,
 * so sum(psd) * df = C(0) and df = 1 / (pad_factor * 2 t_max).
 */

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wobble/temporal_acf.hpp"

namespace wobble {

enum class Window { Rectangular, Hann };

constexpr std::string_view to_string(Window w) noexcept {
  return w == Window::Hann ? "hann" : "rect";
}

struct DopplerSpectrum {
  std::vector<double> freq;  ///< Doppler frequency [Hz], ascending, symmetric
  std::vector<double> psd;   ///< [1/Hz]
  Window window = Window::Rectangular;
  double t_max = 0.0;            ///< ACF truncation horizon [s]
  double max_imag = 0.0;         ///< largest |Im| discarded from the DFT
  double max_asymmetry = 0.0;    ///< largest |X[k] - X[L-k]| before folding
};

namespace detail {

// FFTW planning is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDestroy {
  void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};

inline std::vector<std::complex<double>> forward_dft(
    const std::vector<std::complex<double>>& in) {
  const auto n = static_cast<int>(in.size());
  std::unique_ptr<fftw_complex, FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * in.size())));
  if (!buf) throw std::bad_alloc();
  std::unique_ptr<fftw_plan_s, FftwPlanDestroy> plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.reset(fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD,
                                FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("fftw: plan creation failed");
  for (std::size_t i = 0; i < in.size(); ++i) {
    buf.get()[i][0] = in[i].real();
    buf.get()[i][1] = in[i].imag();
  }
  fftw_execute(plan.get());
  std::vector<std::complex<double>> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = {buf.get()[i][0], buf.get()[i][1]};
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.reset();
  }
  return out;
}

inline std::vector<double> acf_real_values(const AcfCurve& acf) {
  if (acf.analytic) return *acf.analytic;
  if (acf.empirical) {
    std::vector<double> v;
    v.reserve(acf.empirical->size());
    for (const auto& z : *acf.empirical) v.push_back(z.real());
    return v;
  }
  throw std::invalid_argument("doppler_psd: ACF curve carries no values");
}

inline double uniform_step(const std::vector<double>& lags) {
  if (lags.size() < 2) {
    throw std::domain_error("doppler_psd: at least two ACF lags required");
  }
  if (lags.front() != 0.0) {
    throw std::domain_error("doppler_psd: ACF grid must start at 0");
  }
  const double dt = lags[1] - lags[0];
  if (!(dt > 0.0)) throw std::domain_error("doppler_psd: non-uniform grid");
  for (std::size_t i = 1; i < lags.size(); ++i) {
    const double expected = static_cast<double>(i) * dt;
    if (std::fabs(lags[i] - expected) > 1e-9 * std::max(expected, dt)) {
      throw std::domain_error("doppler_psd: non-uniform grid");
    }
  }
  return dt;
}

}  // namespace detail

inline DopplerSpectrum doppler_psd(const AcfCurve& acf,
                                   Window window = Window::Rectangular,
                                   std::size_t pad_factor = 1) {
  if (pad_factor < 1) throw std::invalid_argument("pad_factor >= 1 required");
  const double dt = detail::uniform_step(acf.delta_t);
  const std::vector<double> c = detail::acf_real_values(acf);
  if (c.size() != acf.delta_t.size()) {
    throw std::invalid_argument("doppler_psd: value/lag size mismatch");
  }
  const std::size_t K = c.size();
  const std::size_t L = pad_factor * 2 * (K - 1);
  const double span = static_cast<double>(K - 1);

  auto taper = [&](std::size_t m) {
    if (window == Window::Rectangular) return 1.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(m) / span));
  };

  std::vector<std::complex<double>> x(L, {0.0, 0.0});
  x[0] = c[0] * taper(0);
  for (std::size_t m = 1; m < K; ++m) {
    const double v = c[m] * taper(m);
    x[m] = v;
    if (L - m != m) x[L - m] = v;
  }
  const auto X = detail::forward_dft(x);

  DopplerSpectrum s;
  s.window = window;
  s.t_max = acf.delta_t.back();
  const double df = 1.0 / (static_cast<double>(L) * dt);
  for (const auto& z : X) s.max_imag = std::max(s.max_imag, std::fabs(z.imag()) * dt);
  for (std::size_t k = 1; k < L; ++k) {
    s.max_asymmetry =
        std::max(s.max_asymmetry, std::fabs(X[k].real() - X[L - k].real()) * dt);
  }

  // Bins -L/2 .. L/2 ascending. Bin k and L-k are averaged so psd(f) = psd(-f)
  // bit for bit; the Nyquist bin is split evenly between +-L/2.
  const std::size_t half = L / 2;
  auto folded = [&](std::size_t k) {
    if (k == 0) return X[0].real() * dt;
    if (k == half) return 0.5 * X[half].real() * dt;
    return 0.5 * (X[k].real() + X[L - k].real()) * dt;
  };
  s.freq.reserve(L + 1);
  s.psd.reserve(L + 1);
  for (std::size_t k = half; k >= 1; --k) {
    s.freq.push_back(-static_cast<double>(k) * df);
    s.psd.push_back(folded(k));
  }
  for (std::size_t k = 0; k <= half; ++k) {
    s.freq.push_back(static_cast<double>(k) * df);
    s.psd.push_back(folded(k));
  }
  return s;
}

/// sqrt(sum f^2 psd / sum psd) over the spectrum.
inline double rms_doppler_spread(const DopplerSpectrum& s) {
  double p0 = 0.0;
  double p2 = 0.0;
  for (std::size_t i = 0; i < s.freq.size(); ++i) {
    p0 += s.psd[i];
    p2 += s.freq[i] * s.freq[i] * s.psd[i];
  }
  if (!(p0 > 0.0)) throw std::domain_error("rms_doppler_spread: empty spectrum");
  return std::sqrt(std::max(0.0, p2 / p0));
}

/// Indices of strict interior local maxima of psd.
inline std::vector<std::size_t> local_maxima(const DopplerSpectrum& s) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < s.psd.size(); ++i) {
    if (s.psd[i] > s.psd[i - 1] && s.psd[i] >= s.psd[i + 1]) idx.push_back(i);
  }
  return idx;
}

/**
 * |f_D| of the first local maximum with f_D > 0 (the first side bulge), or a
 * negative value when there is none above `min_relative` of the peak.
 */
inline double first_side_bulge(const DopplerSpectrum& s,
                               double min_relative = 0.0) {
  const double peak = *std::max_element(s.psd.begin(), s.psd.end());
  for (std::size_t i : local_maxima(s)) {
    if (s.freq[i] > 0.0 && s.psd[i] > min_relative * peak) return s.freq[i];
  }
  return -1.0;
}

}  // namespace wobble
