// Copyright 2026 The shewpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "shewpt/waveform.hpp"

namespace shewpt {

enum class SpectrumSource { Analytic, Dft };

/// Peak sine/cosine amplitudes per harmonic order. Index 0 of the vectors is
/// order 1.
class HarmonicSpectrum {
 public:
  HarmonicSpectrum(double f1, std::vector<double> amplitudes, std::vector<double> sine,
                   std::vector<double> cosine, SpectrumSource source);

  double fundamental_hz() const noexcept { return f1_; }
  int n_max() const noexcept { return int(amplitudes_.size()); }
  SpectrumSource source() const noexcept { return source_; }

  /// Peak magnitude of order n, 1 <= n <= n_max.
  double amplitude(int n) const;
  /// Signed sine-term (b_n) and cosine-term (a_n) coefficients.
  double sine(int n) const;
  double cosine(int n) const;
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }

 private:
  double f1_;
  std::vector<double> amplitudes_;
  std::vector<double> sine_;
  std::vector<double> cosine_;
  SpectrumSource source_;
};

/// Single-period DFT. `samples.size()` must be a power of two and at least
/// 2*n_max + 2. With SampleKind::CellAverage each bin is divided by the
/// averaging filter response, so bins equal the Fourier coefficients of the
/// underlying signal rather than of its cell means.
HarmonicSpectrum dft_spectrum(std::span<const double> samples, double f1, int n_max,
                              SampleKind kind = SampleKind::Point);

/// Integrating samples of `w` followed by dft_spectrum.
HarmonicSpectrum dft_spectrum(const SteppedWaveform& w, std::size_t samples_per_period, int n_max);

/// Closed-form coefficients from harmonic_amplitude.
HarmonicSpectrum analytic_spectrum(const SteppedWaveform& w, int n_max);

/// sqrt(sum_{n=2}^{n_max} A_n^2) / A_1.
double thd(const HarmonicSpectrum& spectrum, int n_max);

/// Untruncated THD, sqrt(total_rms^2 / fundamental_rms^2 - 1).
double thd_total_closed_form(const AngleSet& angles, double step_voltage);

struct ThdReport {
  double thd_total = 0.0;      // closed form
  double thd_total_dft = 0.0;  // DFT, orders 2..band_total
  int band_total = 0;
  double thd_21 = 0.0;
  /// max over eliminated orders of A_n / A_1 (0 when none are given).
  double eliminated_orders_max_relative = 0.0;
};

inline constexpr std::size_t kDefaultSamplesPerPeriod = 1u << 13;

ThdReport thd_report(const SteppedWaveform& w, std::span<const int> eliminated_orders,
                     std::size_t samples_per_period = kDefaultSamplesPerPeriod);

/// CSV `n,f_Hz,amp_V,rel_to_fund`, orders 1..n_max.
void write_spectrum_csv(const HarmonicSpectrum& s, const std::string& path);

}  // namespace shewpt
