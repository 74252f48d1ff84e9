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

#include "shewpt/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

#include "io_util.hpp"
#include "shewpt/error.hpp"

namespace shewpt {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

HarmonicSpectrum::HarmonicSpectrum(double f1, std::vector<double> amplitudes,
                                   std::vector<double> sine, std::vector<double> cosine,
                                   SpectrumSource source)
    : f1_(f1),
      amplitudes_(std::move(amplitudes)),
      sine_(std::move(sine)),
      cosine_(std::move(cosine)),
      source_(source) {}

double HarmonicSpectrum::amplitude(int n) const {
  if (n < 1 || n > n_max()) throw ValidationError("n", "harmonic order outside spectrum range");
  return amplitudes_[std::size_t(n - 1)];
}

double HarmonicSpectrum::sine(int n) const {
  if (n < 1 || n > n_max()) throw ValidationError("n", "harmonic order outside spectrum range");
  return sine_[std::size_t(n - 1)];
}

double HarmonicSpectrum::cosine(int n) const {
  if (n < 1 || n > n_max()) throw ValidationError("n", "harmonic order outside spectrum range");
  return cosine_[std::size_t(n - 1)];
}

HarmonicSpectrum dft_spectrum(std::span<const double> samples, double f1, int n_max,
                              SampleKind kind) {
  const std::size_t count = samples.size();
  if (!is_power_of_two(count))
    throw ValidationError("samples", "count must be a power of two, got " + std::to_string(count));
  if (n_max < 1) throw ValidationError("n_max", "must be >= 1");
  if (count < 2 * std::size_t(n_max) + 2)
    throw ValidationError("n_max", "exceeds Nyquist limit for " + std::to_string(count) +
                                       " samples");
  if (!(f1 > 0.0)) throw ValidationError("fundamental_frequency", "must be positive");

  const std::size_t bins = count / 2 + 1;
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * count)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(int(count), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const auto bins_out = std::size_t(n_max);
  std::vector<double> amp(bins_out), sine(bins_out), cosine(bins_out);
  const double nd = double(count);
  for (int n = 1; n <= n_max; ++n) {
    const auto& b = out.get()[n];
    std::complex<double> c(b[0] / nd, b[1] / nd);
    if (kind == SampleKind::CellAverage) {
      // Mean over a cell of width h multiplies harmonic n by
      // exp(i*pi*n/N) * sinc(n/N).
      const double x = kPi * double(n) / nd;
      c /= std::polar(std::sin(x) / x, x);
    }
    const std::size_t i = std::size_t(n - 1);
    cosine[i] = 2.0 * c.real();
    sine[i] = -2.0 * c.imag();
    amp[i] = 2.0 * std::abs(c);
  }
  return HarmonicSpectrum(f1, std::move(amp), std::move(sine), std::move(cosine),
                          SpectrumSource::Dft);
}

HarmonicSpectrum dft_spectrum(const SteppedWaveform& w, std::size_t samples_per_period, int n_max) {
  const auto samples = w.sample_period(samples_per_period, SampleKind::CellAverage);
  return dft_spectrum(samples, w.fundamental_hz(), n_max, SampleKind::CellAverage);
}

HarmonicSpectrum analytic_spectrum(const SteppedWaveform& w, int n_max) {
  if (n_max < 1) throw ValidationError("n_max", "must be >= 1");
  const auto bins_out = std::size_t(n_max);
  std::vector<double> amp(bins_out), sine(bins_out), cosine(bins_out, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    const double b = harmonic_amplitude(w.angles(), w.step_voltage(), n);
    sine[std::size_t(n - 1)] = b;
    amp[std::size_t(n - 1)] = std::abs(b);
  }
  return HarmonicSpectrum(w.fundamental_hz(), std::move(amp), std::move(sine), std::move(cosine),
                          SpectrumSource::Analytic);
}

double thd(const HarmonicSpectrum& spectrum, int n_max) {
  if (n_max < 1 || n_max > spectrum.n_max())
    throw ValidationError("n_max", "spectrum does not cover order " + std::to_string(n_max));
  const double a1 = spectrum.amplitude(1);
  if (!(a1 > 0.0)) throw ValidationError("fundamental", "zero fundamental, THD undefined");
  double acc = 0.0;
  for (int n = 2; n <= n_max; ++n) acc += spectrum.amplitude(n) * spectrum.amplitude(n);
  return std::sqrt(acc) / a1;
}

double thd_total_closed_form(const AngleSet& angles, double step_voltage) {
  const double total = total_rms(angles, step_voltage);
  const double fund = fundamental_rms(angles, step_voltage);
  if (!(fund > 0.0)) throw ValidationError("fundamental", "zero fundamental, THD undefined");
  const double ratio = total * total / (fund * fund) - 1.0;
  return std::sqrt(std::max(ratio, 0.0));
}

ThdReport thd_report(const SteppedWaveform& w, std::span<const int> eliminated_orders,
                     std::size_t samples_per_period) {
  const int band = int(samples_per_period / 2) - 1;
  const auto spec = dft_spectrum(w, samples_per_period, band);
  ThdReport r;
  r.thd_total = thd_total_closed_form(w.angles(), w.step_voltage());
  r.band_total = band;
  r.thd_total_dft = thd(spec, band);
  r.thd_21 = thd(spec, std::min(21, band));
  for (int n : eliminated_orders)
    if (n >= 1 && n <= band)
      r.eliminated_orders_max_relative =
          std::max(r.eliminated_orders_max_relative, spec.amplitude(n) / spec.amplitude(1));
  return r;
}

void write_spectrum_csv(const HarmonicSpectrum& s, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "n,f_Hz,amp_V,rel_to_fund\n";
  const double a1 = s.amplitude(1);
  for (int n = 1; n <= s.n_max(); ++n) {
    const double a = s.amplitude(n);
    out << n << ',' << detail::fmt_double(s.fundamental_hz() * n) << ','
        << detail::fmt_double(a) << ',' << detail::fmt_double(a1 > 0.0 ? a / a1 : 0.0) << '\n';
  }
  detail::finish_write(out, path);
}

}  // namespace shewpt
