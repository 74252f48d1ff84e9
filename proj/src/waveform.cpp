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

#include "shewpt/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "io_util.hpp"
#include "shewpt/error.hpp"

namespace shewpt {

namespace {

double wrap_angle(double phi) noexcept {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

bool AngleSet::is_valid(std::span<const double> radians) noexcept {
  if (radians.empty()) return false;
  for (std::size_t i = 0; i < radians.size(); ++i) {
    const double a = radians[i];
    if (!std::isfinite(a) || a <= 0.0 || a >= kHalfPi) return false;
    if (i > 0 && !(a > radians[i - 1])) return false;
  }
  return true;
}

AngleSet::AngleSet(std::vector<double> radians) : angles_(std::move(radians)) {
  if (angles_.empty()) throw ValidationError("angles", "at least one angle is required");
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!std::isfinite(a) || a <= 0.0 || a >= kHalfPi)
      throw ValidationError("angles", "angle " + std::to_string(i + 1) +
                                          " is outside the open interval (0, 90) degrees");
    if (i > 0 && !(a > angles_[i - 1]))
      throw ValidationError("angles", "angles must be strictly increasing (angle " +
                                          std::to_string(i + 1) + ")");
  }
}

AngleSet AngleSet::from_degrees(std::span<const double> degrees) {
  std::vector<double> rad(degrees.size());
  std::transform(degrees.begin(), degrees.end(), rad.begin(), deg_to_rad);
  return AngleSet(std::move(rad));
}

std::vector<double> AngleSet::degrees() const {
  std::vector<double> deg(angles_.size());
  std::transform(angles_.begin(), angles_.end(), deg.begin(), rad_to_deg);
  return deg;
}

SteppedWaveform::SteppedWaveform(AngleSet angles, double step_voltage, double fundamental_hz)
    : angles_(std::move(angles)), step_voltage_(step_voltage), f1_(fundamental_hz) {
  if (!(step_voltage_ > 0.0) || !std::isfinite(step_voltage_))
    throw ValidationError("step_voltage", "must be a positive finite voltage");
  if (!(f1_ > 0.0) || !std::isfinite(f1_))
    throw ValidationError("fundamental_frequency", "must be a positive finite frequency");
}

int SteppedWaveform::level_at(double phi) const noexcept {
  const double p = wrap_angle(phi);
  int level = 0;
  for (double th : angles_.radians()) {
    if (p >= th && p <= kPi - th)
      ++level;
    else if (p >= kPi + th && p <= kTwoPi - th)
      --level;
  }
  return level;
}

double SteppedWaveform::at_angle(double phi) const noexcept {
  return step_voltage_ * double(level_at(phi));
}

double SteppedWaveform::sample(double t) const noexcept { return at_angle(kTwoPi * f1_ * t); }

double SteppedWaveform::integral_to(double phi) const noexcept {
  double sum = 0.0;
  for (double th : angles_.radians()) {
    sum += std::clamp(phi, th, kPi - th) - th;
    sum -= std::clamp(phi, kPi + th, kTwoPi - th) - (kPi + th);
  }
  return step_voltage_ * sum;
}

std::vector<double> SteppedWaveform::sample_period(std::size_t count, SampleKind kind) const {
  if (count == 0) throw ValidationError("samples_per_period", "must be positive");
  std::vector<double> out(count);
  const double dphi = kTwoPi / double(count);
  if (kind == SampleKind::Point) {
    for (std::size_t j = 0; j < count; ++j) out[j] = at_angle(dphi * double(j));
    return out;
  }
  double prev = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double next = integral_to(j + 1 == count ? kTwoPi : dphi * double(j + 1));
    out[j] = (next - prev) / dphi;
    prev = next;
  }
  return out;
}

SteppedWaveform synth(const AngleSet& angles, double step_voltage, double f1) {
  return SteppedWaveform(angles, step_voltage, f1);
}

double harmonic_amplitude(const AngleSet& angles, double step_voltage, int n) {
  if (n < 1) throw ValidationError("n", "harmonic order must be >= 1");
  if (n % 2 == 0) return 0.0;
  double sum = 0.0;
  for (double th : angles.radians()) sum += std::cos(n * th);
  return 4.0 * step_voltage / (double(n) * kPi) * sum;
}

double fundamental_rms(const AngleSet& angles, double step_voltage) {
  return harmonic_amplitude(angles, step_voltage, 1) / std::sqrt(2.0);
}

double total_rms(const AngleSet& angles, double step_voltage) {
  const auto th = angles.radians();
  double acc = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double width = (i + 1 < th.size() ? th[i + 1] : kHalfPi) - th[i];
    const double level = double(i + 1) * step_voltage;
    acc += level * level * width;
  }
  return std::sqrt(2.0 / kPi * acc);
}

void write_waveform_csv(const SteppedWaveform& w, std::size_t samples_per_period,
                        const std::string& path) {
  const auto v = w.sample_period(samples_per_period, SampleKind::Point);
  auto out = detail::open_for_write(path);
  out << "t_s,v_V\n";
  const double dt = w.period() / double(samples_per_period);
  for (std::size_t j = 0; j < v.size(); ++j)
    out << detail::fmt_double(dt * double(j)) << ',' << detail::fmt_double(v[j]) << '\n';
  detail::finish_write(out, path);
}

}  // namespace shewpt
