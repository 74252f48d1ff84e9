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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shewpt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Firing angles of an N-cell cascade, one per H-bridge, in radians.
/// Always strictly increasing and inside the open interval (0, pi/2).
class AngleSet {
 public:
  /// Throws ValidationError("angles", ...) when the invariants do not hold.
  explicit AngleSet(std::vector<double> radians);

  static AngleSet from_degrees(std::span<const double> degrees);

  std::size_t levels() const noexcept { return angles_.size(); }
  std::span<const double> radians() const noexcept { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }
  std::vector<double> degrees() const;

  /// True when `radians` would construct without error.
  static bool is_valid(std::span<const double> radians) noexcept;

 private:
  std::vector<double> angles_;
};

/// How a period is turned into discrete samples.
enum class SampleKind {
  /// v(t_j) at t_j = j*T/count.
  Point,
  /// Exact mean of v over [t_j, t_j + T/count).
  CellAverage,
};

/// Output voltage of a cascaded H-bridge: the sum of N quasi-square layer
/// voltages. Layer i is +step on [theta_i, pi - theta_i], -step on
/// [pi + theta_i, 2pi - theta_i] and 0 elsewhere (electrical angle).
class SteppedWaveform {
 public:
  SteppedWaveform(AngleSet angles, double step_voltage, double fundamental_hz);

  const AngleSet& angles() const noexcept { return angles_; }
  std::size_t levels() const noexcept { return angles_.levels(); }
  double step_voltage() const noexcept { return step_voltage_; }
  double fundamental_hz() const noexcept { return f1_; }
  double period() const noexcept { return 1.0 / f1_; }
  double peak() const noexcept { return step_voltage_ * double(levels()); }

  /// Instantaneous value at time t (exact piecewise-constant lookup).
  double sample(double t) const noexcept;
  /// Instantaneous value at electrical angle phi (any real phi).
  double at_angle(double phi) const noexcept;
  /// Number of conducting layers at phi, signed: in [-N, N].
  int level_at(double phi) const noexcept;

  /// Integral of v over electrical angle [0, phi], phi in [0, 2pi].
  double integral_to(double phi) const noexcept;

  /// One period, `count` samples of the requested kind.
  std::vector<double> sample_period(std::size_t count, SampleKind kind) const;

 private:
  AngleSet angles_;
  double step_voltage_;
  double f1_;
};

/// Builds the waveform after validating step voltage and frequency.
SteppedWaveform synth(const AngleSet& angles, double step_voltage, double f1);

/// Peak amplitude of the n-th sine harmonic:
/// b_n = 4*step/(n*pi) * sum_i cos(n*theta_i) for odd n, 0 for even n.
double harmonic_amplitude(const AngleSet& angles, double step_voltage, int n);
double fundamental_rms(const AngleSet& angles, double step_voltage);
/// Time-domain RMS from the quarter-period staircase.
double total_rms(const AngleSet& angles, double step_voltage);

/// CSV `t_s,v_V`, one period of point samples.
void write_waveform_csv(const SteppedWaveform& w, std::size_t samples_per_period,
                        const std::string& path);

}  // namespace shewpt
