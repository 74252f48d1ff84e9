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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shewpt/error.hpp"
#include "shewpt/waveform.hpp"

using namespace shewpt;

namespace {

SteppedWaveform three_level(const std::vector<double>& deg = fixtures::kRoot3Deg) {
  return synth(AngleSet::from_degrees(deg), 500.0, 85e3);
}

}  // namespace

TEST_CASE("AngleSet rejects invalid angle lists") {
  CHECK_THROWS_AS(AngleSet({}), ValidationError);
  CHECK_THROWS_AS(AngleSet({0.0}), ValidationError);
  CHECK_THROWS_AS(AngleSet({kHalfPi}), ValidationError);
  CHECK_THROWS_AS(AngleSet({0.3, 0.2}), ValidationError);
  CHECK_THROWS_AS(AngleSet({0.3, 0.3}), ValidationError);
  CHECK_THROWS_AS(AngleSet({std::nan("")}), ValidationError);
  try {
    AngleSet({0.5, 0.1});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "angles");
  }
  CHECK(AngleSet::is_valid(std::vector<double>{0.1, 0.2}));
  CHECK_FALSE(AngleSet::is_valid(std::vector<double>{0.2, 0.1}));
}

TEST_CASE("synth validates step voltage and frequency by field") {
  const auto a = AngleSet::from_degrees(fixtures::kRoot3Deg);
  try {
    synth(a, 0.0, 85e3);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "step_voltage");
  }
  try {
    synth(a, 500.0, -1.0);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "fundamental_frequency");
  }
}

TEST_CASE("single layer near zero angle is a square wave") {
  const auto w = synth(AngleSet({1e-4}), 500.0, 1.0);
  CHECK(w.peak() == 500.0);
  CHECK(w.sample(0.25) == 500.0);
  CHECK(w.sample(0.75) == -500.0);
  CHECK(w.sample(0.0) == 0.0);
  CHECK(fundamental_rms(w.angles(), 500.0) ==
        doctest::Approx(4.0 * 500.0 / (kPi * std::sqrt(2.0))).epsilon(1e-8));
  CHECK(total_rms(w.angles(), 500.0) == doctest::Approx(500.0).epsilon(1e-4));
}

TEST_CASE("stepped waveform levels and symmetry") {
  const auto w = three_level();
  const double T = w.period();
  CHECK(w.peak() == 1500.0);
  CHECK(w.sample(0.0) == 0.0);
  CHECK(w.sample(T / 4) == 1500.0);
  // mirror of 30 deg about 90 deg
  const double t30 = T * 30.0 / 360.0;
  CHECK(w.sample(T / 2 - t30) == w.sample(t30));
  CHECK(w.at_angle(deg_to_rad(30.0)) == 500.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, T);
  for (int i = 0; i < 2000; ++i) {
    const double t = u(rng);
    const double v = w.sample(t);
    const double lvl = v / w.step_voltage();
    CHECK(lvl == std::round(lvl));
    CHECK(std::abs(lvl) <= 3.0);
    CHECK(w.sample(t + T / 2) == -v);
    CHECK(w.sample(T / 2 - t) == v);
  }
  // periodic for negative and large t
  CHECK(w.sample(-T + T / 4) == 1500.0);
  CHECK(w.sample(1000 * T + T / 4) == 1500.0);
}

TEST_CASE("four-level waveform has nine levels peaking at 1500 V") {
  const auto w = synth(AngleSet::from_degrees(fixtures::kNominal4Deg), 375.0, 85e3);
  CHECK(w.peak() == 1500.0);
  CHECK(w.level_at(kHalfPi) == 4);
  CHECK(w.level_at(kPi + kHalfPi) == -4);
  const auto s = w.sample_period(4096, SampleKind::Point);
  std::vector<int> seen;
  for (double v : s) seen.push_back(int(std::lround(v / 375.0)));
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  CHECK(seen.size() == 9);
}

TEST_CASE("harmonic amplitude closed form") {
  const auto nominal = AngleSet::from_degrees(fixtures::kNominal3Deg);
  // direct evaluation of 4*500/pi * sum cos(theta_i) at 11, 41, 85 deg
  CHECK(harmonic_amplitude(nominal, 500.0, 1) == doctest::Approx(1160.8713843498774).epsilon(1e-10));
  CHECK(fundamental_rms(nominal, 500.0) == doctest::Approx(820.8600279592132).epsilon(1e-10));
  CHECK(harmonic_amplitude(nominal, 500.0, 2) == 0.0);
  CHECK(harmonic_amplitude(nominal, 500.0, 10) == 0.0);
  CHECK_THROWS_AS(harmonic_amplitude(nominal, 500.0, 0), ValidationError);

  const auto root = AngleSet::from_degrees(fixtures::kRoot3Deg);
  CHECK(std::abs(harmonic_amplitude(root, 500.0, 3)) < 1e-5);
  CHECK(fundamental_rms(root, 500.0) == doctest::Approx(809.19).epsilon(1.0 / 809.19));
  CHECK(fundamental_rms(root, 500.0) == doctest::Approx(809.1957361609486).epsilon(1e-8));

  const auto root4 = AngleSet::from_degrees(fixtures::kRoot4Deg);
  CHECK(fundamental_rms(root4, 375.0) == doctest::Approx(869.6339610665399).epsilon(1e-8));
}

TEST_CASE("total RMS from the staircase") {
  const auto root = AngleSet::from_degrees(fixtures::kRoot3Deg);
  CHECK(total_rms(root, 500.0) == doctest::Approx(823.0203816067976).epsilon(1e-8));
  CHECK(total_rms(root, 500.0) >= fundamental_rms(root, 500.0));
}

TEST_CASE("property: Parseval gap below 1e-6") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto th = oracle::random_angles(rng, 1 + std::size_t(trial % 5));
    const AngleSet a(th);
    const double lhs = std::pow(total_rms(a, 100.0), 2);
    const double rhs = oracle::parseval_sum_exact(th, 100.0);
    CHECK(std::abs(lhs - rhs) / lhs < 1e-6);
    // partial sums approach the total from below with an O(1/N) tail
    const double part = oracle::parseval_sum(th, 100.0, 9999);
    CHECK(part <= rhs);
    CHECK((rhs - part) / lhs < 1e-3);
  }
}

TEST_CASE("property: sampled integration reproduces b_n") {
  std::mt19937_64 rng(3);
  const std::size_t cells = 1u << 14;
  for (int trial = 0; trial < 5; ++trial) {
    const auto th = oracle::random_angles(rng, 3);
    const AngleSet a(th);
    const double b1 = harmonic_amplitude(a, 1.0, 1);
    for (int n : {1, 3, 5, 7, 9, 11, 21, 49}) {
      const double ref = oracle::sampled_sine_coefficient(th, 1.0, n, cells);
      CHECK(std::abs(ref - harmonic_amplitude(a, 1.0, n)) / std::abs(b1) < 1e-6);
    }
  }
}

TEST_CASE("property: scaling step voltage scales harmonics and RMS") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const AngleSet a(oracle::random_angles(rng, 4));
    const double c = 3.25;
    for (int n = 1; n < 30; n += 2)
      CHECK(harmonic_amplitude(a, c * 10.0, n) ==
            doctest::Approx(c * harmonic_amplitude(a, 10.0, n)).epsilon(1e-14));
    CHECK(total_rms(a, c * 10.0) == doctest::Approx(c * total_rms(a, 10.0)).epsilon(1e-14));
  }
}

TEST_CASE("cell-average sampling matches the independent cell mean") {
  const auto w = three_level();
  const std::size_t n = 1024;
  const auto s = w.sample_period(n, SampleKind::CellAverage);
  const auto th = w.angles().radians();
  const std::vector<double> thv(th.begin(), th.end());
  const double h = 2.0 * kPi / double(n);
  for (std::size_t j = 0; j < n; j += 7)
    CHECK(s[j] == doctest::Approx(oracle::cell_mean(thv, 500.0, h * double(j), h * double(j + 1)))
                      .epsilon(1e-10));
  CHECK_THROWS_AS(w.sample_period(0, SampleKind::Point), ValidationError);
}
