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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shewpt/she_solver.hpp"
#include "shewpt/spectrum.hpp"
#include "shewpt/transient_sim.hpp"
#include "shewpt/wpt_link.hpp"

using namespace shewpt;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s  %2d  %s | %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* spec, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, spec, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_gap_deg(const AngleSet& a, const std::vector<double>& deg) {
  double g = 0.0;
  const auto d = a.degrees();
  for (std::size_t i = 0; i < d.size(); ++i) g = std::max(g, std::abs(d[i] - deg[i]));
  return g;
}

/// Multistart root closest (max-angle) to the nominal angles.
AngleSet nearest_branch(const std::vector<int>& orders, const std::vector<double>& nominal) {
  const auto sols = solve_multistart(HarmonicTargetSet(orders), 5.0);
  if (sols.empty()) throw NonConvergenceError("multistart found no root", {AngleSet::from_degrees(nominal), 1.0, 0, false});
  const SheSolution* best = &sols.front();
  for (const auto& s : sols)
    if (max_gap_deg(s.angles, nominal) < max_gap_deg(best->angles, nominal)) best = &s;
  return best->angles;
}

template <class F>
void guarded(int id, const char* what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const HarmonicTargetSet t3(fixtures::kOrders3), t4(fixtures::kOrders4);

  guarded(1, "SHE 3-level Newton, grid oracle, runtime", [&] {
    const auto t0 = Clock::now();
    const auto sol = solve_newton(AngleSet::from_degrees(fixtures::kNominal3Deg), t3);
    const double dt = seconds_since(t0);
    const auto g = grid_oracle(t3, 0.5);
    const auto d = sol.angles.degrees();
    const bool near = std::abs(d[0] - 12.0) < 0.05 && std::abs(d[1] - 41.9) < 0.05 && std::abs(d[2] - 85.7) < 0.05;
    const double gap = max_gap_deg(g, d);
    report(1, sol.converged && sol.residual_norm < 1e-12 && near && gap <= 0.5 && dt < 1.0,
           "SHE 3-level Newton, grid oracle, runtime",
           fmt("theta=(%.4f, %.4f, %.4f) deg", d[0], d[1], d[2]) + fmt(" |F|inf=%.2e oracle gap=%.3f deg", sol.residual_norm, gap) +
               fmt(" t=%.4f s", dt));
  });

  const auto root3 = solve_newton(AngleSet::from_degrees(fixtures::kNominal3Deg), t3).angles;
  const auto w3 = synth(root3, 500.0, 85e3);

  guarded(2, "fundamental RMS 3-level", [&] {
    const double v = fundamental_rms(root3, 500.0);
    report(2, std::abs(v - 809.19) <= 1.0, "fundamental RMS 3-level", fmt("%.4f V vs 809.19 +/- 1 V", v));
  });

  AngleSet root4 = AngleSet::from_degrees(fixtures::kRoot4Deg);
  guarded(3, "fundamental RMS 4-level", [&] {
    root4 = nearest_branch(fixtures::kOrders4, fixtures::kNominal4Deg);
    const auto d = root4.degrees();
    const double v = fundamental_rms(root4, 375.0);
    report(3, std::abs(v - 869.7) <= 1.5, "fundamental RMS 4-level",
           fmt("%.4f V vs 869.7 +/- 1.5 V", v) + fmt(" at (%.3f, %.3f, %.3f, %.3f) deg", d[0], d[1], d[2], d[3]));
  });
  const auto w4 = synth(root4, 375.0, 85e3);

  guarded(4, "THD 3-level", [&] {
    const auto r = thd_report(w3, fixtures::kOrders3);
    const bool ok = std::abs(100 * r.thd_21 - 15.14) <= 1.0 && std::abs(100 * r.thd_total - 18.5) <= 0.5;
    report(4, ok, "THD 3-level", fmt("THD_21=%.3f%% (15.14 +/- 1) THD_total=%.3f%% (18.5 +/- 0.5)", 100 * r.thd_21, 100 * r.thd_total));
  });

  guarded(5, "THD 4-level", [&] {
    const auto r = thd_report(w4, fixtures::kOrders4);
    const bool ok = std::abs(100 * r.thd_21 - 9.7) <= 1.0 && std::abs(100 * r.thd_total - 12.8) <= 0.8;
    report(5, ok, "THD 4-level", fmt("THD_21=%.3f%% (9.7 +/- 1) THD_total=%.3f%% (12.8 +/- 0.8)", 100 * r.thd_21, 100 * r.thd_total));
  });

  guarded(6, "harmonic elimination in the DFT", [&] {
    const auto s3 = dft_spectrum(w3, kDefaultSamplesPerPeriod, 99);
    const auto s4 = dft_spectrum(w4, kDefaultSamplesPerPeriod, 99);
    double worst = 0.0;
    for (int n : fixtures::kOrders3) worst = std::max(worst, s3.amplitude(n) / s3.amplitude(1));
    for (int n : fixtures::kOrders4) worst = std::max(worst, s4.amplitude(n) / s4.amplitude(1));
    report(6, worst < 1e-6, "harmonic elimination in the DFT", fmt("max target/fundamental = %.3e (< 1e-6)", worst));
  });

  guarded(7, "FHA power at the measured operating points", [&] {
    const auto p = reference_link_params();
    const double p100 = fha_solve(reference_link_params(100.0)).P_out;
    const double p150 = fha_solve(reference_link_params(150.0)).P_out;
    const double e100 = std::abs(p100 - 215.0) / 215.0, e150 = std::abs(p150 - 489.0) / 489.0;
    const double ratio = power_scaling_check(p, 100.0, 150.0);
    const double measured = 489.0 / 215.0;
    const double ratio_err = std::abs(measured - ratio) / ratio;
    const bool ok = e100 < 0.15 && e150 < 0.15 && std::abs(ratio - 2.25) < 1e-12 && ratio_err < 0.015;
    report(7, ok, "FHA power at the measured operating points",
           fmt("P100=%.2f W (%.1f%%) P150=%.2f W (%.1f%%)", p100, 100 * e100, p150, 100 * e150) +
               fmt(" ratio=%.12g measured=%.4f (%.2f%%)", ratio, measured, 100 * ratio_err));
  });

  guarded(8, "transient vs FHA, energy balance, step halving, runtime", [&] {
    const auto p = reference_link_params(100.0);
    const auto t0 = Clock::now();
    const auto tr = simulate_square(p, 4096, kDefaultCycles);
    const auto m = steady_state_metrics(tr, kDefaultCycles - 10);
    const double dt = seconds_since(t0);
    const double fha = fha_solve(p).P_out;
    const double agree = std::abs(m.P_out - fha) / fha;

    // per-cycle balance: stored energy change against the trapezoidal
    // integral of drive power minus load power, relative to cycle input
    const std::size_t spc = 4096;
    double balance = 0.0;
    for (int c = 0; c < tr.n_cycles; ++c) {
      const std::size_t a = std::size_t(c) * spc;
      double net = 0.0, in = 0.0;
      for (std::size_t j = a; j < a + spc; ++j) {
        const double v = tr.drive[j];
        auto pw = [&](const TankState& s) { return v * s.i1 - tr.R_ac * s.i2 * s.i2; };
        net += 0.5 * tr.dt * (pw(tr.states[j]) + pw(tr.states[j + 1]));
        in += 0.5 * tr.dt * (std::abs(v * tr.states[j].i1) + std::abs(v * tr.states[j + 1].i1));
      }
      const double de = stored_energy(tr.states[a + spc], p) - stored_energy(tr.states[a], p);
      balance = std::max(balance, std::abs(de - net) / in);
    }

    const auto fine = steady_state_metrics(simulate_square(p, 8192, kDefaultCycles), kDefaultCycles - 10);
    const double halving = std::abs(fine.P_out - m.P_out) / m.P_out;
    const bool ok = agree < 0.05 && balance < 1e-6 && halving < 1e-3 && dt < 10.0;
    report(8, ok, "transient vs FHA, energy balance, step halving, runtime",
           fmt("P_tr=%.3f W P_fha=%.3f W (%.3f%%)", m.P_out, fha, 100 * agree) +
               fmt(" balance=%.2e halving=%.2e t=%.3f s", balance, halving, dt));
  });

  guarded(9, "property suites", [&] {
    std::mt19937_64 rng(9);
    double parseval = 0.0, dft = 0.0, jac = 0.0, even = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto th = oracle::random_angles(rng, 1 + std::size_t(trial % 4));
      const AngleSet a(th);
      const double lhs = std::pow(total_rms(a, 100.0), 2);
      parseval = std::max(parseval, std::abs(lhs - oracle::parseval_sum_exact(th, 100.0)) / lhs);

      const auto w = synth(a, 100.0, 85e3);
      const auto s = dft_spectrum(w, 1u << 15, 99);
      const double b1 = std::abs(harmonic_amplitude(a, 100.0, 1));
      for (int n = 1; n <= 99; ++n) {
        dft = std::max(dft, std::abs(s.sine(n) - harmonic_amplitude(a, 100.0, n)) / b1);
        if (n % 2 == 0) even = std::max(even, s.amplitude(n) / s.amplitude(1));
      }
    }
    for (int trial = 0; trial < 100; ++trial) {
      const auto& orders = trial % 2 ? fixtures::kOrders3 : fixtures::kOrders4;
      const auto th = oracle::random_angles(rng, orders.size());
      const auto ja = jacobian(th, HarmonicTargetSet(orders));
      const auto jf = oracle::fd_jacobian(orders, th, 1e-7);
      double scale = 0.0, err = 0.0;
      for (std::size_t i = 0; i < ja.size(); ++i) {
        scale = std::max(scale, std::abs(ja[i]));
        err = std::max(err, std::abs(ja[i] - jf[i]));
      }
      jac = std::max(jac, err / scale);
    }
    const bool ok = parseval < 1e-6 && dft < 1e-6 && jac < 1e-6 && even < 1e-9;
    report(9, ok, "property suites",
           fmt("parseval=%.2e dft_vs_analytic=%.2e jacobian_fd=%.2e even=%.2e", parseval, dft, jac, even));
  });

  std::printf("INFO  10  excluded from acceptance | hardware efficiency target, switching-device behavior and "
              "oscilloscope waveforms are not modeled\n");

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
