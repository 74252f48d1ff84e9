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

#include "shewpt/transient_sim.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <json.hpp>

#include "io_util.hpp"
#include "shewpt/error.hpp"

namespace shewpt {

namespace {

// [i1, i2, vC1, vC2, E_in, E_R1, E_R2, E_load]
using Augmented = std::array<double, 8>;

struct Tank {
  double l1, l2, m, det, c1, c2, r1, r2_total, r_ac, r2;
};

Tank make_tank(const WptLinkParams& p, double r_ac) {
  if (!(p.k < 1.0)) throw SingularError("inductance matrix is singular for k >= 1");
  const double m = p.k * std::sqrt(p.L1 * p.L2);
  return {p.L1, p.L2, m, p.L1 * p.L2 - m * m, p.C1, p.C2, p.R1, p.R2 + r_ac, r_ac, p.R2};
}

Augmented rhs(const Augmented& y, double v, const Tank& t) {
  const double e1 = v - y[2] - t.r1 * y[0];
  const double e2 = -y[3] - t.r2_total * y[1];
  Augmented d;
  d[0] = (t.l2 * e1 - t.m * e2) / t.det;
  d[1] = (t.l1 * e2 - t.m * e1) / t.det;
  d[2] = y[0] / t.c1;
  d[3] = y[1] / t.c2;
  d[4] = v * y[0];
  d[5] = t.r1 * y[0] * y[0];
  d[6] = t.r2 * y[1] * y[1];
  d[7] = t.r_ac * y[1] * y[1];
  return d;
}

Augmented axpy(const Augmented& y, double a, const Augmented& d) {
  Augmented r;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] + a * d[i];
  return r;
}

void check_steps(int steps_per_cycle) {
  if (steps_per_cycle < 512 || (steps_per_cycle & (steps_per_cycle - 1)) != 0)
    throw ValidationError("steps_per_cycle", "must be a power of two >= 512");
}

}  // namespace

double stored_energy(const TankState& s, const WptLinkParams& p) {
  const double m = p.k * std::sqrt(p.L1 * p.L2);
  return 0.5 * p.L1 * s.i1 * s.i1 + 0.5 * p.L2 * s.i2 * s.i2 + m * s.i1 * s.i2 +
         0.5 * p.C1 * s.vC1 * s.vC1 + 0.5 * p.C2 * s.vC2 * s.vC2;
}

TankState derivatives(const TankState& s, double v_drive, const WptLinkParams& p, double R_ac) {
  const Tank t = make_tank(p, R_ac);
  const auto d = rhs({s.i1, s.i2, s.vC1, s.vC2, 0, 0, 0, 0}, v_drive, t);
  return {d[0], d[1], d[2], d[3]};
}

DriveSignal square_drive(double V_dc, int steps_per_cycle) {
  check_steps(steps_per_cycle);
  if (!(V_dc >= 0.0)) throw ValidationError("V_dc_V", "must be non-negative");
  DriveSignal d;
  d.per_step.resize(std::size_t(steps_per_cycle));
  for (int j = 0; j < steps_per_cycle; ++j) d.per_step[std::size_t(j)] = j < steps_per_cycle / 2 ? V_dc : -V_dc;
  return d;
}

DriveSignal stepped_drive(const SteppedWaveform& w, int steps_per_cycle) {
  check_steps(steps_per_cycle);
  const double h = kTwoPi / double(steps_per_cycle);
  std::vector<double> snapped;
  DriveSignal d;
  for (double th : w.angles().radians()) {
    const double s = std::round(th / h) * h;
    d.snapping_error_rad = std::max(d.snapping_error_rad, std::abs(s - th));
    snapped.push_back(s);
  }
  d.per_step.resize(std::size_t(steps_per_cycle));
  for (int j = 0; j < steps_per_cycle; ++j) {
    // Cell midpoints never coincide with a snapped edge.
    const double phi = h * (double(j) + 0.5);
    int level = 0;
    for (double th : snapped) {
      if (phi > th && phi < kPi - th)
        ++level;
      else if (phi > kPi + th && phi < kTwoPi - th)
        --level;
    }
    d.per_step[std::size_t(j)] = w.step_voltage() * double(level);
  }
  return d;
}

TransientTrace simulate(const WptLinkParams& params, const DriveSignal& drive, int n_cycles) {
  params.validate();
  if (params.diode_drop != 0.0)
    throw ValidationError("diode_drop_V", "the time-domain model uses a linear load; set 0");
  const int spc = int(drive.per_step.size());
  check_steps(spc);
  if (n_cycles < 1) throw ValidationError("n_cycles", "must be >= 1");

  const double r_ac = equivalent_ac_load(params.R_load_dc);
  const Tank tank = make_tank(params, r_ac);

  TransientTrace tr;
  tr.params = params;
  tr.R_ac = r_ac;
  tr.steps_per_cycle = spc;
  tr.n_cycles = n_cycles;
  tr.dt = 1.0 / (params.f_s * double(spc));
  tr.snapping_error_rad = drive.snapping_error_rad;

  const std::size_t total = std::size_t(spc) * std::size_t(n_cycles);
  tr.states.reserve(total + 1);
  tr.drive.reserve(total + 1);
  for (auto* v : {&tr.energy_in, &tr.energy_r1, &tr.energy_r2, &tr.energy_load}) v->reserve(total + 1);

  Augmented y{};
  auto record = [&](std::size_t j) {
    tr.states.push_back({y[0], y[1], y[2], y[3]});
    tr.drive.push_back(drive.per_step[j % std::size_t(spc)]);
    tr.energy_in.push_back(y[4]);
    tr.energy_r1.push_back(y[5]);
    tr.energy_r2.push_back(y[6]);
    tr.energy_load.push_back(y[7]);
  };
  record(0);

  const double h = tr.dt;
  for (std::size_t j = 0; j < total; ++j) {
    const double v = drive.per_step[j % std::size_t(spc)];
    const auto k1 = rhs(y, v, tank);
    const auto k2 = rhs(axpy(y, 0.5 * h, k1), v, tank);
    const auto k3 = rhs(axpy(y, 0.5 * h, k2), v, tank);
    const auto k4 = rhs(axpy(y, h, k3), v, tank);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (std::size_t i = 0; i < 4; ++i)
      if (!std::isfinite(y[i]) || std::abs(y[i]) > 1e9)
        throw DivergenceError("state exceeded 1e9 at step " + std::to_string(j + 1));
    record(j + 1);
  }
  return tr;
}

TransientTrace simulate_square(const WptLinkParams& params, int steps_per_cycle, int n_cycles) {
  params.validate();
  return simulate(params, square_drive(params.V_dc, steps_per_cycle), n_cycles);
}

TransientTrace simulate_stepped(const WptLinkParams& params, const SteppedWaveform& w,
                                int steps_per_cycle, int n_cycles) {
  params.validate();
  if (std::abs(w.fundamental_hz() - params.f_s) > 1e-9 * params.f_s)
    throw ValidationError("fundamental_frequency", "must match f_s_Hz");
  return simulate(params, stepped_drive(w, steps_per_cycle), n_cycles);
}

double cycle_output_energy(const TransientTrace& trace, int cycle) {
  if (cycle < 0 || cycle >= trace.n_cycles) throw ValidationError("cycle", "outside the trace");
  const std::size_t a = std::size_t(cycle) * std::size_t(trace.steps_per_cycle);
  return trace.energy_load[a + std::size_t(trace.steps_per_cycle)] - trace.energy_load[a];
}

SteadyStateMetrics steady_state_metrics(const TransientTrace& trace, int settle_cycles) {
  if (settle_cycles < 0) throw ValidationError("settle_cycles", "must be non-negative");
  if (trace.n_cycles < settle_cycles + 1)
    throw ValidationError("trace", "needs at least settle_cycles + 1 cycles, has " +
                                       std::to_string(trace.n_cycles));
  const std::size_t spc = std::size_t(trace.steps_per_cycle);
  const std::size_t end = trace.states.size() - 1;
  const std::size_t start = end - spc;
  const double period = trace.dt * double(spc);

  SteadyStateMetrics m;
  double s1 = 0.0, s2 = 0.0;
  std::complex<double> fund{};
  for (std::size_t j = start; j < end; ++j) {
    const auto& s = trace.states[j];
    s1 += s.i1 * s.i1;
    s2 += s.i2 * s.i2;
    fund += s.i1 * std::polar(1.0, -kTwoPi * double(j - start) / double(spc));
  }
  m.I1_rms = std::sqrt(s1 / double(spc));
  m.I2_rms = std::sqrt(s2 / double(spc));
  m.I1_fundamental_rms = 2.0 * std::abs(fund) / double(spc) / std::sqrt(2.0);
  m.P_out = (trace.energy_load[end] - trace.energy_load[start]) / period;
  m.P_in = (trace.energy_in[end] - trace.energy_in[start]) / period;

  // States at step boundaries are computed under the voltage of the step
  // that just ended, so states[j] is the last sample before drive[j].
  m.i1_at_rising_edge_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = start; j < end; ++j) {
    const double before = trace.drive[j == 0 ? 0 : j - 1];
    if (j > 0 && trace.drive[j] > before) {
      ++m.rising_edges;
      m.i1_at_rising_edge_max = std::max(m.i1_at_rising_edge_max, trace.states[j].i1);
    }
  }
  if (m.rising_edges == 0) m.i1_at_rising_edge_max = 0.0;
  m.zvs = m.rising_edges > 0 && m.i1_at_rising_edge_max < 0.0;
  return m;
}

std::optional<int> settle_detector(const TransientTrace& trace) {
  if (trace.n_cycles < 3) throw ValidationError("trace", "settle detection needs >= 3 cycles");
  auto qualifies = [&](int c) {
    const double a = cycle_output_energy(trace, c - 1);
    const double b = cycle_output_energy(trace, c);
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(b - a) < 1e-3 * scale;
  };
  std::optional<int> first;
  for (int c = trace.n_cycles - 1; c >= 1; --c) {
    if (!qualifies(c)) break;
    first = c;
  }
  return first;
}

void write_trace_csv(const TransientTrace& trace, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "t_s,v_drive_V,i1_A,i2_A,vC1_V,vC2_V\n";
  for (std::size_t j = 0; j < trace.states.size(); ++j) {
    const auto& s = trace.states[j];
    out << detail::fmt_double(trace.time(j)) << ',' << detail::fmt_double(trace.drive[j]) << ','
        << detail::fmt_double(s.i1) << ',' << detail::fmt_double(s.i2) << ','
        << detail::fmt_double(s.vC1) << ',' << detail::fmt_double(s.vC2) << '\n';
  }
  detail::finish_write(out, path);
}

std::string metrics_to_json(const SteadyStateMetrics& m, std::optional<int> settle_cycle) {
  nlohmann::ordered_json j;
  j["I1_rms_A"] = m.I1_rms;
  j["I2_rms_A"] = m.I2_rms;
  j["I1_fundamental_rms_A"] = m.I1_fundamental_rms;
  j["P_out_W"] = m.P_out;
  j["P_in_W"] = m.P_in;
  j["i1_at_rising_edge_max_A"] = m.i1_at_rising_edge_max;
  j["rising_edges"] = m.rising_edges;
  j["zvs"] = m.zvs;
  if (settle_cycle)
    j["settle_cycle"] = *settle_cycle;
  else
    j["settle_cycle"] = nullptr;
  return j.dump(2);
}

}  // namespace shewpt
