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

#include <optional>
#include <string>
#include <vector>

#include "shewpt/waveform.hpp"
#include "shewpt/wpt_link.hpp"

namespace shewpt {

struct TankState {
  double i1 = 0.0;
  double i2 = 0.0;
  double vC1 = 0.0;
  double vC2 = 0.0;
};

/// Energy held in the coupled inductors and both capacitors.
double stored_energy(const TankState& s, const WptLinkParams& p);

/// Mesh equations of the compensated link:
///   [L1 M; M L2] d[i1 i2]/dt = [v - vC1 - R1 i1; -vC2 - (R2 + R_ac) i2]
///   dvC1/dt = i1/C1, dvC2/dt = i2/C2
/// Throws SingularError when k >= 1.
TankState derivatives(const TankState& s, double v_drive, const WptLinkParams& p, double R_ac);

/// Bridge voltage for each integration step of one cycle; constant within a
/// step.
struct DriveSignal {
  std::vector<double> per_step;
  /// Largest |theta - theta_snapped| after moving switching angles onto the
  /// step grid, radians. Zero for the square drive.
  double snapping_error_rad = 0.0;
};

/// Full-bridge square wave, +V_dc on the first half cycle.
DriveSignal square_drive(double V_dc, int steps_per_cycle);
/// Stepped multilevel drive with each angle snapped to the nearest step
/// boundary.
DriveSignal stepped_drive(const SteppedWaveform& w, int steps_per_cycle);

struct TransientTrace {
  double dt = 0.0;
  int steps_per_cycle = 0;
  int n_cycles = 0;
  double R_ac = 0.0;
  double snapping_error_rad = 0.0;
  WptLinkParams params;
  std::vector<TankState> states;  // steps_per_cycle * n_cycles + 1
  /// drive[j] is the voltage applied on [t_j, t_j + dt); the final entry
  /// repeats the start of the next cycle.
  std::vector<double> drive;
  /// Energies integrated alongside the state, from t = 0.
  std::vector<double> energy_in;
  std::vector<double> energy_r1;
  std::vector<double> energy_r2;
  std::vector<double> energy_load;

  std::size_t size() const noexcept { return states.size(); }
  double time(std::size_t j) const noexcept { return dt * double(j); }
};

inline constexpr int kDefaultStepsPerCycle = 4096;
inline constexpr int kDefaultCycles = 60;

/// Classical RK4 from the zero state. steps_per_cycle must be a power of two
/// >= 512. The load is the linear equivalent R_ac = 8 R / pi^2.
TransientTrace simulate(const WptLinkParams& params, const DriveSignal& drive, int n_cycles);
TransientTrace simulate_square(const WptLinkParams& params, int steps_per_cycle = kDefaultStepsPerCycle,
                               int n_cycles = kDefaultCycles);
/// The waveform's fundamental must equal params.f_s.
TransientTrace simulate_stepped(const WptLinkParams& params, const SteppedWaveform& w,
                                int steps_per_cycle = kDefaultStepsPerCycle,
                                int n_cycles = kDefaultCycles);

struct SteadyStateMetrics {
  double I1_rms = 0.0;
  double I2_rms = 0.0;
  double I1_fundamental_rms = 0.0;
  double P_out = 0.0;  // mean R_ac i2^2 over the final cycle
  double P_in = 0.0;   // mean v_drive i1 over the final cycle
  /// Largest i1 seen at a rising drive edge of the final cycle.
  double i1_at_rising_edge_max = 0.0;
  int rising_edges = 0;
  bool zvs = false;
};

/// Metrics over the final cycle. Requires n_cycles >= settle_cycles + 1.
SteadyStateMetrics steady_state_metrics(const TransientTrace& trace, int settle_cycles);

/// Energy delivered to the load in cycle c (0-based).
double cycle_output_energy(const TransientTrace& trace, int cycle);

/// First cycle c >= 1 from which every cycle's output energy differs from
/// its predecessor by < 0.1%. nullopt when the run never settles.
std::optional<int> settle_detector(const TransientTrace& trace);

/// CSV `t_s,v_drive_V,i1_A,i2_A,vC1_V,vC2_V`.
void write_trace_csv(const TransientTrace& trace, const std::string& path);
std::string metrics_to_json(const SteadyStateMetrics& m, std::optional<int> settle_cycle);

}  // namespace shewpt
