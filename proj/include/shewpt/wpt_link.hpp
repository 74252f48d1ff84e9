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

#include <complex>
#include <string>

namespace shewpt {

/// Series-series compensated two-coil link driven by a full-bridge.
/// SI units throughout.
struct WptLinkParams {
  double L1 = 245e-6;
  double L2 = 245e-6;
  double C1 = 14e-9;
  double C2 = 14e-9;
  double k = 0.309;
  double R1 = 0.0;  // coil ESR
  double R2 = 0.0;
  double R_load_dc = 50.0;
  double V_dc = 100.0;
  double f_s = 85e3;
  double diode_drop = 0.0;  // per conducting diode pair, FHA only

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// The prototype link: 245 uH coils, 14 nF capacitors, k = 0.309, 50 ohm
/// load, 85 kHz switching.
WptLinkParams reference_link_params(double v_dc = 100.0);

/// Reads a JSON config with keys L1_H, L2_H, C1_F, C2_F, k, R_load_ohm,
/// V_dc_V, f_s_Hz and optional R1_ohm, R2_ohm, diode_drop_V. Missing
/// L2_H/C2_F default to L1_H/C1_F.
WptLinkParams load_link_params(const std::string& path);
WptLinkParams parse_link_params(const std::string& json_text);

struct FhaSolution {
  std::complex<double> I1;  // RMS phasors
  std::complex<double> I2;
  std::complex<double> V1;
  std::complex<double> Z_in;
  double P_out = 0.0;
  double P_in = 0.0;
  double R_ac = 0.0;  // effective AC load seen by the secondary mesh
  double V_out_dc = 0.0;
  bool zvs_favorable = false;  // inductive input impedance
};

double mutual_inductance(double k, double L1, double L2);
double resonant_frequency(double L, double C);
double equivalent_ac_load(double R_load_dc);
double drive_fundamental_rms(double V_dc);

FhaSolution fha_solve(const WptLinkParams& params);

/// P_out(V_dc_b) / P_out(V_dc_a) with every other parameter unchanged.
double power_scaling_check(const WptLinkParams& params, double V_dc_a, double V_dc_b);

void write_fha_json(const FhaSolution& sol, const std::string& path);
std::string fha_to_json(const FhaSolution& sol);

}  // namespace shewpt
