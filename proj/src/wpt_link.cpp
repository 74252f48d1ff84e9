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

#include "shewpt/wpt_link.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "io_util.hpp"
#include "shewpt/error.hpp"
#include "shewpt/waveform.hpp"

namespace shewpt {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive and finite");
}

void require_non_negative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ValidationError(field, "must be non-negative and finite");
}

struct Mesh {
  std::complex<double> z11, z22, zm;
};

Mesh build_mesh(const WptLinkParams& p, double r_ac) {
  const double w = kTwoPi * p.f_s;
  const double m = mutual_inductance(p.k, p.L1, p.L2);
  return {{p.R1, w * p.L1 - 1.0 / (w * p.C1)},
          {p.R2 + r_ac, w * p.L2 - 1.0 / (w * p.C2)},
          {0.0, w * m}};
}

FhaSolution solve_mesh(const WptLinkParams& p, double r_ac) {
  const Mesh mesh = build_mesh(p, r_ac);
  const auto det = mesh.z11 * mesh.z22 - mesh.zm * mesh.zm;
  const double scale = std::abs(mesh.z11) * std::abs(mesh.z22) + std::norm(mesh.zm);
  if (!(std::abs(det) > 1e-12 * scale)) throw SingularError("mesh impedance matrix is singular");

  FhaSolution s;
  s.V1 = drive_fundamental_rms(p.V_dc);
  s.I1 = s.V1 * mesh.z22 / det;
  s.I2 = -s.V1 * mesh.zm / det;
  s.Z_in = mesh.z11 - mesh.zm * mesh.zm / mesh.z22;
  s.R_ac = r_ac;
  s.P_in = std::real(s.V1 * std::conj(s.I1));
  s.P_out = std::norm(s.I2) * r_ac;
  s.zvs_favorable = std::arg(s.Z_in) > 0.0;
  return s;
}

}  // namespace

void WptLinkParams::validate() const {
  require_positive(L1, "L1_H");
  require_positive(L2, "L2_H");
  require_positive(C1, "C1_F");
  require_positive(C2, "C2_F");
  if (!(k >= 0.0 && k < 1.0)) throw ValidationError("k", "coupling must be in [0, 1)");
  require_non_negative(R1, "R1_ohm");
  require_non_negative(R2, "R2_ohm");
  require_positive(R_load_dc, "R_load_ohm");
  require_non_negative(V_dc, "V_dc_V");
  require_positive(f_s, "f_s_Hz");
  require_non_negative(diode_drop, "diode_drop_V");
}

WptLinkParams reference_link_params(double v_dc) {
  WptLinkParams p;
  p.V_dc = v_dc;
  return p;
}

WptLinkParams parse_link_params(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config", "top level must be an object");

  auto get = [&](const char* key, bool required, double fallback) {
    if (!j.contains(key)) {
      if (required) throw ValidationError(key, "missing required key");
      return fallback;
    }
    if (!j[key].is_number()) throw ValidationError(key, "must be a number");
    return j[key].get<double>();
  };

  WptLinkParams p;
  p.L1 = get("L1_H", true, 0.0);
  p.L2 = get("L2_H", false, p.L1);
  p.C1 = get("C1_F", true, 0.0);
  p.C2 = get("C2_F", false, p.C1);
  p.k = get("k", true, 0.0);
  p.R_load_dc = get("R_load_ohm", true, 0.0);
  p.V_dc = get("V_dc_V", true, 0.0);
  p.f_s = get("f_s_Hz", true, 0.0);
  p.R1 = get("R1_ohm", false, 0.0);
  p.R2 = get("R2_ohm", false, 0.0);
  p.diode_drop = get("diode_drop_V", false, 0.0);
  p.validate();
  return p;
}

WptLinkParams load_link_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_link_params(ss.str());
}

double mutual_inductance(double k, double L1, double L2) {
  if (!(k >= 0.0 && k <= 1.0)) throw ValidationError("k", "coupling must be in [0, 1]");
  require_positive(L1, "L1_H");
  require_positive(L2, "L2_H");
  return k * std::sqrt(L1 * L2);
}

double resonant_frequency(double L, double C) {
  require_positive(L, "L_H");
  require_positive(C, "C_F");
  return 1.0 / (kTwoPi * std::sqrt(L * C));
}

double equivalent_ac_load(double R_load_dc) {
  require_positive(R_load_dc, "R_load_ohm");
  return 8.0 * R_load_dc / (kPi * kPi);
}

double drive_fundamental_rms(double V_dc) {
  require_non_negative(V_dc, "V_dc_V");
  return 4.0 * V_dc / (kPi * std::sqrt(2.0));
}

FhaSolution fha_solve(const WptLinkParams& params) {
  params.validate();
  const double r_ac = equivalent_ac_load(params.R_load_dc);
  FhaSolution s = solve_mesh(params, r_ac);
  // Rectified mean of a sinusoidal current: I_dc = (2 sqrt2 / pi) I_rms.
  auto dc_current = [](const FhaSolution& x) { return std::abs(x.I2) * 2.0 * std::sqrt(2.0) / kPi; };
  s.V_out_dc = dc_current(s) * params.R_load_dc;
  if (params.diode_drop == 0.0) return s;

  // A diode drop raises the apparent load to R_ac * (1 + 2 V_d / V_o).
  double v_out = s.V_out_dc;
  for (int it = 0; it < 500 && v_out > 0.0; ++it) {
    s = solve_mesh(params, r_ac * (1.0 + 2.0 * params.diode_drop / v_out));
    const double next = dc_current(s) * params.R_load_dc;
    const bool done = std::abs(next - v_out) <= 1e-13 * std::max(1.0, v_out);
    v_out = next;
    if (done) break;
  }
  s.V_out_dc = v_out;
  s.P_out = v_out > 0.0 ? v_out * v_out / params.R_load_dc : 0.0;
  return s;
}

double power_scaling_check(const WptLinkParams& params, double V_dc_a, double V_dc_b) {
  WptLinkParams a = params, b = params;
  a.V_dc = V_dc_a;
  b.V_dc = V_dc_b;
  const double pa = fha_solve(a).P_out;
  if (!(pa > 0.0)) throw ValidationError("V_dc_a", "reference operating point delivers no power");
  return fha_solve(b).P_out / pa;
}

std::string fha_to_json(const FhaSolution& s) {
  nlohmann::ordered_json j;
  j["V1_rms_V"] = std::abs(s.V1);
  j["I1_rms_A"] = std::abs(s.I1);
  j["I1_re_A"] = s.I1.real();
  j["I1_im_A"] = s.I1.imag();
  j["I2_rms_A"] = std::abs(s.I2);
  j["I2_re_A"] = s.I2.real();
  j["I2_im_A"] = s.I2.imag();
  j["Z_in_re_ohm"] = s.Z_in.real();
  j["Z_in_im_ohm"] = s.Z_in.imag();
  j["Z_in_phase_deg"] = rad_to_deg(std::arg(s.Z_in));
  j["R_ac_ohm"] = s.R_ac;
  j["V_out_dc_V"] = s.V_out_dc;
  j["P_in_W"] = s.P_in;
  j["P_out_W"] = s.P_out;
  j["zvs_favorable"] = s.zvs_favorable;
  return j.dump(2);
}

void write_fha_json(const FhaSolution& sol, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << fha_to_json(sol) << '\n';
  detail::finish_write(out, path);
}

}  // namespace shewpt
