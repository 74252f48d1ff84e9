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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "shewpt/shewpt.h"

namespace {

const int kOrders3[] = {3, 5, 7};
const double kPi = 3.14159265358979323846;

double rad(double deg) { return deg * kPi / 180.0; }

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(shewpt_version()) > 0);
  CHECK(std::string(shewpt_status_name(SHEWPT_OK)) == "ok");
  CHECK(std::string(shewpt_status_name(SHEWPT_E_NONCONVERGENCE)) == "non-convergence");
  CHECK(std::string(shewpt_status_name(static_cast<shewpt_status>(42))) == "unknown");
}

TEST_CASE("residual, jacobian and dimension errors") {
  const double th[] = {rad(11), rad(41), rad(85)};
  double f[3] = {};
  REQUIRE(shewpt_residual(kOrders3, 3, th, 3, f) == SHEWPT_OK);
  CHECK(f[0] == doctest::Approx(0.03521249).epsilon(1e-6));
  double j[9] = {};
  REQUIRE(shewpt_jacobian(kOrders3, 3, th, 3, j) == SHEWPT_OK);
  CHECK(j[0] == doctest::Approx(-1.63391711).epsilon(1e-7));

  CHECK(shewpt_residual(kOrders3, 3, th, 2, f) == SHEWPT_E_DIMENSION);
  CHECK(shewpt_residual(nullptr, 3, th, 3, f) == SHEWPT_E_VALIDATION);
  CHECK(std::string(shewpt_last_error_field()) == "orders");
  const double bad[] = {rad(41), rad(11), rad(85)};
  shewpt_solution* sol = nullptr;
  CHECK(shewpt_solve_newton(kOrders3, 3, bad, 3, 1e-12, 100, &sol) == SHEWPT_E_VALIDATION);
  CHECK(std::string(shewpt_last_error_field()) == "angles");
  CHECK(std::strlen(shewpt_last_error()) > 0);
}

TEST_CASE("solution handles") {
  const double th[] = {rad(11), rad(41), rad(85)};
  shewpt_solution* sol = nullptr;
  REQUIRE(shewpt_solve_newton(kOrders3, 3, th, 3, 1e-12, 100, &sol) == SHEWPT_OK);
  REQUIRE(sol != nullptr);
  CHECK(shewpt_solution_levels(sol) == 3);
  CHECK(shewpt_solution_converged(sol) == 1);
  CHECK(shewpt_solution_residual_norm(sol) < 1e-12);
  double deg[3] = {};
  REQUIRE(shewpt_solution_angles_deg(sol, deg, 3) == SHEWPT_OK);
  CHECK(deg[0] == doctest::Approx(11.99197854).epsilon(1e-8));
  CHECK(deg[2] == doctest::Approx(85.67477071).epsilon(1e-8));
  double small[2];
  CHECK(shewpt_solution_angles(sol, small, 2) == SHEWPT_E_VALIDATION);

  const auto csv = temp_path("shewpt_c_api_solution.csv");
  REQUIRE(shewpt_solution_write_csv(sol, csv.c_str()) == SHEWPT_OK);
  CHECK(first_line(csv) == "theta_index,theta_deg");
  std::filesystem::remove(csv);
  CHECK(shewpt_solution_write_csv(sol, "/nonexistent/dir/x.csv") == SHEWPT_E_IO);
  shewpt_solution_free(sol);

  // non-convergence still hands back the best iterate
  shewpt_solution* partial = nullptr;
  CHECK(shewpt_solve_newton(kOrders3, 3, th, 3, 1e-12, 1, &partial) == SHEWPT_E_NONCONVERGENCE);
  REQUIRE(partial != nullptr);
  CHECK(shewpt_solution_converged(partial) == 0);
  shewpt_solution_free(partial);

  const int single[] = {3};
  const double sixty[] = {rad(60)};
  shewpt_solution* none = reinterpret_cast<shewpt_solution*>(0x1);
  CHECK(shewpt_solve_newton(single, 1, sixty, 1, 1e-12, 100, &none) == SHEWPT_E_SINGULAR);
  CHECK(none == nullptr);
  CHECK(shewpt_solve_newton(kOrders3, 3, th, 3, 1e-12, 100, nullptr) == SHEWPT_E_VALIDATION);

  shewpt_solution_list* list = nullptr;
  REQUIRE(shewpt_solve_multistart(kOrders3, 3, 5.0, 1e-12, 100, &list) == SHEWPT_OK);
  CHECK(shewpt_solution_list_size(list) >= 1);
  CHECK(shewpt_solution_list_get(list, 0) != nullptr);
  CHECK(shewpt_solution_list_get(list, 100000) == nullptr);
  shewpt_solution_list_free(list);

  double g[3] = {};
  REQUIRE(shewpt_grid_oracle(kOrders3, 3, 0.5, nullptr, 0.0, g) == SHEWPT_OK);
  CHECK(std::abs(g[1] - 41.92788349) <= 0.5);
  const int many[] = {3, 5, 7, 9, 11, 13};
  double g6[6];
  CHECK(shewpt_grid_oracle(many, 6, 0.05, nullptr, 0.0, g6) == SHEWPT_E_COST);

  // NULL handles are tolerated by getters and destructors
  CHECK(shewpt_solution_levels(nullptr) == 0);
  CHECK(shewpt_solution_list_size(nullptr) == 0);
  shewpt_solution_free(nullptr);
  shewpt_solution_list_free(nullptr);
}

TEST_CASE("waveform and spectrum handles") {
  const double th[] = {rad(11.99197854), rad(41.92788349), rad(85.67477071)};
  shewpt_waveform* w = nullptr;
  REQUIRE(shewpt_waveform_create(th, 3, 500.0, 85e3, &w) == SHEWPT_OK);
  CHECK(shewpt_waveform_levels(w) == 3);
  CHECK(shewpt_waveform_peak(w) == 1500.0);
  CHECK(shewpt_waveform_sample(w, 0.25 / 85e3) == 1500.0);
  CHECK(shewpt_waveform_fundamental_rms(w) == doctest::Approx(809.1957).epsilon(1e-6));
  double b2 = 1.0;
  REQUIRE(shewpt_waveform_harmonic(w, 2, &b2) == SHEWPT_OK);
  CHECK(b2 == 0.0);
  CHECK(shewpt_waveform_harmonic(w, 0, &b2) == SHEWPT_E_VALIDATION);
  std::vector<double> s(64);
  CHECK(shewpt_waveform_sample_period(w, s.size(), 1, s.data()) == SHEWPT_OK);

  shewpt_spectrum* sp = nullptr;
  REQUIRE(shewpt_spectrum_from_waveform(w, 8192, 21, &sp) == SHEWPT_OK);
  CHECK(shewpt_spectrum_n_max(sp) == 21);
  CHECK(shewpt_spectrum_fundamental_hz(sp) == 85e3);
  double t = 0.0;
  REQUIRE(shewpt_spectrum_thd(sp, 21, &t) == SHEWPT_OK);
  CHECK(t == doctest::Approx(0.1514).epsilon(1e-3));
  double a = 0.0;
  CHECK(shewpt_spectrum_amplitude(sp, 22, &a) == SHEWPT_E_VALIDATION);
  const auto csv = temp_path("shewpt_c_api_spectrum.csv");
  REQUIRE(shewpt_spectrum_write_csv(sp, csv.c_str()) == SHEWPT_OK);
  CHECK(first_line(csv) == "n,f_Hz,amp_V,rel_to_fund");
  std::filesystem::remove(csv);
  shewpt_spectrum_free(sp);

  shewpt_spectrum* bad = nullptr;
  CHECK(shewpt_spectrum_from_waveform(w, 1000, 21, &bad) == SHEWPT_E_VALIDATION);
  CHECK(bad == nullptr);

  double closed = 0.0;
  REQUIRE(shewpt_thd_closed_form(w, &closed) == SHEWPT_OK);
  CHECK(closed == doctest::Approx(0.18564).epsilon(1e-4));
  shewpt_thd_report r{};
  REQUIRE(shewpt_thd_report_compute(w, kOrders3, 3, 8192, &r) == SHEWPT_OK);
  CHECK(r.eliminated_orders_max_relative < 1e-6);
  CHECK(r.band_total == 4095);

  const auto wcsv = temp_path("shewpt_c_api_wave.csv");
  REQUIRE(shewpt_waveform_write_csv(w, 128, wcsv.c_str()) == SHEWPT_OK);
  CHECK(first_line(wcsv) == "t_s,v_V");
  std::filesystem::remove(wcsv);
  shewpt_waveform_free(w);

  shewpt_waveform* none = nullptr;
  CHECK(shewpt_waveform_create(th, 3, -1.0, 85e3, &none) == SHEWPT_E_VALIDATION);
  CHECK(std::string(shewpt_last_error_field()) == "step_voltage");
  shewpt_waveform_free(nullptr);
  shewpt_spectrum_free(nullptr);
}

TEST_CASE("link model") {
  shewpt_link_params p{};
  shewpt_link_params_reference(100.0, &p);
  CHECK(shewpt_link_params_validate(&p) == SHEWPT_OK);
  shewpt_fha_result r{};
  REQUIRE(shewpt_fha_solve(&p, &r) == SHEWPT_OK);
  CHECK(r.P_out == doctest::Approx(201.9835).epsilon(1e-6));
  CHECK(r.zvs_favorable == 0);
  double ratio = 0.0;
  REQUIRE(shewpt_power_scaling(&p, 100.0, 150.0, &ratio) == SHEWPT_OK);
  CHECK(ratio == doctest::Approx(2.25).epsilon(1e-12));
  double m = 0.0;
  CHECK(shewpt_mutual_inductance(1.5, 1e-3, 1e-3, &m) == SHEWPT_E_VALIDATION);

  const auto json = temp_path("shewpt_c_api_fha.json");
  REQUIRE(shewpt_fha_write_json(&r, json.c_str()) == SHEWPT_OK);
  std::filesystem::remove(json);

  p.C1_F = 0.0;
  CHECK(shewpt_fha_solve(&p, &r) == SHEWPT_E_VALIDATION);
  CHECK(std::string(shewpt_last_error_field()) == "C1_F");

  const auto cfg = temp_path("shewpt_c_api_cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"L1_H": 245e-6, "C1_F": 14e-9, "k": 0.309, "R_load_ohm": 50, "V_dc_V": 150, "f_s_Hz": 85000})";
  }
  shewpt_link_params q{};
  REQUIRE(shewpt_link_params_load(cfg.c_str(), &q) == SHEWPT_OK);
  CHECK(q.V_dc_V == 150.0);
  CHECK(q.L2_H == q.L1_H);
  std::filesystem::remove(cfg);
  CHECK(shewpt_link_params_load("/nonexistent.json", &q) == SHEWPT_E_IO);
}

TEST_CASE("trace handles") {
  shewpt_link_params p{};
  shewpt_link_params_reference(100.0, &p);
  shewpt_trace* tr = nullptr;
  REQUIRE(shewpt_simulate_square(&p, 1024, 30, &tr) == SHEWPT_OK);
  CHECK(shewpt_trace_size(tr) == 1024 * 30 + 1);
  CHECK(shewpt_trace_cycles(tr) == 30);
  CHECK(shewpt_trace_dt(tr) == doctest::Approx(1.0 / (85e3 * 1024)));
  shewpt_tank_state st{};
  double v = 0.0;
  REQUIRE(shewpt_trace_state(tr, 0, &st, &v) == SHEWPT_OK);
  CHECK(st.i1 == 0.0);
  CHECK(v == 100.0);
  CHECK(shewpt_trace_state(tr, 1024 * 30 + 1, &st, &v) == SHEWPT_E_VALIDATION);
  shewpt_metrics m{};
  REQUIRE(shewpt_steady_state_metrics(tr, 25, &m) == SHEWPT_OK);
  CHECK(m.P_out == doctest::Approx(202.0).epsilon(0.01));
  int settle = -2;
  REQUIRE(shewpt_settle_cycle(tr, &settle) == SHEWPT_OK);
  CHECK(settle > 0);
  const auto csv = temp_path("shewpt_c_api_trace.csv");
  REQUIRE(shewpt_trace_write_csv(tr, csv.c_str()) == SHEWPT_OK);
  CHECK(first_line(csv) == "t_s,v_drive_V,i1_A,i2_A,vC1_V,vC2_V");
  std::filesystem::remove(csv);
  shewpt_trace_free(tr);

  const double th[] = {rad(12), rad(42), rad(86)};
  shewpt_waveform* w = nullptr;
  REQUIRE(shewpt_waveform_create(th, 3, 100.0 / 3.0, 85e3, &w) == SHEWPT_OK);
  shewpt_trace* st2 = nullptr;
  REQUIRE(shewpt_simulate_stepped(&p, w, 1024, 5, &st2) == SHEWPT_OK);
  CHECK(shewpt_trace_snapping_error(st2) <= kPi / 1024);
  shewpt_trace_free(st2);
  shewpt_waveform_free(w);

  shewpt_trace* none = nullptr;
  CHECK(shewpt_simulate_square(&p, 1000, 5, &none) == SHEWPT_E_VALIDATION);
  CHECK(none == nullptr);
  p.diode_drop_V = 0.7;
  CHECK(shewpt_simulate_square(&p, 1024, 5, &none) == SHEWPT_E_VALIDATION);
  CHECK(std::string(shewpt_last_error_field()) == "diode_drop_V");
  shewpt_trace_free(nullptr);
}
