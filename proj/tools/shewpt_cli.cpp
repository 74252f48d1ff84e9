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

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shewpt/shewpt.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit : int { kOk = 0, kInternal = 1, kValidation = 2, kNonConvergence = 3, kComparison = 4 };

/// Carries the process exit code out of a failed library call.
struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_of(shewpt_status s) {
  switch (s) {
    case SHEWPT_OK: return kOk;
    case SHEWPT_E_VALIDATION:
    case SHEWPT_E_DIMENSION:
    case SHEWPT_E_COST: return kValidation;
    case SHEWPT_E_SINGULAR:
    case SHEWPT_E_DIVERGENCE:
    case SHEWPT_E_NONCONVERGENCE: return kNonConvergence;
    default: return kInternal;
  }
}

void check(shewpt_status s) {
  if (s == SHEWPT_OK) return;
  throw CliError{exit_code_of(s), std::string(shewpt_status_name(s)) + ": " + shewpt_last_error()};
}

template <auto Free>
struct Deleter {
  template <class T>
  void operator()(T* p) const noexcept {
    Free(p);
  }
};
using Solution = std::unique_ptr<shewpt_solution, Deleter<shewpt_solution_free>>;
using SolutionList = std::unique_ptr<shewpt_solution_list, Deleter<shewpt_solution_list_free>>;
using Waveform = std::unique_ptr<shewpt_waveform, Deleter<shewpt_waveform_free>>;
using Spectrum = std::unique_ptr<shewpt_spectrum, Deleter<shewpt_spectrum_free>>;
using Trace = std::unique_ptr<shewpt_trace, Deleter<shewpt_trace_free>>;

double rad(double deg) { return deg * kPi / 180.0; }

std::vector<double> to_rad(const std::vector<double>& deg) {
  std::vector<double> r;
  r.reserve(deg.size());
  for (double d : deg) r.push_back(rad(d));
  return r;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---- output files -----------------------------------------------------------

class OutDir {
 public:
  explicit OutDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw CliError{kInternal, "cannot create output directory " + root_.string()};
  }
  std::string path(const std::string& name) const { return (root_ / name).string(); }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream out(path(name), std::ios::binary);
    out << text;
    if (!out) throw CliError{kInternal, "cannot write " + path(name)};
  }
  void write_json(const std::string& name, const Json& j) const { write_text(name, j.dump(2) + "\n"); }

  /// Timestamps and invocation details live only here, never in data files.
  void write_meta(const std::string& report_name, const std::vector<std::string>& argv) const {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    Json m;
    m["report"] = report_name;
    m["generated_utc"] = stamp;
    m["library_version"] = shewpt_version();
    m["argv"] = argv;
    write_json(report_name + ".meta.json", m);
  }

 private:
  fs::path root_;
};

// ---- SVG --------------------------------------------------------------------

std::string svg_waveform(const std::vector<double>& v, double period, double peak) {
  const double w = 800, h = 300, pad = 30;
  const double ymax = peak > 0 ? peak : 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<line x1=\"" << pad << "\" y1=\"" << h / 2 << "\" x2=\"" << w - pad << "\" y2=\"" << h / 2
    << "\" stroke=\"#999\"/>\n"
    << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  const std::size_t n = v.size();
  for (std::size_t j = 0; j <= n; ++j) {
    const double x = pad + (w - 2 * pad) * double(j) / double(n);
    const double y = h / 2 - (h / 2 - pad) * v[j % n] / ymax;
    s << fmt(x, "%.2f") << ',' << fmt(y, "%.2f") << (j < n ? " " : "");
  }
  s << "\"/>\n"
    << "<text x=\"" << pad << "\" y=\"18\" font-size=\"12\">v(t) over one period, T = "
    << fmt(period) << " s, peak " << fmt(peak) << " V</text>\n</svg>\n";
  return s.str();
}

std::string svg_spectrum(const std::vector<double>& rel) {
  const double w = 800, h = 300, pad = 30;
  const double bw = (w - 2 * pad) / double(rel.size());
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const double bh = (h - 2 * pad) * std::min(1.0, rel[i]);
    s << "<rect x=\"" << fmt(pad + bw * double(i) + 0.1 * bw, "%.2f") << "\" y=\""
      << fmt(h - pad - bh, "%.2f") << "\" width=\"" << fmt(0.8 * bw, "%.2f") << "\" height=\""
      << fmt(bh, "%.2f") << "\" fill=\"#d62728\"><title>n=" << i + 1 << " rel=" << fmt(rel[i])
      << "</title></rect>\n";
  }
  s << "<text x=\"" << pad << "\" y=\"18\" font-size=\"12\">harmonic amplitude relative to fundamental, n = 1.."
    << rel.size() << "</text>\n</svg>\n";
  return s.str();
}

// ---- comparison rows --------------------------------------------------------

struct Row {
  std::string name;
  std::string source;  // "reported" or "derived"
  double reference;
  double computed;
  double tolerance;
  bool relative;  // tolerance as a fraction of |reference|
  std::string unit;

  bool pass() const {
    const double allowed = relative ? tolerance * std::abs(reference) : tolerance;
    return std::isfinite(computed) && std::abs(computed - reference) <= allowed;
  }
  Json json() const {
    Json j;
    j["name"] = name;
    j["source"] = source;
    j["reference"] = reference;
    j["computed"] = computed;
    j["tolerance"] = tolerance;
    j["tolerance_kind"] = relative ? "relative" : "absolute";
    j["unit"] = unit;
    j["pass"] = pass();
    return j;
  }
};

/// Upper-bound rows: pass when computed <= reference.
Row bound_row(std::string name, double bound, double computed, std::string unit) {
  return Row{std::move(name), "derived", 0.0, computed, bound, false, std::move(unit)};
}

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-40s %-8s %14s %14s %12s  %s\n", "name", "source", "reference", "computed",
              "tolerance", "result");
  for (const auto& r : rows) {
    const std::string tol = r.relative ? fmt(100 * r.tolerance, "%.3g") + "%" : fmt(r.tolerance, "%.3g");
    std::printf("%-40s %-8s %14s %14s %12s  %s\n", r.name.c_str(), r.source.c_str(),
                fmt(r.reference, "%.6g").c_str(), fmt(r.computed, "%.6g").c_str(), tol.c_str(),
                r.pass() ? "PASS" : "FAIL");
  }
}

Json rows_json(const std::vector<Row>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(r.json());
  return a;
}

bool all_pass(const std::vector<Row>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass(); });
}

// ---- library helpers --------------------------------------------------------

Solution newton(const std::vector<int>& orders, const std::vector<double>& init_deg, double tol,
                int max_iter) {
  const auto th = to_rad(init_deg);
  shewpt_solution* raw = nullptr;
  const auto st = shewpt_solve_newton(orders.data(), orders.size(), th.data(), th.size(), tol, max_iter, &raw);
  Solution sol(raw);
  check(st);
  return sol;
}

std::vector<double> solution_deg(const shewpt_solution* s) {
  std::vector<double> d(shewpt_solution_levels(s));
  check(shewpt_solution_angles_deg(s, d.data(), d.size()));
  return d;
}

Waveform make_waveform(const std::vector<double>& deg, double step, double f1) {
  const auto th = to_rad(deg);
  shewpt_waveform* raw = nullptr;
  check(shewpt_waveform_create(th.data(), th.size(), step, f1, &raw));
  return Waveform(raw);
}

Spectrum make_spectrum(const shewpt_waveform* w, std::size_t samples, int n_max) {
  shewpt_spectrum* raw = nullptr;
  check(shewpt_spectrum_from_waveform(w, samples, n_max, &raw));
  return Spectrum(raw);
}

std::vector<double> relative_amplitudes(const shewpt_spectrum* s) {
  const int n_max = shewpt_spectrum_n_max(s);
  std::vector<double> rel(std::size_t(n_max), 0.0);
  double a1 = 0.0;
  check(shewpt_spectrum_amplitude(s, 1, &a1));
  for (int n = 1; n <= n_max; ++n) {
    double a = 0.0;
    check(shewpt_spectrum_amplitude(s, n, &a));
    rel[std::size_t(n - 1)] = a1 > 0 ? a / a1 : 0.0;
  }
  return rel;
}

Json thd_report_json(const shewpt_thd_report& r) {
  Json j;
  j["thd_total"] = r.thd_total;
  j["thd_total_dft"] = r.thd_total_dft;
  j["band_total"] = r.band_total;
  j["thd_21"] = r.thd_21;
  j["eliminated_orders_max_relative"] = r.eliminated_orders_max_relative;
  return j;
}

void write_waveform_files(const OutDir& out, const std::string& stem, const shewpt_waveform* w,
                          double f1, std::size_t samples) {
  check(shewpt_waveform_write_csv(w, samples, out.path(stem + ".csv").c_str()));
  std::vector<double> v(1024);
  check(shewpt_waveform_sample_period(w, v.size(), 0, v.data()));
  out.write_text(stem + ".svg", svg_waveform(v, 1.0 / f1, shewpt_waveform_peak(w)));
}

void write_spectrum_files(const OutDir& out, const std::string& stem, const shewpt_spectrum* s) {
  check(shewpt_spectrum_write_csv(s, out.path(stem + ".csv").c_str()));
  out.write_text(stem + ".svg", svg_spectrum(relative_amplitudes(s)));
}

Json fha_json(const shewpt_fha_result& r) {
  Json j;
  j["V1_rms_V"] = r.V1_rms;
  j["I1_rms_A"] = std::hypot(r.I1_re, r.I1_im);
  j["I2_rms_A"] = std::hypot(r.I2_re, r.I2_im);
  j["Z_in_re_ohm"] = r.Z_in_re;
  j["Z_in_im_ohm"] = r.Z_in_im;
  j["input_phase_deg"] = std::atan2(r.Z_in_im, r.Z_in_re) * 180.0 / kPi;
  j["R_ac_ohm"] = r.R_ac;
  j["V_out_dc_V"] = r.V_out_dc;
  j["P_in_W"] = r.P_in;
  j["P_out_W"] = r.P_out;
  j["zvs_favorable"] = r.zvs_favorable != 0;
  return j;
}

Json metrics_json(const shewpt_metrics& m, int settle) {
  Json j;
  j["I1_rms_A"] = m.I1_rms;
  j["I2_rms_A"] = m.I2_rms;
  j["I1_fundamental_rms_A"] = m.I1_fundamental_rms;
  j["P_in_W"] = m.P_in;
  j["P_out_W"] = m.P_out;
  j["i1_at_rising_edge_max_A"] = m.i1_at_rising_edge_max;
  j["rising_edges"] = m.rising_edges;
  j["zvs"] = m.zvs != 0;
  if (settle >= 0)
    j["settle_cycle"] = settle;
  else
    j["settle_cycle"] = nullptr;
  return j;
}

Json params_json(const shewpt_link_params& p) {
  Json j;
  j["L1_H"] = p.L1_H;
  j["L2_H"] = p.L2_H;
  j["C1_F"] = p.C1_F;
  j["C2_F"] = p.C2_F;
  j["k"] = p.k;
  j["R1_ohm"] = p.R1_ohm;
  j["R2_ohm"] = p.R2_ohm;
  j["R_load_ohm"] = p.R_load_ohm;
  j["V_dc_V"] = p.V_dc_V;
  j["f_s_Hz"] = p.f_s_Hz;
  j["diode_drop_V"] = p.diode_drop_V;
  return j;
}

struct TransientResult {
  shewpt_metrics metrics{};
  int settle = -1;
  Trace trace;
};

TransientResult run_transient(const shewpt_link_params& p, int steps, int cycles, int settle_cycles) {
  shewpt_trace* raw = nullptr;
  check(shewpt_simulate_square(&p, steps, cycles, &raw));
  TransientResult r;
  r.trace.reset(raw);
  check(shewpt_steady_state_metrics(raw, settle_cycles, &r.metrics));
  check(shewpt_settle_cycle(raw, &r.settle));
  return r;
}

/// CSV of the final `cycles` cycles of a trace.
void write_trace_tail(const OutDir& out, const std::string& name, const shewpt_trace* t, int cycles) {
  const std::size_t size = shewpt_trace_size(t);
  const std::size_t per = (size - 1) / std::size_t(shewpt_trace_cycles(t));
  const std::size_t first = size - 1 - per * std::size_t(std::min(cycles, shewpt_trace_cycles(t)));
  const double dt = shewpt_trace_dt(t);
  std::ostringstream s;
  s << "t_s,v_drive_V,i1_A,i2_A,vC1_V,vC2_V\n";
  for (std::size_t j = first; j < size; ++j) {
    shewpt_tank_state st{};
    double v = 0.0;
    check(shewpt_trace_state(t, j, &st, &v));
    s << fmt(dt * double(j), "%.17g") << ',' << fmt(v, "%.17g") << ',' << fmt(st.i1, "%.17g") << ','
      << fmt(st.i2, "%.17g") << ',' << fmt(st.vC1, "%.17g") << ',' << fmt(st.vC2, "%.17g") << '\n';
  }
  out.write_text(name, s.str());
}

// ---- reproduce cases --------------------------------------------------------

struct CaseResult {
  std::vector<Row> rows;
  Json outputs = Json::object();
};

struct MultilevelCase {
  const char* name;
  std::vector<int> orders;
  std::vector<double> nominal_deg;
  double step;
  double fund_rms;
  double fund_tol;
  double thd_total;
  double thd_total_tol;
  double thd_21;
  double thd_21_tol;
  double oracle_step;
  bool oracle_window;
};

CaseResult run_multilevel(const MultilevelCase& c, const OutDir& out) {
  CaseResult r;
  const auto sol = newton(c.orders, c.nominal_deg, 1e-12, 100);
  const auto deg = solution_deg(sol.get());
  const auto w = make_waveform(deg, c.step, 85e3);
  shewpt_thd_report thd{};
  check(shewpt_thd_report_compute(w.get(), c.orders.data(), c.orders.size(), 8192, &thd));

  std::vector<double> oracle(deg.size());
  check(shewpt_grid_oracle(c.orders.data(), c.orders.size(), c.oracle_step,
                           c.oracle_window ? c.nominal_deg.data() : nullptr, 5.0, oracle.data()));
  double gap = 0.0;
  for (std::size_t i = 0; i < deg.size(); ++i) gap = std::max(gap, std::abs(oracle[i] - deg[i]));

  const std::string n = c.name;
  r.rows.push_back(bound_row(n + " residual inf-norm", 1e-12, shewpt_solution_residual_norm(sol.get()), "1"));
  r.rows.push_back(bound_row(n + " grid oracle max angle gap", c.oracle_step, gap, "deg"));
  r.rows.push_back({n + " theta_1", "reported", c.nominal_deg[0], deg[0], 1.0, false, "deg"});
  r.rows.push_back({n + " fundamental RMS", "reported", c.fund_rms, shewpt_waveform_fundamental_rms(w.get()),
                    c.fund_tol, false, "V"});
  r.rows.push_back({n + " THD total (closed form)", "reported", c.thd_total, 100 * thd.thd_total,
                    c.thd_total_tol, false, "%"});
  r.rows.push_back({n + " THD first 21 harmonics", "reported", c.thd_21, 100 * thd.thd_21, c.thd_21_tol, false, "%"});
  r.rows.push_back(bound_row(n + " eliminated orders max rel amp", 1e-6, thd.eliminated_orders_max_relative, "1"));

  const auto spec = make_spectrum(w.get(), 8192, 99);
  write_waveform_files(out, n + "_waveform", w.get(), 85e3, 4096);
  write_spectrum_files(out, n + "_spectrum", spec.get());
  r.outputs["angles_deg"] = deg;
  r.outputs["thd_report"] = thd_report_json(thd);
  r.outputs["files"] = {n + "_waveform.csv", n + "_waveform.svg", n + "_spectrum.csv", n + "_spectrum.svg"};
  return r;
}

CaseResult run_wpt(const char* name, double v_dc, double reported_pout, const OutDir& out) {
  CaseResult r;
  shewpt_link_params p{};
  shewpt_link_params_reference(v_dc, &p);
  shewpt_fha_result fha{};
  check(shewpt_fha_solve(&p, &fha));
  const auto tr = run_transient(p, 4096, 60, 50);
  const std::string n = name;
  r.rows.push_back({n + " FHA P_out", "reported", reported_pout, fha.P_out, 0.15, true, "W"});
  r.rows.push_back({n + " transient vs FHA P_out", "derived", fha.P_out, tr.metrics.P_out, 0.05, true, "W"});
  r.rows.push_back({n + " transient settle cycle <= 59", "derived", 0.0,
                    tr.settle >= 0 ? double(tr.settle) : NAN, 59.0, false, "cycle"});
  if (v_dc == 150.0) {
    double ratio = 0.0;
    check(shewpt_power_scaling(&p, 100.0, 150.0, &ratio));
    r.rows.push_back({n + " power ratio 150 V / 100 V", "derived", 2.25, ratio, 1e-9, true, "1"});
    r.rows.push_back({n + " measured ratio 489/215 vs model", "reported", ratio, 489.0 / 215.0, 0.015, true, "1"});
  }
  out.write_json(n + "_fha.json", fha_json(fha));
  r.outputs["fha"] = fha_json(fha);
  r.outputs["transient"] = metrics_json(tr.metrics, tr.settle);
  r.outputs["files"] = {n + "_fha.json"};
  return r;
}

// ---- command bodies ---------------------------------------------------------

struct Common {
  std::string out_dir = ".";
  std::vector<std::string> argv;
};

Json report_header(const char* command, const Json& inputs) {
  Json j;
  j["command"] = command;
  j["library_version"] = shewpt_version();
  j["inputs"] = inputs;
  return j;
}

struct SolveArgs {
  std::vector<int> harmonics;
  std::vector<double> init_deg;
  bool multistart = false;
  double grid_deg = 5.0;
  double tol = 1e-12;
  int max_iter = 100;
};

int cmd_solve(const SolveArgs& a, const Common& c) {
  const OutDir out(c.out_dir);
  Json inputs;
  inputs["harmonics"] = a.harmonics;
  Json report;
  std::vector<std::vector<double>> roots;
  int code = kOk;

  if (a.multistart) {
    inputs["multistart_grid_deg"] = a.grid_deg;
    shewpt_solution_list* raw = nullptr;
    check(shewpt_solve_multistart(a.harmonics.data(), a.harmonics.size(), a.grid_deg, a.tol, a.max_iter, &raw));
    const SolutionList list(raw);
    for (std::size_t i = 0; i < shewpt_solution_list_size(list.get()); ++i) {
      const auto* s = shewpt_solution_list_get(list.get(), i);
      roots.push_back(solution_deg(s));
      check(shewpt_solution_write_csv(s, out.path("solution_" + std::to_string(i) + ".csv").c_str()));
    }
    report = report_header("solve", inputs);
    Json sols = Json::array();
    for (std::size_t i = 0; i < roots.size(); ++i)
      sols.push_back({{"angles_deg", roots[i]}, {"file", "solution_" + std::to_string(i) + ".csv"}});
    report["solutions"] = sols;
    if (roots.empty()) code = kNonConvergence;
  } else {
    std::vector<double> init = a.init_deg;
    if (init.empty()) {
      // best point of a 1 deg lattice as the seed
      init.resize(a.harmonics.size());
      check(shewpt_grid_oracle(a.harmonics.data(), a.harmonics.size(), 1.0, nullptr, 0.0, init.data()));
      inputs["seed"] = "grid 1 deg";
    }
    inputs["init_deg"] = init;
    const auto th = to_rad(init);
    shewpt_solution* raw = nullptr;
    const auto st =
        shewpt_solve_newton(a.harmonics.data(), a.harmonics.size(), th.data(), th.size(), a.tol, a.max_iter, &raw);
    const Solution sol(raw);
    if (st != SHEWPT_OK && st != SHEWPT_E_NONCONVERGENCE) check(st);
    report = report_header("solve", inputs);
    const auto deg = solution_deg(sol.get());
    roots.push_back(deg);
    check(shewpt_solution_write_csv(sol.get(), out.path("solution.csv").c_str()));
    report["solution"] = {{"angles_deg", deg},
                          {"residual_inf_norm", shewpt_solution_residual_norm(sol.get())},
                          {"iterations", shewpt_solution_iterations(sol.get())},
                          {"converged", shewpt_solution_converged(sol.get()) != 0},
                          {"file", "solution.csv"}};
    if (st == SHEWPT_E_NONCONVERGENCE) {
      std::fprintf(stderr, "shewpt: non-convergence: %s\n", shewpt_last_error());
      code = kNonConvergence;
    }
  }

  for (const auto& r : roots) {
    std::printf("theta_deg:");
    for (double d : r) std::printf(" %.8f", d);
    std::printf("\n");
  }
  out.write_json("solve_report.json", report);
  out.write_meta("solve_report.json", c.argv);
  return code;
}

struct WaveArgs {
  std::vector<double> angles_deg;
  std::vector<int> harmonics;  // refine angles with Newton when given
  double step = 500.0;
  double f1 = 85e3;
  std::size_t samples = 8192;
  int n_max = 21;
  bool sine_self_test = false;
};

/// Angles to synthesize: refined by Newton when target orders are given.
std::vector<double> waveform_angles(const WaveArgs& a, Json& inputs) {
  inputs["angles_deg"] = a.angles_deg;
  if (a.harmonics.empty()) return a.angles_deg;
  inputs["refined_for_harmonics"] = a.harmonics;
  const auto sol = newton(a.harmonics, a.angles_deg, 1e-12, 100);
  return solution_deg(sol.get());
}

int cmd_synth(const WaveArgs& a, const Common& c) {
  const OutDir out(c.out_dir);
  Json inputs;
  const auto deg = waveform_angles(a, inputs);
  inputs["step_voltage_V"] = a.step;
  inputs["fundamental_Hz"] = a.f1;
  inputs["samples"] = a.samples;
  const auto w = make_waveform(deg, a.step, a.f1);
  double thd_total = 0.0;
  check(shewpt_thd_closed_form(w.get(), &thd_total));
  write_waveform_files(out, "waveform", w.get(), a.f1, a.samples);

  Json report = report_header("synth", inputs);
  report["angles_deg"] = deg;
  report["levels"] = shewpt_waveform_levels(w.get());
  report["peak_V"] = shewpt_waveform_peak(w.get());
  report["fundamental_rms_V"] = shewpt_waveform_fundamental_rms(w.get());
  report["total_rms_V"] = shewpt_waveform_total_rms(w.get());
  report["thd_total"] = thd_total;
  report["files"] = {"waveform.csv", "waveform.svg"};
  out.write_json("synth_report.json", report);
  out.write_meta("synth_report.json", c.argv);
  std::printf("fundamental_rms_V %.6f\ntotal_rms_V %.6f\nthd_total %.6f\n",
              shewpt_waveform_fundamental_rms(w.get()), shewpt_waveform_total_rms(w.get()), thd_total);
  return kOk;
}

int cmd_spectrum(const WaveArgs& a, const Common& c) {
  const OutDir out(c.out_dir);
  Json inputs;
  Json report;
  Spectrum spec;
  if (a.sine_self_test) {
    inputs["self_test"] = "sinusoid";
    inputs["samples"] = a.samples;
    std::vector<double> s(a.samples);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(2.0 * kPi * double(j) / double(s.size()));
    shewpt_spectrum* raw = nullptr;
    check(shewpt_spectrum_from_samples(s.data(), s.size(), a.f1, a.n_max, 0, &raw));
    spec.reset(raw);
    report = report_header("spectrum", inputs);
  } else {
    const auto deg = waveform_angles(a, inputs);
    inputs["step_voltage_V"] = a.step;
    inputs["fundamental_Hz"] = a.f1;
    inputs["samples"] = a.samples;
    inputs["n_max"] = a.n_max;
    const auto w = make_waveform(deg, a.step, a.f1);
    spec = make_spectrum(w.get(), a.samples, a.n_max);
    shewpt_thd_report thd{};
    check(shewpt_thd_report_compute(w.get(), a.harmonics.data(), a.harmonics.size(), a.samples, &thd));
    report = report_header("spectrum", inputs);
    report["angles_deg"] = deg;
    report["fundamental_rms_V"] = shewpt_waveform_fundamental_rms(w.get());
    report["thd_report"] = thd_report_json(thd);
  }
  double thd_band = 0.0;
  check(shewpt_spectrum_thd(spec.get(), a.n_max, &thd_band));
  report["thd_band"] = thd_band;
  report["thd_band_n_max"] = a.n_max;
  write_spectrum_files(out, "spectrum", spec.get());
  report["files"] = {"spectrum.csv", "spectrum.svg"};
  out.write_json("spectrum_report.json", report);
  out.write_meta("spectrum_report.json", c.argv);
  std::printf("thd_band %.9g (n <= %d)\n", thd_band, a.n_max);
  return kOk;
}

struct WptArgs {
  std::string config;
  std::optional<double> v_dc;
  std::string mode = "fha";
  int steps = 4096;
  int cycles = 60;
  int settle = 50;
  int trace_cycles = 2;
};

int cmd_wpt(const WptArgs& a, const Common& c) {
  const OutDir out(c.out_dir);
  shewpt_link_params p{};
  if (a.config.empty())
    shewpt_link_params_reference(100.0, &p);
  else
    check(shewpt_link_params_load(a.config.c_str(), &p));
  if (a.v_dc) p.V_dc_V = *a.v_dc;
  check(shewpt_link_params_validate(&p));

  Json inputs;
  inputs["config"] = a.config.empty() ? Json("built-in") : Json(fs::path(a.config).filename().string());
  inputs["params"] = params_json(p);
  inputs["mode"] = a.mode;
  shewpt_fha_result fha{};
  check(shewpt_fha_solve(&p, &fha));
  Json report = report_header("wpt", inputs);
  report["fha"] = fha_json(fha);
  std::vector<Row> rows;
  std::vector<std::string> files{"wpt_fha.json"};
  out.write_json("wpt_fha.json", fha_json(fha));

  if (a.mode == "transient") {
    const auto tr = run_transient(p, a.steps, a.cycles, a.settle);
    report["transient"] = metrics_json(tr.metrics, tr.settle);
    write_trace_tail(out, "wpt_trace.csv", tr.trace.get(), a.trace_cycles);
    files.push_back("wpt_trace.csv");
    if (fha.P_out > 0.0)
      rows.push_back({"transient vs FHA P_out", "derived", fha.P_out, tr.metrics.P_out, 0.05, true, "W"});
    else
      rows.push_back({"transient P_out with no coupling", "derived", 0.0, tr.metrics.P_out, 1e-9, false, "W"});
    std::printf("transient P_out_W %.6f  settle_cycle %d  zvs %d\n", tr.metrics.P_out, tr.settle, tr.metrics.zvs);
  }
  std::printf("fha P_out_W %.6f  P_in_W %.6f  input_phase_deg %.6f\n", fha.P_out, fha.P_in,
              std::atan2(fha.Z_in_im, fha.Z_in_re) * 180.0 / kPi);
  report["files"] = files;
  report["comparisons"] = rows_json(rows);
  if (!rows.empty()) print_rows(rows);
  out.write_json("wpt_report.json", report);
  out.write_meta("wpt_report.json", c.argv);
  return all_pass(rows) ? kOk : kComparison;
}

int cmd_reproduce(const std::string& which, const Common& c) {
  const OutDir out(c.out_dir);
  const MultilevelCase three{"3level", {3, 5, 7}, {11, 41, 85}, 500.0, 809.19, 1.0, 18.5, 0.5, 15.14, 1.0, 0.5, false};
  const MultilevelCase four{"4level", {3, 5, 7, 9}, {9, 26, 50, 86}, 375.0, 869.7, 1.5, 12.8, 0.8, 9.7, 1.0, 1.0, true};

  std::vector<std::pair<std::string, std::function<CaseResult()>>> cases;
  if (which == "3level" || which == "all") cases.emplace_back("3level", [&] { return run_multilevel(three, out); });
  if (which == "4level" || which == "all") cases.emplace_back("4level", [&] { return run_multilevel(four, out); });
  if (which == "wpt100" || which == "all") cases.emplace_back("wpt100", [&] { return run_wpt("wpt100", 100.0, 215.0, out); });
  if (which == "wpt150" || which == "all") cases.emplace_back("wpt150", [&] { return run_wpt("wpt150", 150.0, 489.0, out); });

  // Cases run concurrently; the report is assembled in case order.
  std::vector<std::future<CaseResult>> pending;
  for (auto& [name, fn] : cases) pending.push_back(std::async(std::launch::async, fn));

  std::vector<Row> rows;
  Json per_case;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto r = pending[i].get();
    per_case[cases[i].first] = r.outputs;
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
  }
  Json report = report_header("reproduce", Json{{"case", which}});
  report["cases"] = per_case;
  report["comparisons"] = rows_json(rows);
  report["all_pass"] = all_pass(rows);
  out.write_json("reproduce_report.json", report);
  out.write_meta("reproduce_report.json", c.argv);
  print_rows(rows);
  return all_pass(rows) ? kOk : kComparison;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective harmonic elimination and wireless power link toolkit"};
  app.require_subcommand(1);
  Common common;
  common.argv.assign(argv, argv + argc);
  app.add_option("--out", common.out_dir, "Output directory")->envname("SHEWPT_OUT_DIR");
  app.set_version_flag("--version", std::string(shewpt_version()));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve the harmonic elimination system for switching angles");
  s->add_option("--harmonics", solve.harmonics, "Odd orders to eliminate, comma separated")->required()->delimiter(',');
  s->add_option("--init", solve.init_deg, "Initial angles in degrees, comma separated")->delimiter(',');
  s->add_flag("--multistart", solve.multistart, "Newton from every ascending lattice seed");
  s->add_option("--grid-deg", solve.grid_deg, "Seed lattice spacing for --multistart, degrees");
  s->add_option("--tol", solve.tol, "Residual infinity-norm tolerance");
  s->add_option("--max-iter", solve.max_iter, "Newton iteration cap");

  WaveArgs synth_args;
  auto* sy = app.add_subcommand("synth", "Synthesize the stepped waveform and its RMS figures");
  auto add_wave = [](CLI::App* sub, WaveArgs& w, bool angles_required) {
    auto* opt = sub->add_option("--angles", w.angles_deg, "Switching angles in degrees, comma separated")->delimiter(',');
    if (angles_required) opt->required();
    sub->add_option("--harmonics", w.harmonics, "Refine the angles to eliminate these orders first")->delimiter(',');
    sub->add_option("--step", w.step, "Voltage per H-bridge cell, V");
    sub->add_option("--f1", w.f1, "Fundamental frequency, Hz");
    sub->add_option("--samples", w.samples, "Samples per period (power of two)");
    return opt;
  };
  add_wave(sy, synth_args, true);

  WaveArgs spec_args;
  auto* sp = app.add_subcommand("spectrum", "Harmonic spectrum and THD of the stepped waveform");
  auto* spec_angles = add_wave(sp, spec_args, false);
  sp->add_option("--n-max", spec_args.n_max, "Highest harmonic order reported");
  auto* self_test = sp->add_flag("--sine-self-test", spec_args.sine_self_test, "Analyze a pure sinusoid instead");
  spec_angles->excludes(self_test);

  WptArgs wpt;
  auto* wp = app.add_subcommand("wpt", "Series-series wireless power link");
  wp->add_option("--config", wpt.config, "JSON link parameters (built-in reference link when omitted)");
  wp->add_option("--vdc", wpt.v_dc, "Override the DC bus voltage, V");
  wp->add_option("--mode", wpt.mode, "Model")->check(CLI::IsMember({"fha", "transient"}));
  wp->add_option("--steps", wpt.steps, "RK4 steps per switching cycle");
  wp->add_option("--cycles", wpt.cycles, "Simulated switching cycles");
  wp->add_option("--settle", wpt.settle, "Cycles discarded before metrics");
  wp->add_option("--trace-cycles", wpt.trace_cycles, "Final cycles written to the trace CSV");

  std::string which;
  auto* rp = app.add_subcommand("reproduce", "Regenerate the headline numbers with comparison rows");
  rp->add_option("--case", which, "Case")->required()->check(CLI::IsMember({"3level", "4level", "wpt100", "wpt150", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*s) return cmd_solve(solve, common);
    if (*sy) return cmd_synth(synth_args, common);
    if (*sp) {
      if (!spec_args.sine_self_test && spec_args.angles_deg.empty()) {
        std::fprintf(stderr, "shewpt: validation: angles: required unless --sine-self-test is given\n");
        return kValidation;
      }
      return cmd_spectrum(spec_args, common);
    }
    if (*wp) return cmd_wpt(wpt, common);
    if (*rp) return cmd_reproduce(which, common);
  } catch (const CliError& e) {
    std::fprintf(stderr, "shewpt: %s\n", e.message.c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "shewpt: internal error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
