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

#include "shewpt/shewpt.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "shewpt/she_solver.hpp"
#include "shewpt/spectrum.hpp"
#include "shewpt/transient_sim.hpp"
#include "shewpt/waveform.hpp"
#include "shewpt/wpt_link.hpp"

struct shewpt_solution {
  shewpt::SheSolution value;
};
struct shewpt_solution_list {
  std::vector<shewpt_solution> items;
};
struct shewpt_waveform {
  shewpt::SteppedWaveform value;
};
struct shewpt_spectrum {
  shewpt::HarmonicSpectrum value;
};
struct shewpt_trace {
  shewpt::TransientTrace value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

shewpt_status fail(shewpt_status s, std::string msg, std::string field = {}) {
  g_error = std::move(msg);
  g_field = std::move(field);
  return s;
}

shewpt_status to_status(shewpt::ErrorCode c) {
  switch (c) {
    case shewpt::ErrorCode::Validation: return SHEWPT_E_VALIDATION;
    case shewpt::ErrorCode::DimensionMismatch: return SHEWPT_E_DIMENSION;
    case shewpt::ErrorCode::Singular: return SHEWPT_E_SINGULAR;
    case shewpt::ErrorCode::Divergence: return SHEWPT_E_DIVERGENCE;
    case shewpt::ErrorCode::NonConvergence: return SHEWPT_E_NONCONVERGENCE;
    case shewpt::ErrorCode::Cost: return SHEWPT_E_COST;
    case shewpt::ErrorCode::Io: return SHEWPT_E_IO;
  }
  return SHEWPT_E_INTERNAL;
}

/// Runs `fn`, mapping every exception onto a status code.
template <class Fn>
shewpt_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return SHEWPT_OK;
  } catch (const shewpt::Error& e) {
    return fail(to_status(e.code()), e.what(), e.field());
  } catch (const std::bad_alloc&) {
    return fail(SHEWPT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHEWPT_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SHEWPT_E_INTERNAL, "unknown error");
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw shewpt::ValidationError(name, "must not be NULL");
}

shewpt::HarmonicTargetSet targets_of(const int* orders, std::size_t n) {
  require(orders, "orders");
  return shewpt::HarmonicTargetSet(std::vector<int>(orders, orders + n));
}

std::vector<double> vec_of(const double* p, std::size_t n, const char* name) {
  require(p, name);
  return std::vector<double>(p, p + n);
}

shewpt::WptLinkParams from_c(const shewpt_link_params* p) {
  require(p, "params");
  shewpt::WptLinkParams q;
  q.L1 = p->L1_H;
  q.L2 = p->L2_H;
  q.C1 = p->C1_F;
  q.C2 = p->C2_F;
  q.k = p->k;
  q.R1 = p->R1_ohm;
  q.R2 = p->R2_ohm;
  q.R_load_dc = p->R_load_ohm;
  q.V_dc = p->V_dc_V;
  q.f_s = p->f_s_Hz;
  q.diode_drop = p->diode_drop_V;
  return q;
}

void to_c(const shewpt::WptLinkParams& q, shewpt_link_params* p) {
  *p = {q.L1, q.L2, q.C1, q.C2, q.k, q.R1, q.R2, q.R_load_dc, q.V_dc, q.f_s, q.diode_drop};
}

shewpt::FhaSolution fha_from_c(const shewpt_fha_result* r) {
  shewpt::FhaSolution s;
  s.I1 = {r->I1_re, r->I1_im};
  s.I2 = {r->I2_re, r->I2_im};
  s.V1 = r->V1_rms;
  s.Z_in = {r->Z_in_re, r->Z_in_im};
  s.R_ac = r->R_ac;
  s.V_out_dc = r->V_out_dc;
  s.P_out = r->P_out;
  s.P_in = r->P_in;
  s.zvs_favorable = r->zvs_favorable != 0;
  return s;
}

}  // namespace

extern "C" {

const char* shewpt_version(void) { return "1.0.0"; }
const char* shewpt_last_error(void) { return g_error.c_str(); }
const char* shewpt_last_error_field(void) { return g_field.c_str(); }

const char* shewpt_status_name(shewpt_status status) {
  switch (status) {
    case SHEWPT_OK: return "ok";
    case SHEWPT_E_VALIDATION: return "validation";
    case SHEWPT_E_DIMENSION: return "dimension";
    case SHEWPT_E_SINGULAR: return "singular";
    case SHEWPT_E_DIVERGENCE: return "divergence";
    case SHEWPT_E_NONCONVERGENCE: return "non-convergence";
    case SHEWPT_E_COST: return "cost";
    case SHEWPT_E_IO: return "io";
    case SHEWPT_E_INTERNAL: return "internal";
  }
  return "unknown";
}

shewpt_status shewpt_residual(const int* orders, size_t n_orders, const double* angles,
                              size_t n_angles, double* out) {
  return guard([&] {
    require(out, "out");
    const auto f = shewpt::residual(vec_of(angles, n_angles, "angles"), targets_of(orders, n_orders));
    std::copy(f.begin(), f.end(), out);
  });
}

shewpt_status shewpt_jacobian(const int* orders, size_t n_orders, const double* angles,
                              size_t n_angles, double* out) {
  return guard([&] {
    require(out, "out");
    const auto j = shewpt::jacobian(vec_of(angles, n_angles, "angles"), targets_of(orders, n_orders));
    std::copy(j.begin(), j.end(), out);
  });
}

shewpt_status shewpt_solve_newton(const int* orders, size_t n_orders, const double* initial,
                                  size_t n_initial, double tol, int max_iter,
                                  shewpt_solution** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    shewpt::NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    const auto targets = targets_of(orders, n_orders);
    const shewpt::AngleSet init(vec_of(initial, n_initial, "initial"));
    try {
      *out = new shewpt_solution{shewpt::solve_newton(init, targets, opts)};
    } catch (const shewpt::NonConvergenceError& e) {
      *out = new shewpt_solution{e.best()};
      throw;
    }
  });
}

shewpt_status shewpt_solve_multistart(const int* orders, size_t n_orders, double grid_step_deg,
                                      double tol, int max_iter, shewpt_solution_list** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    shewpt::NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    auto sols = shewpt::solve_multistart(targets_of(orders, n_orders), grid_step_deg, opts);
    auto list = std::make_unique<shewpt_solution_list>();
    for (auto& s : sols) list->items.push_back(shewpt_solution{std::move(s)});
    *out = list.release();
  });
}

shewpt_status shewpt_grid_oracle(const int* orders, size_t n_orders, double step_deg,
                                 const double* window_center_deg, double window_half_width_deg,
                                 double* out_deg) {
  return guard([&] {
    require(out_deg, "out_deg");
    std::optional<shewpt::OracleWindow> window;
    if (window_center_deg != nullptr)
      window = shewpt::OracleWindow{vec_of(window_center_deg, n_orders, "window_center_deg"),
                                    window_half_width_deg};
    const auto best = shewpt::grid_oracle(targets_of(orders, n_orders), step_deg, window);
    const auto deg = best.degrees();
    std::copy(deg.begin(), deg.end(), out_deg);
  });
}

size_t shewpt_solution_levels(const shewpt_solution* sol) {
  return sol ? sol->value.angles.levels() : 0;
}

shewpt_status shewpt_solution_angles(const shewpt_solution* sol, double* out, size_t n) {
  return guard([&] {
    require(sol, "solution");
    require(out, "out");
    const auto a = sol->value.angles.radians();
    if (n < a.size()) throw shewpt::ValidationError("n", "buffer too small");
    std::copy(a.begin(), a.end(), out);
  });
}

shewpt_status shewpt_solution_angles_deg(const shewpt_solution* sol, double* out, size_t n) {
  return guard([&] {
    require(sol, "solution");
    require(out, "out");
    const auto a = sol->value.angles.degrees();
    if (n < a.size()) throw shewpt::ValidationError("n", "buffer too small");
    std::copy(a.begin(), a.end(), out);
  });
}

double shewpt_solution_residual_norm(const shewpt_solution* sol) {
  return sol ? sol->value.residual_norm : 0.0;
}
int shewpt_solution_iterations(const shewpt_solution* sol) { return sol ? sol->value.iterations : 0; }
int shewpt_solution_converged(const shewpt_solution* sol) {
  return sol && sol->value.converged ? 1 : 0;
}

shewpt_status shewpt_solution_write_csv(const shewpt_solution* sol, const char* path) {
  return guard([&] {
    require(sol, "solution");
    require(path, "path");
    shewpt::write_solution_csv(sol->value, path);
  });
}

void shewpt_solution_free(shewpt_solution* sol) { delete sol; }

size_t shewpt_solution_list_size(const shewpt_solution_list* list) {
  return list ? list->items.size() : 0;
}

const shewpt_solution* shewpt_solution_list_get(const shewpt_solution_list* list, size_t index) {
  if (list == nullptr || index >= list->items.size()) return nullptr;
  return &list->items[index];
}

void shewpt_solution_list_free(shewpt_solution_list* list) { delete list; }

shewpt_status shewpt_waveform_create(const double* angles, size_t n, double step_voltage,
                                     double fundamental_hz, shewpt_waveform** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    *out = new shewpt_waveform{
        shewpt::synth(shewpt::AngleSet(vec_of(angles, n, "angles")), step_voltage, fundamental_hz)};
  });
}

size_t shewpt_waveform_levels(const shewpt_waveform* w) { return w ? w->value.levels() : 0; }
double shewpt_waveform_peak(const shewpt_waveform* w) { return w ? w->value.peak() : 0.0; }
double shewpt_waveform_sample(const shewpt_waveform* w, double t) {
  return w ? w->value.sample(t) : 0.0;
}

shewpt_status shewpt_waveform_harmonic(const shewpt_waveform* w, int n, double* out) {
  return guard([&] {
    require(w, "waveform");
    require(out, "out");
    *out = shewpt::harmonic_amplitude(w->value.angles(), w->value.step_voltage(), n);
  });
}

double shewpt_waveform_fundamental_rms(const shewpt_waveform* w) {
  return w ? shewpt::fundamental_rms(w->value.angles(), w->value.step_voltage()) : 0.0;
}

double shewpt_waveform_total_rms(const shewpt_waveform* w) {
  return w ? shewpt::total_rms(w->value.angles(), w->value.step_voltage()) : 0.0;
}

shewpt_status shewpt_waveform_sample_period(const shewpt_waveform* w, size_t count,
                                            int cell_average, double* out) {
  return guard([&] {
    require(w, "waveform");
    require(out, "out");
    const auto v = w->value.sample_period(
        count, cell_average ? shewpt::SampleKind::CellAverage : shewpt::SampleKind::Point);
    std::copy(v.begin(), v.end(), out);
  });
}

shewpt_status shewpt_waveform_write_csv(const shewpt_waveform* w, size_t samples, const char* path) {
  return guard([&] {
    require(w, "waveform");
    require(path, "path");
    shewpt::write_waveform_csv(w->value, samples, path);
  });
}

void shewpt_waveform_free(shewpt_waveform* w) { delete w; }

shewpt_status shewpt_spectrum_from_waveform(const shewpt_waveform* w, size_t samples, int n_max,
                                            shewpt_spectrum** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    require(w, "waveform");
    *out = new shewpt_spectrum{shewpt::dft_spectrum(w->value, samples, n_max)};
  });
}

shewpt_status shewpt_spectrum_from_samples(const double* samples, size_t count,
                                           double fundamental_hz, int n_max, int cell_average,
                                           shewpt_spectrum** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    require(samples, "samples");
    *out = new shewpt_spectrum{shewpt::dft_spectrum(
        std::span<const double>(samples, count), fundamental_hz, n_max,
        cell_average ? shewpt::SampleKind::CellAverage : shewpt::SampleKind::Point)};
  });
}

shewpt_status shewpt_spectrum_analytic(const shewpt_waveform* w, int n_max, shewpt_spectrum** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    require(w, "waveform");
    *out = new shewpt_spectrum{shewpt::analytic_spectrum(w->value, n_max)};
  });
}

int shewpt_spectrum_n_max(const shewpt_spectrum* s) { return s ? s->value.n_max() : 0; }
double shewpt_spectrum_fundamental_hz(const shewpt_spectrum* s) {
  return s ? s->value.fundamental_hz() : 0.0;
}

shewpt_status shewpt_spectrum_amplitude(const shewpt_spectrum* s, int n, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = s->value.amplitude(n);
  });
}

shewpt_status shewpt_spectrum_thd(const shewpt_spectrum* s, int n_max, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = shewpt::thd(s->value, n_max);
  });
}

shewpt_status shewpt_spectrum_write_csv(const shewpt_spectrum* s, const char* path) {
  return guard([&] {
    require(s, "spectrum");
    require(path, "path");
    shewpt::write_spectrum_csv(s->value, path);
  });
}

void shewpt_spectrum_free(shewpt_spectrum* s) { delete s; }

shewpt_status shewpt_thd_closed_form(const shewpt_waveform* w, double* out) {
  return guard([&] {
    require(w, "waveform");
    require(out, "out");
    *out = shewpt::thd_total_closed_form(w->value.angles(), w->value.step_voltage());
  });
}

shewpt_status shewpt_thd_report_compute(const shewpt_waveform* w, const int* eliminated_orders,
                                        size_t n_orders, size_t samples, shewpt_thd_report* out) {
  return guard([&] {
    require(w, "waveform");
    require(out, "out");
    if (n_orders > 0) require(eliminated_orders, "eliminated_orders");
    const auto r = shewpt::thd_report(
        w->value, std::span<const int>(eliminated_orders, n_orders), samples);
    *out = {r.thd_total, r.thd_total_dft, r.band_total, r.thd_21, r.eliminated_orders_max_relative};
  });
}

void shewpt_link_params_reference(double V_dc, shewpt_link_params* out) {
  if (out) to_c(shewpt::reference_link_params(V_dc), out);
}

shewpt_status shewpt_link_params_load(const char* path, shewpt_link_params* out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    to_c(shewpt::load_link_params(path), out);
  });
}

shewpt_status shewpt_link_params_validate(const shewpt_link_params* p) {
  return guard([&] { from_c(p).validate(); });
}

shewpt_status shewpt_mutual_inductance(double k, double L1, double L2, double* out) {
  return guard([&] {
    require(out, "out");
    *out = shewpt::mutual_inductance(k, L1, L2);
  });
}

shewpt_status shewpt_resonant_frequency(double L, double C, double* out) {
  return guard([&] {
    require(out, "out");
    *out = shewpt::resonant_frequency(L, C);
  });
}

shewpt_status shewpt_equivalent_ac_load(double R_load_dc, double* out) {
  return guard([&] {
    require(out, "out");
    *out = shewpt::equivalent_ac_load(R_load_dc);
  });
}

shewpt_status shewpt_drive_fundamental_rms(double V_dc, double* out) {
  return guard([&] {
    require(out, "out");
    *out = shewpt::drive_fundamental_rms(V_dc);
  });
}

shewpt_status shewpt_fha_solve(const shewpt_link_params* p, shewpt_fha_result* out) {
  return guard([&] {
    require(out, "out");
    const auto s = shewpt::fha_solve(from_c(p));
    *out = {s.I1.real(), s.I1.imag(), s.I2.real(), s.I2.imag(), s.V1.real(),
            s.Z_in.real(), s.Z_in.imag(), s.R_ac, s.V_out_dc, s.P_out, s.P_in,
            s.zvs_favorable ? 1 : 0};
  });
}

shewpt_status shewpt_power_scaling(const shewpt_link_params* p, double V_dc_a, double V_dc_b,
                                   double* out) {
  return guard([&] {
    require(out, "out");
    *out = shewpt::power_scaling_check(from_c(p), V_dc_a, V_dc_b);
  });
}

shewpt_status shewpt_fha_write_json(const shewpt_fha_result* r, const char* path) {
  return guard([&] {
    require(r, "result");
    require(path, "path");
    shewpt::write_fha_json(fha_from_c(r), path);
  });
}

shewpt_status shewpt_simulate_square(const shewpt_link_params* p, int steps_per_cycle, int n_cycles,
                                     shewpt_trace** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    *out = new shewpt_trace{shewpt::simulate_square(from_c(p), steps_per_cycle, n_cycles)};
  });
}

shewpt_status shewpt_simulate_stepped(const shewpt_link_params* p, const shewpt_waveform* w,
                                      int steps_per_cycle, int n_cycles, shewpt_trace** out) {
  if (out == nullptr) return fail(SHEWPT_E_VALIDATION, "out: must not be NULL", "out");
  *out = nullptr;
  return guard([&] {
    require(w, "waveform");
    *out = new shewpt_trace{
        shewpt::simulate_stepped(from_c(p), w->value, steps_per_cycle, n_cycles)};
  });
}

size_t shewpt_trace_size(const shewpt_trace* t) { return t ? t->value.size() : 0; }
double shewpt_trace_dt(const shewpt_trace* t) { return t ? t->value.dt : 0.0; }
int shewpt_trace_cycles(const shewpt_trace* t) { return t ? t->value.n_cycles : 0; }
double shewpt_trace_snapping_error(const shewpt_trace* t) {
  return t ? t->value.snapping_error_rad : 0.0;
}

shewpt_status shewpt_trace_state(const shewpt_trace* t, size_t index, shewpt_tank_state* out,
                                 double* drive_out) {
  return guard([&] {
    require(t, "trace");
    if (index >= t->value.size()) throw shewpt::ValidationError("index", "outside the trace");
    const auto& s = t->value.states[index];
    if (out) *out = {s.i1, s.i2, s.vC1, s.vC2};
    if (drive_out) *drive_out = t->value.drive[index];
  });
}

shewpt_status shewpt_steady_state_metrics(const shewpt_trace* t, int settle_cycles,
                                          shewpt_metrics* out) {
  return guard([&] {
    require(t, "trace");
    require(out, "out");
    const auto m = shewpt::steady_state_metrics(t->value, settle_cycles);
    *out = {m.I1_rms, m.I2_rms, m.I1_fundamental_rms, m.P_out, m.P_in,
            m.i1_at_rising_edge_max, m.rising_edges, m.zvs ? 1 : 0};
  });
}

shewpt_status shewpt_settle_cycle(const shewpt_trace* t, int* out) {
  return guard([&] {
    require(t, "trace");
    require(out, "out");
    const auto c = shewpt::settle_detector(t->value);
    *out = c ? *c : -1;
  });
}

shewpt_status shewpt_trace_write_csv(const shewpt_trace* t, const char* path) {
  return guard([&] {
    require(t, "trace");
    require(path, "path");
    shewpt::write_trace_csv(t->value, path);
  });
}

void shewpt_trace_free(shewpt_trace* t) { delete t; }

}  // extern "C"
