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

#include "shewpt/she_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "io_util.hpp"

namespace shewpt {

HarmonicTargetSet::HarmonicTargetSet(std::vector<int> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw ValidationError("harmonics", "at least one target order is required");
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const int n = orders_[i];
    if (n < 3 || n % 2 == 0)
      throw ValidationError("harmonics", "order " + std::to_string(n) +
                                             " is not an odd integer >= 3");
    if (i > 0 && n <= orders_[i - 1])
      throw ValidationError("harmonics", "orders must be strictly ascending");
  }
}

namespace {

void check_dims(std::size_t n_angles, const HarmonicTargetSet& targets) {
  if (n_angles != targets.size())
    throw DimensionError("got " + std::to_string(n_angles) + " angles for " +
                         std::to_string(targets.size()) + " target harmonics");
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Strictly ascending lattice seeds, in degrees, for one axis.
std::vector<double> lattice_axis(double step_deg) {
  std::vector<double> pts;
  for (int i = 1;; ++i) {
    const double a = step_deg * double(i);
    if (a >= 90.0 - 1e-9) break;
    pts.push_back(a);
  }
  return pts;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<double> residual(std::span<const double> angles, const HarmonicTargetSet& targets) {
  check_dims(angles.size(), targets);
  std::vector<double> f(targets.size(), 0.0);
  for (std::size_t k = 0; k < targets.size(); ++k)
    for (double th : angles) f[k] += std::cos(targets[k] * th);
  return f;
}

std::vector<double> residual(const AngleSet& angles, const HarmonicTargetSet& targets) {
  return residual(angles.radians(), targets);
}

std::vector<double> jacobian(std::span<const double> angles, const HarmonicTargetSet& targets) {
  check_dims(angles.size(), targets);
  const std::size_t n = targets.size();
  std::vector<double> j(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      j[k * n + i] = -double(targets[k]) * std::sin(targets[k] * angles[i]);
  return j;
}

std::vector<double> jacobian(const AngleSet& angles, const HarmonicTargetSet& targets) {
  return jacobian(angles.radians(), targets);
}

SheSolution solve_newton(const AngleSet& initial, const HarmonicTargetSet& targets,
                         const NewtonOptions& opts) {
  check_dims(initial.levels(), targets);
  if (!(opts.tol > 0.0)) throw ValidationError("tol", "must be positive");
  if (opts.max_iter < 0) throw ValidationError("max_iter", "must be non-negative");

  const std::size_t n = targets.size();
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<double> x(initial.radians().begin(), initial.radians().end());
  std::vector<double> f = residual(x, targets);
  SheSolution best{initial, inf_norm(f), 0, false};

  for (int iter = 0;; ++iter) {
    const double norm_inf = inf_norm(f);
    if (norm_inf < best.residual_norm || iter == 0) best = {AngleSet(x), norm_inf, iter, false};
    if (norm_inf < opts.tol) return {AngleSet(x), norm_inf, iter, true};
    if (iter >= opts.max_iter)
      throw NonConvergenceError("Newton iteration did not reach tolerance in " +
                                    std::to_string(opts.max_iter) + " iterations",
                                best);

    const auto jv = jacobian(x, targets);
    const Mat jac = Eigen::Map<const Mat>(jv.data(), Eigen::Index(n), Eigen::Index(n));
    const Eigen::JacobiSVD<Mat> svd(jac);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    // entries are bounded by the largest order, which sets the absolute scale
    const double scale = double(targets.orders().back());
    if (!(smin > 0.0) || sv(0) / smin > opts.max_condition || smin * opts.max_condition < scale)
      throw SingularError("Jacobian is numerically singular (condition estimate " +
                          detail::fmt_double(smin > 0.0 ? sv(0) / smin
                                                        : std::numeric_limits<double>::infinity()) +
                          ")");
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(f.data(), Eigen::Index(n));
    const Eigen::VectorXd dx = jac.partialPivLu().solve(rhs);

    const double norm2 = two_norm(f);
    double lambda = 1.0;
    bool accepted = false;
    bool last_inside = true;
    std::vector<double> trial(n);
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + lambda * dx(Eigen::Index(i));
      last_inside = AngleSet::is_valid(trial);
      if (!last_inside) continue;
      auto ft = residual(trial, targets);
      if (two_norm(ft) < norm2) {
        x = trial;
        f = std::move(ft);
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw DivergenceError(last_inside
                                ? "no residual decrease after full step damping"
                                : "iterate leaves (0, 90) deg or loses ordering after full damping");
  }
}

namespace {

// Roots that collapse onto 0, 90 deg or a neighbour are limits outside the
// open domain, not admissible switching patterns.
bool interior(const AngleSet& a) {
  constexpr double margin = 1e-6;
  double prev = 0.0;
  for (double t : a.radians()) {
    if (t - prev < margin) return false;
    prev = t;
  }
  return kHalfPi - prev >= margin;
}

}  // namespace

std::vector<SheSolution> solve_multistart(const HarmonicTargetSet& targets, double grid_step_deg,
                                          const NewtonOptions& opts) {
  if (!(grid_step_deg > 0.0) || grid_step_deg > 15.0)
    throw ValidationError("grid_step", "must be in (0, 15] degrees");
  const std::size_t k = targets.size();
  const auto axis = lattice_axis(grid_step_deg);

  std::vector<std::vector<double>> seeds;
  if (axis.size() >= k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    const std::size_t m = axis.size();
    while (true) {
      std::vector<double> s(k);
      for (std::size_t i = 0; i < k; ++i) s[i] = deg_to_rad(axis[idx[i]]);
      seeds.push_back(std::move(s));
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }

  // Each seed writes only its own slot, so the merged result does not depend
  // on thread scheduling.
  std::vector<std::optional<SheSolution>> slots(seeds.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < seeds.size(); s += workers) {
          try {
            auto sol = solve_newton(AngleSet(seeds[s]), targets, opts);
            if (sol.converged && interior(sol.angles)) slots[s] = std::move(sol);
          } catch (const Error&) {
          }
        }
      });
  }

  std::vector<SheSolution> found;
  for (auto& s : slots)
    if (s) found.push_back(std::move(*s));
  std::stable_sort(found.begin(), found.end(), [](const SheSolution& a, const SheSolution& b) {
    return lex_less(a.angles.radians(), b.angles.radians());
  });

  const double dedup = deg_to_rad(0.01);
  std::vector<SheSolution> unique;
  for (auto& s : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const SheSolution& u) {
      double gap = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        gap = std::max(gap, std::abs(u.angles[i] - s.angles[i]));
      return gap < dedup;
    });
    if (!dup) unique.push_back(std::move(s));
  }
  return unique;
}

double oracle_lattice_size(std::size_t k, double step_deg, const std::optional<OracleWindow>& window) {
  const auto axis = lattice_axis(step_deg);
  if (!window) return binomial(axis.size(), k);
  double total = 1.0;
  for (double c : window->center_deg) {
    const auto cnt = std::count_if(axis.begin(), axis.end(), [&](double a) {
      return std::abs(a - c) <= window->half_width_deg + 1e-9;
    });
    total *= double(cnt);
  }
  return total;
}

AngleSet grid_oracle(const HarmonicTargetSet& targets, double step_deg,
                     const std::optional<OracleWindow>& window) {
  if (!(step_deg >= 0.05)) throw ValidationError("step", "must be >= 0.05 degrees");
  const std::size_t k = targets.size();
  if (window) {
    if (window->center_deg.size() != k)
      throw DimensionError("oracle window has " + std::to_string(window->center_deg.size()) +
                           " centers for " + std::to_string(k) + " target harmonics");
    if (!(window->half_width_deg > 0.0))
      throw ValidationError("window", "half width must be positive");
  }
  if (oracle_lattice_size(k, step_deg, window) > 1e9)
    throw CostError("oracle lattice exceeds 1e9 points; use a coarser step");

  const auto axis = lattice_axis(step_deg);
  const std::size_t m = axis.size();

  // Candidate lattice indices per angle position.
  std::vector<std::vector<std::size_t>> allowed(k);
  for (std::size_t d = 0; d < k; ++d)
    for (std::size_t j = 0; j < m; ++j)
      if (!window || std::abs(axis[j] - window->center_deg[d]) <= window->half_width_deg + 1e-9)
        allowed[d].push_back(j);

  // cos(n_k * a_j), row per target.
  std::vector<double> table(k * m);
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t j = 0; j < m; ++j) table[t * m + j] = std::cos(targets[t] * deg_to_rad(axis[j]));

  std::vector<std::size_t> pick(k), best_pick;
  std::vector<double> partial((k + 1) * k, 0.0);
  double best = std::numeric_limits<double>::infinity();

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    const double* prev = &partial[depth * k];
    double* cur = &partial[(depth + 1) * k];
    for (std::size_t j : allowed[depth]) {
      if (depth > 0 && j <= pick[depth - 1]) continue;
      if (m - j < k - depth) break;
      pick[depth] = j;
      for (std::size_t t = 0; t < k; ++t) cur[t] = prev[t] + table[t * m + j];
      if (depth + 1 == k) {
        double r = 0.0;
        for (std::size_t t = 0; t < k; ++t) r += cur[t] * cur[t];
        if (r < best) {
          best = r;
          best_pick = pick;
        }
      } else {
        self(self, depth + 1);
      }
    }
  };
  recurse(recurse, 0);

  if (best_pick.empty()) throw ValidationError("step", "lattice has no strictly ascending point");
  std::vector<double> deg(k);
  for (std::size_t d = 0; d < k; ++d) deg[d] = axis[best_pick[d]];
  return AngleSet::from_degrees(deg);
}

void write_solution_csv(const SheSolution& sol, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "theta_index,theta_deg\n";
  const auto deg = sol.angles.degrees();
  for (std::size_t i = 0; i < deg.size(); ++i)
    out << (i + 1) << ',' << detail::fmt_double(deg[i]) << '\n';
  detail::finish_write(out, path);
}

}  // namespace shewpt
