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
#include <span>
#include <vector>

#include "shewpt/error.hpp"
#include "shewpt/waveform.hpp"

namespace shewpt {

/// Odd harmonic orders (>= 3, ascending) to be zeroed. The fundamental is
/// never a target.
class HarmonicTargetSet {
 public:
  explicit HarmonicTargetSet(std::vector<int> orders);

  std::size_t size() const noexcept { return orders_.size(); }
  std::span<const int> orders() const noexcept { return orders_; }
  int operator[](std::size_t i) const { return orders_[i]; }

 private:
  std::vector<int> orders_;
};

struct SheSolution {
  AngleSet angles;
  double residual_norm = 0.0;  // infinity norm of the residual
  int iterations = 0;
  bool converged = false;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 100;
  int max_halvings = 30;
  double max_condition = 1e12;
};

/// Thrown when max_iter is exhausted; carries the best iterate seen.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, SheSolution best)
      : Error(ErrorCode::NonConvergence, {}, message), best_(std::move(best)) {}
  const SheSolution& best() const noexcept { return best_; }

 private:
  SheSolution best_;
};

/// F_k = sum_i cos(n_k * theta_i).
std::vector<double> residual(std::span<const double> angles, const HarmonicTargetSet& targets);
std::vector<double> residual(const AngleSet& angles, const HarmonicTargetSet& targets);

/// Row-major K x K, dF_k/dtheta_i = -n_k sin(n_k theta_i).
std::vector<double> jacobian(std::span<const double> angles, const HarmonicTargetSet& targets);
std::vector<double> jacobian(const AngleSet& angles, const HarmonicTargetSet& targets);

/// Damped Newton iteration. Each trial step is halved until the iterate is
/// a valid AngleSet and the 2-norm of the residual decreases.
SheSolution solve_newton(const AngleSet& initial, const HarmonicTargetSet& targets,
                         const NewtonOptions& opts = {});

/// Newton from every strictly ascending lattice point of (0, 90)^K at
/// `grid_step_deg`. Distinct converged roots (max angle gap >= 0.01 deg),
/// sorted lexicographically by angle. Roots within 1e-6 rad of 0, 90 deg or
/// a neighbouring angle are dropped.
std::vector<SheSolution> solve_multistart(const HarmonicTargetSet& targets, double grid_step_deg,
                                          const NewtonOptions& opts = {});

/// Restricts the oracle lattice to |theta_i - center_i| <= half_width_deg.
struct OracleWindow {
  std::vector<double> center_deg;
  double half_width_deg = 5.0;
};

/// Exhaustive minimizer of ||F||^2 over the strictly ascending lattice
/// {step, 2 step, ...} < 90 deg. Ties resolve to the lexicographically
/// smallest angles.
AngleSet grid_oracle(const HarmonicTargetSet& targets, double step_deg,
                     const std::optional<OracleWindow>& window = std::nullopt);

/// Number of points grid_oracle would visit (before the ascending filter for
/// windowed searches). Used as the cost guard.
double oracle_lattice_size(std::size_t k, double step_deg,
                           const std::optional<OracleWindow>& window = std::nullopt);

void write_solution_csv(const SheSolution& sol, const std::string& path);

}  // namespace shewpt
