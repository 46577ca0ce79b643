// Copyright 2026 The alnewton Authors.
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

// Multiplier iteration for the dual LP:
//
//   u^{k+1} = argmin_u Phi(u; alpha, x^k)
//   x^{k+1} = (x^k + alpha (A^T u^{k+1} - c))_+
//
// Starting from x^0 = 0 with alpha large enough, x^1 is already the
// least-norm optimal point; the second pass then returns an exactly dual
// feasible u and leaves x unchanged.

#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "alnewton/aug_lagrangian.hpp"
#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/newton_solver.hpp"

namespace alnewton {

// 10 / sqrt(d), with d the problem's density (hint or nnz / (m n)).
inline double default_alpha(const LpProblem& p) {
  return 10.0 / std::sqrt(p.density());
}

struct SolverConfig {
  double alpha = 0.0;  // <= 0 selects default_alpha(p)
  NewtonConfig newton;
  double outer_tol = 1e-10;
  int max_outer = 20;
  Vector x0;  // empty selects zeros
  KktThresholds thresholds;
  // On outer_cap, multiply alpha by 10 and restart, up to max_escalations.
  bool alpha_escalation = false;
  int max_escalations = 3;

  void validate(const LpProblem& p) const {
    ALNEWTON_REQUIRE(std::isfinite(alpha), "SolverConfig: alpha must be finite");
    ALNEWTON_REQUIRE(outer_tol > 0.0, "SolverConfig: outer_tol must be > 0");
    ALNEWTON_REQUIRE(max_outer >= 1, "SolverConfig: max_outer must be >= 1");
    ALNEWTON_REQUIRE(max_escalations >= 0, "SolverConfig: max_escalations must be >= 0");
    if (!x0.empty()) {
      detail::require_length(x0, p.cols(), "SolverConfig(x0)");
      for (double v : x0) {
        ALNEWTON_REQUIRE(v >= 0.0 && std::isfinite(v),
                         "SolverConfig: x0 must be nonnegative and finite");
      }
    }
    newton.validate();
  }
};

enum class SolveStatus { kOptimal, kOuterCap, kInnerFailure, kDiverging };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kOuterCap: return "outer_cap";
    case SolveStatus::kInnerFailure: return "inner_failure";
    case SolveStatus::kDiverging: return "diverging";
  }
  return "unknown";
}

struct SolveReport {
  PrimalDualSolution solution;
  KktReport kkt;
  KktThresholds thresholds;
  int outer_iterations = 0;
  int inner_iterations_total = 0;
  int line_search_steps_total = 0;
  double wall_time_seconds = 0.0;
  SolveStatus status = SolveStatus::kOuterCap;
  double alpha = 0.0;
  int escalations = 0;
  NewtonStatus last_inner_status = NewtonStatus::kConverged;
  double last_inner_grad_norm = 0.0;
  double last_primal_change = 0.0;  // ||x^{k+1} - x^k||_inf
  std::string message;

  // True when the first multiplier step already produced the returned point.
  bool one_step() const { return outer_iterations == 1; }
};

struct OuterTrace {
  int k = 0;
  int inner_iterations = 0;
  NewtonStatus inner_status = NewtonStatus::kConverged;
  double primal_change = 0.0;
  KktReport kkt;
};

struct SolveSinks {
  NewtonSink newton;
  std::function<void(const OuterTrace&)> outer;
};

namespace detail {

// Worst relative residual measured against the thresholds; <= 1 passes.
inline double kkt_merit(const KktReport& r, const KktThresholds& t) {
  return std::max({r.relative_primal_infeas() / t.primal,
                   r.relative_dual_infeas() / t.dual,
                   r.relative_duality_gap() / t.gap});
}

inline SolveReport solve_fixed_alpha(const LpProblem& p, const SolverConfig& cfg,
                                     double alpha, const SolveSinks& sinks) {
  SolveReport rep;
  rep.alpha = alpha;
  rep.thresholds = cfg.thresholds;

  auto x = std::make_shared<const Vector>(
      cfg.x0.empty() ? Vector(static_cast<std::size_t>(p.cols()), 0.0) : cfg.x0);
  Vector u(static_cast<std::size_t>(p.rows()), 0.0);

  double best_merit = std::numeric_limits<double>::infinity();
  PrimalDualSolution best;
  KktReport best_kkt;

  for (int k = 1; k <= cfg.max_outer; ++k) {
    NewtonResult inner = minimize(p, alpha, x, u, cfg.newton, sinks.newton);
    rep.outer_iterations = k;
    rep.inner_iterations_total += inner.iterations;
    rep.line_search_steps_total += inner.line_search_steps;
    rep.last_inner_status = inner.status;
    rep.last_inner_grad_norm = inner.final_grad_norm;

    const MeritPoint mp = MeritPoint::at(p, inner.u, alpha, x);
    auto x_next = std::make_shared<const Vector>(primal_recovery(mp));
    double change = 0.0;
    for (Index j = 0; j < p.cols(); ++j) {
      change = std::max(change, std::abs((*x_next)[j] - (*x)[j]));
    }
    const double x_scale = 1.0 + norm_inf(*x);
    rep.last_primal_change = change;
    u = std::move(inner.u);
    x = std::move(x_next);

    if (!all_finite(*x) || !all_finite(u)) {
      rep.status = SolveStatus::kDiverging;
      rep.message = "non-finite iterate at outer step " + std::to_string(k);
      break;
    }
    const KktReport kkt = kkt_report(p, *x, u);
    if (sinks.outer) sinks.outer({k, inner.iterations, inner.status, change, kkt});

    const double merit = kkt_merit(kkt, cfg.thresholds);
    if (merit < best_merit) {
      best_merit = merit;
      best = make_solution(p, *x, u);
      best_kkt = kkt;
    }

    if (inner.status == NewtonStatus::kUnbounded) {
      rep.status = SolveStatus::kDiverging;
      rep.message = "inner minimization diverged: " + inner.diagnostics +
                    " (primal infeasible or dual unbounded, not certified)";
      rep.solution = make_solution(p, *x, u);
      rep.kkt = kkt;
      return rep;
    }
    if (cfg.thresholds.passes(kkt)) {
      rep.status = SolveStatus::kOptimal;
      rep.solution = make_solution(p, *x, u);
      rep.kkt = kkt;
      return rep;
    }
    if (inner.status != NewtonStatus::kConverged &&
        inner.status != NewtonStatus::kStalled) {
      rep.status = SolveStatus::kInnerFailure;
      rep.message = std::string("inner solver ") + to_string(inner.status) +
                    ": " + inner.diagnostics;
      break;
    }
    if (change <= cfg.outer_tol * x_scale) {
      rep.status = SolveStatus::kInnerFailure;
      rep.message = "primal fixed point reached but residuals exceed thresholds";
      break;
    }
    rep.status = SolveStatus::kOuterCap;
  }
  if (rep.status == SolveStatus::kOuterCap) {
    rep.message = "no optimal point after " + std::to_string(cfg.max_outer) +
                  " outer iterations with alpha=" + std::to_string(alpha) +
                  "; alpha may be below the exact-penalty threshold";
  }
  rep.solution = std::move(best);
  rep.kkt = best_kkt;
  return rep;
}

}  // namespace detail

inline SolveReport solve(const LpProblem& p, const SolverConfig& cfg,
                         const SolveSinks& sinks = {}) {
  cfg.validate(p);
  const auto start = std::chrono::steady_clock::now();
  double alpha = cfg.alpha > 0.0 ? cfg.alpha : default_alpha(p);
  SolveReport rep = detail::solve_fixed_alpha(p, cfg, alpha, sinks);
  int escalations = 0;
  while (cfg.alpha_escalation && rep.status == SolveStatus::kOuterCap &&
         escalations < cfg.max_escalations) {
    ++escalations;
    alpha *= 10.0;
    const int prior_inner = rep.inner_iterations_total;
    const int prior_ls = rep.line_search_steps_total;
    rep = detail::solve_fixed_alpha(p, cfg, alpha, sinks);
    rep.inner_iterations_total += prior_inner;
    rep.line_search_steps_total += prior_ls;
  }
  rep.escalations = escalations;
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace alnewton
