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

// Generalized Newton minimization of the dual merit function with an Armijo
// backtracking line search. Directions come from the regularized system
// (alpha A D(z) A^T + reg I) d = -grad Phi, which is positive definite for
// any pattern z, so every direction is a strict descent direction.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "alnewton/aug_lagrangian.hpp"
#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

struct NewtonConfig {
  double epsilon = 1e-10;        // stop when ||grad Phi||_inf <= epsilon
  double armijo_initial = 1.0;   // first trial step s
  double armijo_shrink = 0.5;    // backtracking factor
  double armijo_slope = 1e-4;    // sufficient-decrease constant mu
  double hessian_reg = 1e-4;     // reg in (H + reg I)
  int max_iterations = 500;
  int max_backtracks = 40;
  // Once ||grad Phi||_inf is within roundoff_factor times the rounding
  // floor, stop after stall_iterations steps without a new smallest value.
  double roundoff_factor = 10.0;
  int stall_iterations = 5;
  // |Phi| or ||u||_inf beyond this is treated as unbounded descent.
  double divergence_threshold = 1e30;
  Index dense_threshold = kDefaultDenseThreshold;
  SpdSolveOptions spd;

  void validate() const {
    ALNEWTON_REQUIRE(epsilon > 0.0, "NewtonConfig: epsilon must be > 0");
    ALNEWTON_REQUIRE(armijo_initial > 0.0, "NewtonConfig: armijo_initial must be > 0");
    ALNEWTON_REQUIRE(armijo_shrink > 0.0 && armijo_shrink < 1.0,
                     "NewtonConfig: armijo_shrink must lie in (0,1)");
    ALNEWTON_REQUIRE(armijo_slope > 0.0 && armijo_slope < 1.0,
                     "NewtonConfig: armijo_slope must lie in (0,1)");
    ALNEWTON_REQUIRE(hessian_reg > 0.0, "NewtonConfig: hessian_reg must be > 0");
    ALNEWTON_REQUIRE(max_iterations >= 1 && max_backtracks >= 1 && stall_iterations >= 1,
                     "NewtonConfig: iteration caps must be >= 1");
    ALNEWTON_REQUIRE(roundoff_factor >= 0.0, "NewtonConfig: roundoff_factor must be >= 0");
    ALNEWTON_REQUIRE(divergence_threshold > 0.0,
                     "NewtonConfig: divergence_threshold must be > 0");
  }
};

enum class NewtonStatus {
  kConverged,
  kIterationCap,
  kLineSearchFailure,
  kStalled,
  kUnbounded,
};

inline const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::kConverged: return "converged";
    case NewtonStatus::kIterationCap: return "iteration_cap";
    case NewtonStatus::kLineSearchFailure: return "line_search_failure";
    case NewtonStatus::kStalled: return "stalled";
    case NewtonStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

struct NewtonResult {
  Vector u;
  int iterations = 0;
  double final_grad_norm = 0.0;
  double final_phi = 0.0;
  int line_search_steps = 0;
  NewtonStatus status = NewtonStatus::kConverged;
  std::string diagnostics;
};

// One record per accepted step.
struct NewtonTrace {
  int iteration = 0;
  double phi = 0.0;             // Phi before the step
  double grad_norm = 0.0;       // ||grad Phi||_inf before the step
  double step = 0.0;
  int trials = 0;
  Index active_count = 0;
  double slope = 0.0;           // grad Phi^T d
  double direction_norm_sq = 0.0;
  double decrease = 0.0;        // Phi(u_i) - Phi(u_{i+1})
  bool pattern_changed = false;  // z(u_{i+1}) != z(u_i)
  double hessian_trace = 0.0;    // trace of the generalized Hessian
};

using NewtonSink = std::function<void(const NewtonTrace&)>;

struct ArmijoResult {
  double step = 0.0;
  int trials = 0;
  bool accepted = false;
  double decrease = 0.0;
};

// Largest step in {s, s*shrink, s*shrink^2, ...} with
//   Phi(u) - Phi(u + step d) >= -step * mu * grad^T d.
inline ArmijoResult armijo_step(const LpProblem& p, const MeritPoint& mp,
                                std::span<const double> grad,
                                std::span<const double> direction,
                                const NewtonConfig& cfg) {
  detail::require_length(grad, p.rows(), "armijo_step(grad)");
  detail::require_length(direction, p.rows(), "armijo_step(direction)");
  const double slope = dot(grad, direction);
  if (!(slope < 0.0)) {
    throw NumericalFailure("armijo_step: not a descent direction (grad^T d = " +
                           std::to_string(slope) + ")");
  }
  const Vector q = matvec_transpose(p.a(), direction);
  ArmijoResult r;
  double step = cfg.armijo_initial;
  for (int j = 0; j < cfg.max_backtracks; ++j) {
    const double dec = merit_decrease(mp, q, slope, step);
    r.trials = j + 1;
    if (dec >= -step * cfg.armijo_slope * slope) {
      r.step = step;
      r.accepted = true;
      r.decrease = dec;
      return r;
    }
    step *= cfg.armijo_shrink;
  }
  return r;
}

inline NewtonResult minimize(const LpProblem& p, double alpha,
                             std::shared_ptr<const Vector> xbar, Vector u0,
                             const NewtonConfig& cfg,
                             const NewtonSink& sink = {}) {
  cfg.validate();
  MeritPoint mp = MeritPoint::at(p, std::move(u0), alpha, std::move(xbar));
  double phi = evaluate(p, mp);
  if (!std::isfinite(phi)) throw NumericalFailure("minimize: non-finite Phi at start");
  Vector g = gradient(p, mp);
  double gnorm = norm_inf(g);

  NewtonResult best{mp.u(), 0, gnorm, phi, 0, NewtonStatus::kConverged, {}};
  int iterations = 0;
  int line_search_steps = 0;
  int since_best = 0;
  NewtonStatus status = NewtonStatus::kConverged;
  std::string diag;

  while (true) {
    if (gnorm <= cfg.epsilon) {
      status = NewtonStatus::kConverged;
      break;
    }
    if (iterations >= cfg.max_iterations) {
      status = NewtonStatus::kIterationCap;
      diag = "reached " + std::to_string(cfg.max_iterations) + " iterations";
      break;
    }
    if (since_best >= cfg.stall_iterations) {
      const double floor = gradient_noise_floor(p, mp);
      if (best.final_grad_norm <= cfg.roundoff_factor * floor) {
        status = NewtonStatus::kStalled;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "gradient at rounding level: best ||grad||_inf=%.3e, floor=%.3e",
                      best.final_grad_norm, floor);
        diag = buf;
        break;
      }
    }

    Vector neg_g(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) neg_g[i] = -g[i];
    const SymmetricMatrix h = generalized_hessian(p, mp, cfg.dense_threshold);
    const Vector d = spd_solve_detailed(h, cfg.hessian_reg, neg_g, cfg.spd).d;

    const ArmijoResult ar = armijo_step(p, mp, g, d, cfg);
    line_search_steps += ar.trials;
    if (!ar.accepted) {
      status = NewtonStatus::kLineSearchFailure;
      diag = "Armijo condition not met after " + std::to_string(ar.trials) +
             " trials at ||grad||_inf=" + std::to_string(gnorm);
      break;
    }

    NewtonTrace rec;
    rec.iteration = iterations;
    rec.phi = phi;
    rec.grad_norm = gnorm;
    rec.step = ar.step;
    rec.trials = ar.trials;
    rec.active_count = mp.pattern().active_count();
    rec.slope = dot(g, d);
    rec.direction_norm_sq = dot(d, d);
    rec.decrease = ar.decrease;
    rec.hessian_trace = trace(h);

    Vector u = mp.u();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += ar.step * d[i];
    MeritPoint next = MeritPoint::at(p, std::move(u), alpha, mp.xbar_ptr());
    rec.pattern_changed = next.pattern().mask() != mp.pattern().mask();
    mp = std::move(next);
    phi = evaluate(p, mp);
    if (!std::isfinite(phi)) {
      throw NumericalFailure("minimize: non-finite Phi at iteration " +
                             std::to_string(iterations + 1));
    }
    g = gradient(p, mp);
    gnorm = norm_inf(g);
    ++iterations;
    if (sink) sink(rec);

    if (gnorm < best.final_grad_norm) {
      best.u = mp.u();
      best.final_grad_norm = gnorm;
      best.final_phi = phi;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (std::abs(phi) > cfg.divergence_threshold ||
        norm_inf(mp.u()) > cfg.divergence_threshold) {
      status = NewtonStatus::kUnbounded;
      diag = "Phi=" + std::to_string(phi) + " after " +
             std::to_string(iterations) + " iterations; dual appears unbounded";
      break;
    }
  }

  NewtonResult out;
  if (status == NewtonStatus::kConverged || status == NewtonStatus::kUnbounded) {
    out.u = mp.u();
    out.final_grad_norm = gnorm;
    out.final_phi = phi;
  } else {
    out.u = std::move(best.u);
    out.final_grad_norm = best.final_grad_norm;
    out.final_phi = best.final_phi;
  }
  out.iterations = iterations;
  out.line_search_steps = line_search_steps;
  out.status = status;
  out.diagnostics = std::move(diag);
  return out;
}

inline NewtonResult minimize(const LpProblem& p, double alpha, Vector xbar,
                             Vector u0, const NewtonConfig& cfg,
                             const NewtonSink& sink = {}) {
  return minimize(p, alpha, std::make_shared<const Vector>(std::move(xbar)),
                  std::move(u0), cfg, sink);
}

}  // namespace alnewton
