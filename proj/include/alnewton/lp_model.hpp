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

// Standard-form LP  min c^T x  s.t.  A x = b, x >= 0,  its dual
// max b^T u  s.t.  A^T u <= c,  and the optimality residuals used in
// every report.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "alnewton/errors.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

class LpProblem {
 public:
  LpProblem(SparseMatrix a, Vector b, Vector c,
            std::optional<double> density_hint = std::nullopt)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)),
        density_hint_(density_hint) {
    ALNEWTON_REQUIRE(static_cast<Index>(b_.size()) == a_.rows(),
                     "LpProblem: b length must equal rows of A");
    ALNEWTON_REQUIRE(static_cast<Index>(c_.size()) == a_.cols(),
                     "LpProblem: c length must equal cols of A");
    ALNEWTON_REQUIRE(a_.nnz() > 0, "LpProblem: A has no stored entries");
    ALNEWTON_REQUIRE(all_finite(b_) && all_finite(c_),
                     "LpProblem: b and c must be finite");
    if (density_hint_) {
      ALNEWTON_REQUIRE(*density_hint_ > 0.0 && *density_hint_ <= 1.0,
                       "LpProblem: density hint must lie in (0, 1]");
    }
  }

  const SparseMatrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }
  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }
  std::optional<double> density_hint() const { return density_hint_; }

  // The hint when present, otherwise nnz / (m n).
  double density() const { return density_hint_.value_or(a_.density()); }

 private:
  SparseMatrix a_;
  Vector b_;
  Vector c_;
  std::optional<double> density_hint_;
};

struct PrimalDualSolution {
  Vector x;
  Vector u;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

struct KktReport {
  double primal_norm = 0.0;    // ||x||_2
  double primal_infeas = 0.0;  // ||A x - b||_inf
  double dual_infeas = 0.0;    // ||(A^T u - c)_+||_inf
  double duality_gap = 0.0;    // |c^T x - b^T u|

  // Scales for the relative forms.
  double b_norm_inf = 0.0;
  double c_norm_inf = 0.0;
  double primal_objective = 0.0;

  double relative_primal_infeas() const { return primal_infeas / (1.0 + b_norm_inf); }
  double relative_dual_infeas() const { return dual_infeas / (1.0 + c_norm_inf); }
  double relative_duality_gap() const {
    return duality_gap / (1.0 + std::abs(primal_objective));
  }
};

// Thresholds on the relative residuals that classify a point as optimal.
struct KktThresholds {
  double primal = 1e-7;
  double dual = 1e-9;
  double gap = 1e-6;

  bool passes(const KktReport& r) const {
    return r.relative_primal_infeas() <= primal &&
           r.relative_dual_infeas() <= dual && r.relative_duality_gap() <= gap;
  }
};

inline Vector plus_part(std::span<const double> v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
  return out;
}

inline std::pair<double, double> objective_values(const LpProblem& p,
                                                  std::span<const double> x,
                                                  std::span<const double> u) {
  detail::require_length(x, p.cols(), "objective_values(x)");
  detail::require_length(u, p.rows(), "objective_values(u)");
  return {dot(p.c(), x), dot(p.b(), u)};
}

inline std::pair<double, double> objective_values(const LpProblem& p,
                                                  const PrimalDualSolution& s) {
  return objective_values(p, s.x, s.u);
}

inline PrimalDualSolution make_solution(const LpProblem& p, Vector x, Vector u) {
  const auto [primal, dual] = objective_values(p, x, u);
  return {std::move(x), std::move(u), primal, dual};
}

inline KktReport kkt_report(const LpProblem& p, std::span<const double> x,
                            std::span<const double> u) {
  detail::require_length(x, p.cols(), "kkt_report(x)");
  detail::require_length(u, p.rows(), "kkt_report(u)");
  ALNEWTON_REQUIRE(all_finite(x) && all_finite(u),
                   "kkt_report: non-finite primal or dual values");
  KktReport r;
  r.primal_norm = norm2(x);

  const Vector ax = matvec(p.a(), x);
  for (Index i = 0; i < p.rows(); ++i) {
    r.primal_infeas = std::max(r.primal_infeas, std::abs(ax[i] - p.b()[i]));
  }
  const Vector atu = matvec_transpose(p.a(), u);
  for (Index j = 0; j < p.cols(); ++j) {
    r.dual_infeas = std::max(r.dual_infeas, atu[j] - p.c()[j]);
  }
  const auto [primal, dual] = objective_values(p, x, u);
  r.duality_gap = std::abs(primal - dual);
  r.b_norm_inf = norm_inf(p.b());
  r.c_norm_inf = norm_inf(p.c());
  r.primal_objective = primal;
  return r;
}

inline KktReport kkt_report(const LpProblem& p, const PrimalDualSolution& s) {
  return kkt_report(p, s.x, s.u);
}

}  // namespace alnewton
