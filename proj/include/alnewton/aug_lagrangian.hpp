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

// Augmented Lagrangian of the dual LP,
//
//   Phi(u; alpha, xbar) = -b^T u + 1/(2 alpha) || (xbar + alpha (A^T u - c))_+ ||^2,
//
// a convex, piecewise quadratic, once differentiable function of u. Its
// minimizer u(alpha) gives the primal point (xbar + alpha (A^T u - c))_+.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <utility>

#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

// (u, alpha, xbar) together with the quantities every evaluation needs:
// slack t = xbar + alpha (A^T u - c), t_+, and the pattern z = [t > 0].
// Immutable once built.
class MeritPoint {
 public:
  static MeritPoint at(const LpProblem& p, Vector u, double alpha,
                       std::shared_ptr<const Vector> xbar) {
    ALNEWTON_REQUIRE(alpha > 0.0 && std::isfinite(alpha),
                     "MeritPoint: alpha must be positive and finite");
    ALNEWTON_REQUIRE(xbar != nullptr, "MeritPoint: xbar is null");
    detail::require_length(u, p.rows(), "MeritPoint(u)");
    detail::require_length(*xbar, p.cols(), "MeritPoint(xbar)");
    return MeritPoint(p, std::move(u), alpha, std::move(xbar));
  }

  static MeritPoint at(const LpProblem& p, Vector u, double alpha, Vector xbar) {
    return at(p, std::move(u), alpha,
              std::make_shared<const Vector>(std::move(xbar)));
  }

  const Vector& u() const { return u_; }
  double alpha() const { return alpha_; }
  const Vector& xbar() const { return *xbar_; }
  const std::shared_ptr<const Vector>& xbar_ptr() const { return xbar_; }
  const Vector& slack() const { return slack_; }
  const Vector& slack_plus() const { return slack_plus_; }
  const ActivePattern& pattern() const { return pattern_; }

 private:
  MeritPoint(const LpProblem& p, Vector u, double alpha,
             std::shared_ptr<const Vector> xbar)
      : u_(std::move(u)), alpha_(alpha), xbar_(std::move(xbar)) {
    slack_ = compute_slack(p, u_, alpha_, *xbar_);
    slack_plus_ = plus_part(slack_);
    std::vector<std::uint8_t> mask(slack_.size());
    for (std::size_t i = 0; i < slack_.size(); ++i) mask[i] = slack_[i] > 0.0;
    pattern_ = ActivePattern(std::move(mask));
  }

 public:
  // The slack formula, exposed so cache coherence can be checked.
  static Vector compute_slack(const LpProblem& p, std::span<const double> u,
                              double alpha, std::span<const double> xbar) {
    // Column-wise with an extended accumulator: A^T u and c nearly cancel
    // on the support of the solution.
    const auto& a = p.a();
    const auto offsets = a.col_offsets();
    const auto rows = a.row_indices();
    const auto vals = a.col_values();
    Vector t(static_cast<std::size_t>(p.cols()));
    for (Index j = 0; j < p.cols(); ++j) {
      detail::Accum s = -static_cast<detail::Accum>(p.c()[j]);
      for (Index q = offsets[j]; q < offsets[j + 1]; ++q) {
        s += static_cast<detail::Accum>(vals[q]) * u[static_cast<std::size_t>(rows[q])];
      }
      t[j] = static_cast<double>(xbar[static_cast<std::size_t>(j)] +
                                 static_cast<detail::Accum>(alpha) * s);
    }
    return t;
  }

 private:
  Vector u_;
  double alpha_ = 1.0;
  std::shared_ptr<const Vector> xbar_;
  Vector slack_;
  Vector slack_plus_;
  ActivePattern pattern_;
};

inline double evaluate(const LpProblem& p, const MeritPoint& mp) {
  const auto& sp = mp.slack_plus();
  double sq = 0.0;
  for (double v : sp) sq += v * v;
  return -dot(p.b(), mp.u()) + sq / (2.0 * mp.alpha());
}

// grad Phi = -b + A (xbar + alpha (A^T u - c))_+
inline Vector gradient(const LpProblem& p, const MeritPoint& mp) {
  const auto& a = p.a();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  const auto& t = mp.slack_plus();
  Vector g(static_cast<std::size_t>(p.rows()));
  for (Index i = 0; i < p.rows(); ++i) {
    detail::Accum s = -static_cast<detail::Accum>(p.b()[i]);
    for (Index q = offsets[i]; q < offsets[i + 1]; ++q) {
      s += static_cast<detail::Accum>(vals[q]) * t[static_cast<std::size_t>(cols[q])];
    }
    g[i] = static_cast<double>(s);
  }
  return g;
}

inline const ActivePattern& hessian_pattern(const MeritPoint& mp) {
  return mp.pattern();
}

// Generalized Hessian alpha * A D(z) A^T. The alpha factor comes from the
// chain rule through the inner alpha (A^T u - c).
inline SymmetricMatrix generalized_hessian(
    const LpProblem& p, const MeritPoint& mp,
    Index dense_threshold = kDefaultDenseThreshold) {
  return masked_normal_matrix(p.a(), mp.pattern(), mp.alpha(), dense_threshold);
}

// x = (xbar + alpha (A^T u - c))_+ ; the projection of xbar onto the optimal
// set when u minimizes Phi.
inline Vector primal_recovery(const MeritPoint& mp) { return mp.slack_plus(); }

// Magnitude of the rounding error in a computed gradient. Three sources:
// u itself is a double, so grad Phi can only move in steps of about
// |alpha A_z A^T| ulp(u); t_+ is rounded to double before it enters A t_+;
// and the sums are accumulated in detail::Accum. Below a small multiple of
// this, ||grad Phi|| carries no information.
inline double gradient_noise_floor(const LpProblem& p, const MeritPoint& mp) {
  constexpr double kDouble = 0x1p-53;
  constexpr double kAccum = std::numeric_limits<detail::Accum>::epsilon() / 2;
  const auto& a = p.a();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  const auto& u = mp.u();
  Vector carried(static_cast<std::size_t>(p.cols()), 0.0);
  for (Index i = 0; i < p.rows(); ++i) {
    const double ui = std::abs(u[static_cast<std::size_t>(i)]);
    for (Index q = offsets[i]; q < offsets[i + 1]; ++q) {
      carried[static_cast<std::size_t>(cols[q])] += std::abs(vals[q]) * ui;
    }
  }
  const auto& t = mp.slack();
  for (Index j = 0; j < p.cols(); ++j) {
    carried[j] = t[j] > 0.0
                     ? kDouble * (t[j] + mp.alpha() * carried[j]) +
                           kAccum * (std::abs(mp.xbar()[j]) +
                                     mp.alpha() * (carried[j] + std::abs(p.c()[j])))
                     : 0.0;
  }
  double worst = 0.0;
  for (Index i = 0; i < p.rows(); ++i) {
    double s = kAccum * std::abs(p.b()[i]);
    for (Index q = offsets[i]; q < offsets[i + 1]; ++q) {
      s += std::abs(vals[q]) * carried[static_cast<std::size_t>(cols[q])];
    }
    worst = std::max(worst, s);
  }
  return worst;
}

// Phi(u) - Phi(u + step * d) along q = A^T d, evaluated without forming the
// two large Phi values. With g = grad Phi(u), the exact piecewise quadratic
// expansion is
//
//   Phi(u + s d) - Phi(u) = s g^T d + 1/(2 alpha) sum_i r_i,
//   r_i = (t_i + s alpha q_i)_+^2 - (t_i)_+^2 - 2 s alpha q_i (t_i)_+,
//
// and each r_i is formed case by case so no large terms cancel.
inline double merit_decrease(const MeritPoint& mp, std::span<const double> q,
                             double slope, double step) {
  const auto& t = mp.slack();
  const double a = mp.alpha();
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double delta = step * a * q[i];
    const double ti = t[i];
    const double tn = ti + delta;
    if (ti > 0.0) {
      sum += tn > 0.0 ? delta * delta : -ti * (ti + 2.0 * delta);
    } else if (tn > 0.0) {
      sum += tn * tn;
    }
  }
  return -(step * slope + sum / (2.0 * a));
}

}  // namespace alnewton
