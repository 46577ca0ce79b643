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

// Brute-force reference solver for tiny LPs. Enumerates every basic
// solution to get the optimal value and optimal vertex set, then finds the
// least-norm point of the optimal face by active-set enumeration. Meant for
// tests; never call it on anything beyond the size guard.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

enum class OracleStatus { kOptimal, kInfeasible, kUnbounded };

struct OracleResult {
  double optimal_value = 0.0;
  std::vector<Vector> optimal_vertices;
  // Recession directions of the optimal face (nonnegative, zero cost).
  std::vector<Vector> optimal_rays;
  Vector min_norm_solution;
  OracleStatus status = OracleStatus::kOptimal;
};

namespace oracle_detail {

inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kTol = 1e-9;

inline Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p) {
      d(i, a.col_indices()[p]) = a.values()[p];
    }
  }
  return d;
}

inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(Index n, Index k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    Index i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline Vector to_vector(const Eigen::VectorXd& v) {
  return Vector(v.data(), v.data() + v.size());
}

inline bool contains(const std::vector<Vector>& set, const Vector& v) {
  for (const auto& w : set) {
    double diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) diff = std::max(diff, std::abs(v[i] - w[i]));
    if (diff <= kTol * (1.0 + norm_inf(v))) return true;
  }
  return false;
}

// Basic nonnegative solutions of M y = rhs, M with full row rank.
inline std::vector<Vector> basic_solutions(const Eigen::MatrixXd& m,
                                           const Eigen::VectorXd& rhs) {
  const Index r = m.rows();
  const Index n = m.cols();
  std::vector<Vector> out;
  const double rhs_scale = 1.0 + rhs.cwiseAbs().maxCoeff();
  for_each_subset(n, r, [&](const std::vector<Index>& cols) {
    Eigen::MatrixXd basis(r, r);
    for (Index k = 0; k < r; ++k) basis.col(k) = m.col(cols[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    lu.setThreshold(kRankThreshold);
    if (lu.rank() < r) return;
    const Eigen::VectorXd yb = lu.solve(rhs);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Index k = 0; k < r; ++k) y(cols[k]) = yb(k);
    const double yscale = 1.0 + y.cwiseAbs().maxCoeff();
    if (y.minCoeff() < -kTol * yscale) return;
    if ((m * y - rhs).cwiseAbs().maxCoeff() > kTol * rhs_scale * yscale) return;
    y = y.cwiseMax(0.0);
    Vector v = to_vector(y);
    if (!contains(out, v)) out.push_back(std::move(v));
  });
  return out;
}

}  // namespace oracle_detail

// Least-norm point of {x >= 0 : A x = b, c^T x = c^T v0}, restricted to the
// union of supports of the given optimal vertices and rays. Each subset of
// that support is tried as the free set; the minimizer is the least-norm
// solution of the equality system on its own support, so the best feasible
// candidate is the answer.
inline Vector min_norm_over_face(const LpProblem& p,
                                 const std::vector<Vector>& optimal_vertices,
                                 const std::vector<Vector>& optimal_rays = {}) {
  ALNEWTON_REQUIRE(!optimal_vertices.empty(),
                   "min_norm_over_face: empty optimal vertex set");
  const Index n = p.cols();
  const Index m = p.rows();
  std::vector<Index> support;
  for (Index j = 0; j < n; ++j) {
    bool used = false;
    for (const auto& v : optimal_vertices) used = used || v[j] > 1e-12;
    for (const auto& d : optimal_rays) used = used || d[j] > 1e-12;
    if (used) support.push_back(j);
  }
  const Index s = static_cast<Index>(support.size());
  ALNEWTON_REQUIRE(s <= 20, "min_norm_over_face: face support exceeds 20 columns");

  const Eigen::MatrixXd a = oracle_detail::dense(p.a());
  const double fstar = dot(p.c(), optimal_vertices.front());
  Eigen::MatrixXd sys(m + 1, n);
  sys.topRows(m) = a;
  for (Index j = 0; j < n; ++j) sys(m, j) = p.c()[j];
  Eigen::VectorXd rhs(m + 1);
  for (Index i = 0; i < m; ++i) rhs(i) = p.b()[i];
  rhs(m) = fstar;
  const double rhs_scale = 1.0 + rhs.cwiseAbs().maxCoeff();

  Vector best = optimal_vertices.front();
  double best_norm = norm2(best);
  for (const auto& v : optimal_vertices) {
    if (norm2(v) < best_norm) {
      best = v;
      best_norm = norm2(v);
    }
  }
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s); ++mask) {
    std::vector<Index> free;
    for (Index k = 0; k < s; ++k) {
      if (mask & (std::uint32_t{1} << k)) free.push_back(support[k]);
    }
    Eigen::MatrixXd sub(m + 1, static_cast<Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) sub.col(static_cast<Index>(k)) = sys.col(free[k]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
    cod.setThreshold(oracle_detail::kRankThreshold);
    const Eigen::VectorXd xf = cod.solve(rhs);
    const double xscale = 1.0 + xf.cwiseAbs().maxCoeff();
    if (xf.minCoeff() < -oracle_detail::kTol * xscale) continue;
    if ((sub * xf - rhs).cwiseAbs().maxCoeff() > oracle_detail::kTol * rhs_scale * xscale) continue;
    const double nrm = xf.norm();
    if (nrm < best_norm) {
      best_norm = nrm;
      best.assign(static_cast<std::size_t>(n), 0.0);
      for (std::size_t k = 0; k < free.size(); ++k) best[free[k]] = std::max(0.0, xf(static_cast<Index>(k)));
    }
  }
  return best;
}

inline OracleResult enumerate_solve(const LpProblem& p) {
  const Index m = p.rows();
  const Index n = p.cols();
  ALNEWTON_REQUIRE(n <= 20, "enumerate_solve: n must be <= 20");
  ALNEWTON_REQUIRE(oracle_detail::binomial(n, std::min(m, n)) <= 1e6,
                   "enumerate_solve: C(n, m) exceeds 1e6");

  const Eigen::MatrixXd a = oracle_detail::dense(p.a());
  Eigen::VectorXd b(m), c(n);
  for (Index i = 0; i < m; ++i) b(i) = p.b()[i];
  for (Index j = 0; j < n; ++j) c(j) = p.c()[j];

  OracleResult res;

  // Drop dependent rows: pivoted QR of A^T picks an independent row set.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(oracle_detail::kRankThreshold);
  const Index r = qr.rank();
  Eigen::MatrixXd ar(r, n);
  Eigen::VectorXd br(r);
  for (Index k = 0; k < r; ++k) {
    const Index row = qr.colsPermutation().indices()(k);
    ar.row(k) = a.row(row);
    br(k) = b(row);
  }
  {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(oracle_detail::kRankThreshold);
    const Eigen::VectorXd xls = cod.solve(b);
    if ((a * xls - b).cwiseAbs().maxCoeff() >
        oracle_detail::kTol * (1.0 + b.cwiseAbs().maxCoeff()) * (1.0 + xls.cwiseAbs().maxCoeff())) {
      res.status = OracleStatus::kInfeasible;
      return res;
    }
  }

  const std::vector<Vector> vertices = oracle_detail::basic_solutions(ar, br);
  if (vertices.empty()) {
    res.status = OracleStatus::kInfeasible;
    return res;
  }

  // Extreme rays of {d >= 0, A d = 0}, normalized by sum(d) = 1.
  std::vector<Vector> rays;
  {
    Eigen::MatrixXd ray_sys(r + 1, n);
    ray_sys.topRows(r) = ar;
    ray_sys.row(r).setOnes();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ray_sys);
    lu.setThreshold(oracle_detail::kRankThreshold);
    if (lu.rank() == r + 1 && r + 1 <= n) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r + 1);
      rhs(r) = 1.0;
      rays = oracle_detail::basic_solutions(ray_sys, rhs);
    }
  }
  const double cscale = 1.0 + c.cwiseAbs().maxCoeff();
  for (const auto& d : rays) {
    if (dot(p.c(), d) < -oracle_detail::kTol * cscale) {
      res.status = OracleStatus::kUnbounded;
      res.optimal_value = -std::numeric_limits<double>::infinity();
      return res;
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::min(best, dot(p.c(), v));
  res.optimal_value = best;
  for (const auto& v : vertices) {
    if (dot(p.c(), v) <= best + oracle_detail::kTol * (1.0 + std::abs(best))) {
      res.optimal_vertices.push_back(v);
    }
  }
  for (const auto& d : rays) {
    if (std::abs(dot(p.c(), d)) <= oracle_detail::kTol * cscale) res.optimal_rays.push_back(d);
  }
  res.min_norm_solution = min_norm_over_face(p, res.optimal_vertices, res.optimal_rays);
  res.status = OracleStatus::kOptimal;
  return res;
}

// ||x||_2 minus the least norm over the optimal face spanned by the given
// optimal vertices; near zero when x is the normal solution.
inline double least_norm_check(const LpProblem& p, std::span<const double> x,
                               const std::vector<Vector>& optimal_vertices,
                               const std::vector<Vector>& optimal_rays = {}) {
  ALNEWTON_REQUIRE(!optimal_vertices.empty(), "least_norm_check: empty oracle set");
  detail::require_length(x, p.cols(), "least_norm_check");
  return norm2(x) - norm2(min_norm_over_face(p, optimal_vertices, optimal_rays));
}

}  // namespace alnewton
