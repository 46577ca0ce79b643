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

// Compressed-row sparse storage for the constraint matrix and the three
// kernels the dual Newton method is built on: A*v, A^T*w, the masked normal
// matrix A*D(z)*A^T, and a regularized symmetric positive definite solve.
//
// All reductions run in a fixed order (row-major, increasing index), so a
// given build produces bit-identical results run to run.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "alnewton/errors.hpp"

namespace alnewton {

using Index = std::int64_t;
using Vector = std::vector<double>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

namespace detail {

// Accumulator for sums that cancel heavily (slack and gradient). On
// platforms where long double is just double this costs nothing and gains
// nothing.
using Accum = long double;

inline std::string dims(Index a, Index b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

inline void require_length(std::span<const double> v, Index expected,
                           const char* what) {
  if (static_cast<Index>(v.size()) != expected) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" +
                            dims(static_cast<Index>(v.size()), expected) +
                            ")");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dense vector helpers. Sequential summation, index order.

inline double dot(std::span<const double> a, std::span<const double> b) {
  detail::require_length(b, static_cast<Index>(a.size()), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_inf(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------

// Indicator z of the columns that enter the generalized Hessian.
class ActivePattern {
 public:
  ActivePattern() = default;
  explicit ActivePattern(std::vector<std::uint8_t> mask)
      : mask_(std::move(mask)),
        active_count_(static_cast<Index>(
            std::count_if(mask_.begin(), mask_.end(),
                          [](std::uint8_t b) { return b != 0; }))) {}

  static ActivePattern all(Index n, bool value) {
    return ActivePattern(
        std::vector<std::uint8_t>(static_cast<std::size_t>(n), value ? 1 : 0));
  }

  Index size() const { return static_cast<Index>(mask_.size()); }
  Index active_count() const { return active_count_; }
  bool operator[](Index i) const { return mask_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  friend bool operator==(const ActivePattern& a, const ActivePattern& b) {
    return a.mask_ == b.mask_;
  }

 private:
  std::vector<std::uint8_t> mask_;
  Index active_count_ = 0;
};

// Immutable CSR matrix. A column-compressed copy of the pattern is kept
// alongside for the column-outer-product assembly of A*D(z)*A^T.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Validates the CSR invariants and drops explicitly stored zeros.
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values)
      : rows_(rows), cols_(cols) {
    ALNEWTON_REQUIRE(rows >= 0 && cols >= 0, "SparseMatrix: negative shape");
    ALNEWTON_REQUIRE(
        static_cast<Index>(row_offsets.size()) == rows + 1,
        "SparseMatrix: row_offsets must have rows+1 entries");
    ALNEWTON_REQUIRE(col_indices.size() == values.size(),
                     "SparseMatrix: col_indices/values length mismatch");
    ALNEWTON_REQUIRE(row_offsets.front() == 0,
                     "SparseMatrix: row_offsets[0] must be 0");
    ALNEWTON_REQUIRE(
        row_offsets.back() == static_cast<Index>(col_indices.size()),
        "SparseMatrix: row_offsets[rows] must equal nnz");
    row_offsets_.clear();
    row_offsets_.reserve(row_offsets.size());
    row_offsets_.push_back(0);
    for (Index i = 0; i < rows; ++i) {
      const Index begin = row_offsets[static_cast<std::size_t>(i)];
      const Index end = row_offsets[static_cast<std::size_t>(i) + 1];
      ALNEWTON_REQUIRE(begin <= end,
                       "SparseMatrix: row_offsets must be non-decreasing");
      Index prev = -1;
      for (Index p = begin; p < end; ++p) {
        const Index j = col_indices[static_cast<std::size_t>(p)];
        ALNEWTON_REQUIRE(j > prev && j < cols,
                         "SparseMatrix: column indices must be strictly "
                         "increasing and < cols within row " +
                             std::to_string(i));
        prev = j;
        const double v = values[static_cast<std::size_t>(p)];
        if (v != 0.0) {
          col_indices_.push_back(j);
          values_.push_back(v);
        }
      }
      row_offsets_.push_back(static_cast<Index>(col_indices_.size()));
    }
    build_columns();
  }

  // Duplicates are summed; entries that sum to zero are dropped.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
      ALNEWTON_REQUIRE(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
                       "SparseMatrix::from_triplets: index out of range (" +
                           std::to_string(t.row) + "," +
                           std::to_string(t.col) + ")");
    }
    std::stable_sort(triplets.begin(), triplets.end(),
                     [](const Triplet& a, const Triplet& b) {
                       return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                     });
    std::vector<Index> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<Index> cols_out;
    std::vector<double> vals_out;
    cols_out.reserve(triplets.size());
    vals_out.reserve(triplets.size());
    std::size_t k = 0;
    for (Index i = 0; i < rows; ++i) {
      while (k < triplets.size() && triplets[k].row == i) {
        const Index j = triplets[k].col;
        double sum = 0.0;
        while (k < triplets.size() && triplets[k].row == i &&
               triplets[k].col == j) {
          sum += triplets[k].value;
          ++k;
        }
        cols_out.push_back(j);
        vals_out.push_back(sum);
      }
      offsets[static_cast<std::size_t>(i) + 1] =
          static_cast<Index>(cols_out.size());
    }
    return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out),
                        std::move(vals_out));
  }

  static SparseMatrix identity(Index n) {
    std::vector<Index> offsets(static_cast<std::size_t>(n) + 1);
    std::iota(offsets.begin(), offsets.end(), Index{0});
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    return SparseMatrix(n, n, std::move(offsets), std::move(idx),
                        Vector(static_cast<std::size_t>(n), 1.0));
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  double density() const {
    return rows_ * cols_ == 0
               ? 0.0
               : static_cast<double>(nnz()) /
                     (static_cast<double>(rows_) * static_cast<double>(cols_));
  }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  // Column view: for column j, entries col_offsets[j]..col_offsets[j+1] of
  // row_indices / col_values, rows increasing.
  std::span<const Index> col_offsets() const { return col_offsets_; }
  std::span<const Index> row_indices() const { return row_indices_; }
  std::span<const double> col_values() const { return col_values_; }

  double max_abs() const { return norm_inf(values_); }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.row_offsets_ == b.row_offsets_ &&
           a.col_indices_ == b.col_indices_ && a.values_ == b.values_;
  }

 private:
  void build_columns() {
    col_offsets_.assign(static_cast<std::size_t>(cols_) + 1, 0);
    for (Index j : col_indices_) ++col_offsets_[static_cast<std::size_t>(j) + 1];
    std::partial_sum(col_offsets_.begin(), col_offsets_.end(),
                     col_offsets_.begin());
    row_indices_.resize(col_indices_.size());
    col_values_.resize(values_.size());
    std::vector<Index> next(col_offsets_.begin(), col_offsets_.end() - 1);
    for (Index i = 0; i < rows_; ++i) {
      for (Index p = row_offsets_[static_cast<std::size_t>(i)];
           p < row_offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
        const auto j = static_cast<std::size_t>(col_indices_[static_cast<std::size_t>(p)]);
        const auto dst = static_cast<std::size_t>(next[j]++);
        row_indices_[dst] = i;
        col_values_[dst] = values_[static_cast<std::size_t>(p)];
      }
    }
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
  std::vector<Index> col_offsets_{0};
  std::vector<Index> row_indices_;
  std::vector<double> col_values_;
};

// y = A v.
inline Vector matvec(const SparseMatrix& a, std::span<const double> v) {
  detail::require_length(v, a.cols(), "matvec");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  Vector y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      s += vals[p] * v[static_cast<std::size_t>(cols[p])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

// y = A^T w, scattered row by row from the CSR arrays.
inline Vector matvec_transpose(const SparseMatrix& a, std::span<const double> w) {
  detail::require_length(w, a.rows(), "matvec_transpose");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  Vector y(static_cast<std::size_t>(a.cols()), 0.0);
  for (Index i = 0; i < a.rows(); ++i) {
    const double wi = w[static_cast<std::size_t>(i)];
    if (wi == 0.0) continue;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      y[static_cast<std::size_t>(cols[p])] += vals[p] * wi;
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Symmetric matrices produced by masked_normal_matrix.

// Full m x m storage, row-major.
struct DenseSymmetric {
  Index dim = 0;
  std::vector<double> data;

  double operator()(Index i, Index j) const {
    return data[static_cast<std::size_t>(i * dim + j)];
  }
};

// scale * A * D(z) * A^T, applied without assembly. The referenced matrix
// must outlive the operator.
struct MaskedNormalOperator {
  const SparseMatrix* a = nullptr;
  ActivePattern pattern;
  double scale = 1.0;
  Vector diagonal;

  Index dim() const { return a->rows(); }

  Vector apply(std::span<const double> v) const {
    const auto offsets = a->row_offsets();
    const auto cols = a->col_indices();
    const auto vals = a->values();
    Vector t(static_cast<std::size_t>(a->cols()), 0.0);
    for (Index i = 0; i < a->rows(); ++i) {
      const double vi = v[static_cast<std::size_t>(i)];
      if (vi == 0.0) continue;
      for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
        const Index j = cols[p];
        if (pattern[j]) t[static_cast<std::size_t>(j)] += vals[p] * vi;
      }
    }
    Vector y(static_cast<std::size_t>(a->rows()), 0.0);
    for (Index i = 0; i < a->rows(); ++i) {
      double s = 0.0;
      for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
        s += vals[p] * t[static_cast<std::size_t>(cols[p])];
      }
      y[static_cast<std::size_t>(i)] = scale * s;
    }
    return y;
  }
};

class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(DenseSymmetric dense) : rep_(std::move(dense)) {}
  explicit SymmetricMatrix(MaskedNormalOperator op) : rep_(std::move(op)) {}

  Index dim() const {
    return std::visit([](const auto& r) -> Index {
      if constexpr (std::is_same_v<std::decay_t<decltype(r)>, DenseSymmetric>) {
        return r.dim;
      } else {
        return r.dim();
      }
    }, rep_);
  }

  bool is_dense() const { return std::holds_alternative<DenseSymmetric>(rep_); }
  const DenseSymmetric& dense() const { return std::get<DenseSymmetric>(rep_); }
  const MaskedNormalOperator& op() const {
    return std::get<MaskedNormalOperator>(rep_);
  }

  Vector apply(std::span<const double> v) const {
    detail::require_length(v, dim(), "SymmetricMatrix::apply");
    if (is_dense()) {
      const auto& d = dense();
      Vector y(static_cast<std::size_t>(d.dim), 0.0);
      for (Index i = 0; i < d.dim; ++i) {
        double s = 0.0;
        for (Index j = 0; j < d.dim; ++j) s += d(i, j) * v[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
      }
      return y;
    }
    return op().apply(v);
  }

 private:
  std::variant<DenseSymmetric, MaskedNormalOperator> rep_;
};

// Sum of the diagonal; for a PSD matrix this bounds the spectral norm.
inline double trace(const SymmetricMatrix& h) {
  double t = 0.0;
  if (h.is_dense()) {
    for (Index i = 0; i < h.dim(); ++i) t += h.dense()(i, i);
  } else {
    for (double d : h.op().diagonal) t += d;
  }
  return t;
}

inline constexpr Index kDefaultDenseThreshold = 2000;

// scale * A * D(z) * A^T, accumulated as outer products of the active
// columns only. Dense when rows <= dense_threshold, otherwise a matrix-free
// operator that carries its diagonal for preconditioning.
inline SymmetricMatrix masked_normal_matrix(
    const SparseMatrix& a, const ActivePattern& z, double scale = 1.0,
    Index dense_threshold = kDefaultDenseThreshold) {
  if (z.size() != a.cols()) {
    throw ContractViolation("masked_normal_matrix: dimension mismatch (" +
                            detail::dims(z.size(), a.cols()) + ")");
  }
  const Index m = a.rows();
  const auto col_offsets = a.col_offsets();
  const auto rows = a.row_indices();
  const auto vals = a.col_values();

  if (m <= dense_threshold) {
    DenseSymmetric h{m, std::vector<double>(static_cast<std::size_t>(m * m), 0.0)};
    for (Index j = 0; j < a.cols(); ++j) {
      if (!z[j]) continue;
      const Index begin = col_offsets[j];
      const Index end = col_offsets[j + 1];
      for (Index p = begin; p < end; ++p) {
        const Index r = rows[p];
        const double vp = vals[p];
        double* row = h.data.data() + r * m;
        for (Index q = begin; q <= p; ++q) row[rows[q]] += vp * vals[q];
      }
    }
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j <= i; ++j) {
        const double v = scale * h.data[static_cast<std::size_t>(i * m + j)];
        h.data[static_cast<std::size_t>(i * m + j)] = v;
        h.data[static_cast<std::size_t>(j * m + i)] = v;
      }
    }
    return SymmetricMatrix(std::move(h));
  }

  Vector diag(static_cast<std::size_t>(m), 0.0);
  for (Index j = 0; j < a.cols(); ++j) {
    if (!z[j]) continue;
    for (Index p = col_offsets[j]; p < col_offsets[j + 1]; ++p) {
      diag[static_cast<std::size_t>(rows[p])] += vals[p] * vals[p];
    }
  }
  for (double& d : diag) d *= scale;
  return SymmetricMatrix(MaskedNormalOperator{&a, z, scale, std::move(diag)});
}

// ---------------------------------------------------------------------------

struct SpdSolveOptions {
  double cg_tolerance = 1e-10;  // relative residual, iterative path only
  Index cg_max_iterations = 0;  // 0 selects max(1000, 2*m)
};

struct SpdSolveResult {
  Vector d;
  Index iterations = 0;  // 0 for the direct path
  double relative_residual = 0.0;
  bool converged = true;
};

// Solves (H + reg*I) d = g. Dense input goes through a Cholesky
// factorization; operator input through Jacobi-preconditioned CG started at
// zero. CG that runs out of iterations returns its last iterate with
// converged=false: every CG iterate still satisfies d^T (H+reg I) d = g^T d.
inline SpdSolveResult spd_solve_detailed(const SymmetricMatrix& h, double reg,
                                         std::span<const double> g,
                                         const SpdSolveOptions& opts = {}) {
  ALNEWTON_REQUIRE(reg > 0.0 && std::isfinite(reg),
                   "spd_solve: regularization must be positive");
  const Index m = h.dim();
  detail::require_length(g, m, "spd_solve");
  SpdSolveResult out;
  if (m == 0) return out;
  const double gnorm = norm2(g);

  if (h.is_dense()) {
    const auto& hd = h.dense();
    Eigen::MatrixXd mat =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(hd.data.data(), m, m);
    mat.diagonal().array() += reg;
    Eigen::LLT<Eigen::MatrixXd> llt(mat);
    if (llt.info() != Eigen::Success) {
      throw NumericalFailure(
          "spd_solve: Cholesky factorization failed (dim=" + std::to_string(m) +
          ", min diagonal=" + std::to_string(mat.diagonal().minCoeff()) +
          ", reg=" + std::to_string(reg) + ")");
    }
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(g.data(), m);
    Eigen::VectorXd sol = llt.solve(rhs);
    if (!sol.allFinite()) {
      throw NumericalFailure("spd_solve: non-finite solution from Cholesky");
    }
    out.d.assign(sol.data(), sol.data() + m);
    Vector r = h.apply(out.d);
    for (Index i = 0; i < m; ++i) {
      r[static_cast<std::size_t>(i)] +=
          reg * out.d[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
    }
    out.relative_residual = gnorm > 0.0 ? norm2(r) / gnorm : norm2(r);
    return out;
  }

  const auto& op = h.op();
  const Index max_it =
      opts.cg_max_iterations > 0 ? opts.cg_max_iterations
                                 : std::max<Index>(1000, 2 * m);
  Vector x(static_cast<std::size_t>(m), 0.0);
  Vector r(g.begin(), g.end());
  Vector inv_diag(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    inv_diag[static_cast<std::size_t>(i)] = 1.0 / (op.diagonal[static_cast<std::size_t>(i)] + reg);
  }
  Vector zvec(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) zvec[i] = inv_diag[i] * r[i];
  Vector p = zvec;
  double rz = dot(r, zvec);
  double rnorm = gnorm;
  Index it = 0;
  const double target = opts.cg_tolerance * gnorm;
  while (rnorm > target && it < max_it) {
    Vector hp = op.apply(p);
    for (Index i = 0; i < m; ++i) hp[i] += reg * p[i];
    const double php = dot(p, hp);
    if (!(php > 0.0) || !std::isfinite(php)) {
      throw NumericalFailure("spd_solve: CG breakdown at iteration " +
                             std::to_string(it) + " (p^T H p = " +
                             std::to_string(php) + ")");
    }
    const double step = rz / php;
    for (Index i = 0; i < m; ++i) {
      x[i] += step * p[i];
      r[i] -= step * hp[i];
    }
    for (Index i = 0; i < m; ++i) zvec[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, zvec);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (Index i = 0; i < m; ++i) p[i] = zvec[i] + beta * p[i];
    rnorm = norm2(r);
    ++it;
  }
  out.d = std::move(x);
  out.iterations = it;
  out.relative_residual = gnorm > 0.0 ? rnorm / gnorm : rnorm;
  out.converged = rnorm <= target;
  return out;
}

inline Vector spd_solve(const SymmetricMatrix& h, double reg,
                        std::span<const double> g,
                        const SpdSolveOptions& opts = {}) {
  return spd_solve_detailed(h, reg, g, opts).d;
}

}  // namespace alnewton
