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

// Random solvable LP generator. Builds A, a primal point x and a dual point
// u, then defines b := A x and c := A^T u + 10 on the zero components of x,
// so (x, u) is an optimal primal-dual pair with zero gap by construction.
//
// Randomness comes from std::mt19937_64 (whose output sequence is fixed by
// the C++ standard) mapped to doubles with 53-bit arithmetic, so a GenSpec
// yields bit-identical instances on every conforming platform.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/sparse_core.hpp"

namespace alnewton {

inline constexpr const char* kGeneratorVersion = "1";

struct GenSpec {
  Index m = 1;
  Index n = 1;
  double density = 1.0;
  std::uint64_t seed = 0;
  double value_scale = 50.0;  // A entries uniform on (-value_scale, value_scale)
  // Probability that a component of x is exactly zero. 0 reproduces the
  // all-positive x of the plain rand() construction.
  double zero_fraction = 0.5;

  void validate() const {
    ALNEWTON_REQUIRE(m >= 1 && n >= 1, "GenSpec: m and n must be >= 1");
    ALNEWTON_REQUIRE(density > 0.0 && density <= 1.0,
                     "GenSpec: density must lie in (0, 1]");
    ALNEWTON_REQUIRE(value_scale > 0.0 && std::isfinite(value_scale),
                     "GenSpec: value_scale must be positive");
    ALNEWTON_REQUIRE(zero_fraction >= 0.0 && zero_fraction < 1.0,
                     "GenSpec: zero_fraction must lie in [0, 1)");
  }
};

struct GeneratedInstance {
  LpProblem problem;
  Vector x_star;
  Vector u_star;
  GenSpec spec;
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// Uniform doubles from a seeded 64-bit Mersenne twister.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  // [0, 1), multiples of 2^-53.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // (0, 1].
  double unit_open_low() { return 1.0 - unit(); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline constexpr int kRowRetries = 10;

// Column positions of one row: Bernoulli(density) per column, sampled by
// geometric gaps. Values are uniform on (-scale, scale), never zero.
inline void sample_row(UniformSource& rng, Index n, double density, double scale,
                       std::vector<Index>& cols, std::vector<double>& vals) {
  const double log_miss = density < 1.0 ? std::log1p(-density) : 0.0;
  Index j = -1;
  while (true) {
    Index gap = 0;
    if (density < 1.0) {
      const double g = std::floor(std::log(rng.unit_open_low()) / log_miss);
      if (!(g < static_cast<double>(n))) break;
      gap = static_cast<Index>(g);
    }
    j += gap + 1;
    if (j >= n) break;
    double v = 0.0;
    do {
      v = scale * (2.0 * rng.unit() - 1.0);
    } while (v == 0.0 || v == -scale);
    cols.push_back(j);
    vals.push_back(v);
  }
}

}  // namespace detail

inline GeneratedInstance generate(const GenSpec& spec) {
  spec.validate();
  UniformSource rng(spec.seed);

  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  offsets.reserve(static_cast<std::size_t>(spec.m) + 1);
  for (Index i = 0; i < spec.m; ++i) {
    int attempt = 0;
    while (static_cast<Index>(cols.size()) == offsets.back()) {
      if (attempt > detail::kRowRetries) {
        throw GenerationError(
            "generate: row " + std::to_string(i) + " stayed empty after " +
            std::to_string(detail::kRowRetries) +
            " regenerations; density too low for n=" + std::to_string(spec.n));
      }
      detail::sample_row(rng, spec.n, spec.density, spec.value_scale, cols, vals);
      ++attempt;
    }
    offsets.push_back(static_cast<Index>(cols.size()));
  }
  SparseMatrix a(spec.m, spec.n, std::move(offsets), std::move(cols), std::move(vals));

  Vector x(static_cast<std::size_t>(spec.n));
  for (double& xi : x) {
    const double keep = rng.unit();
    const double mag = rng.unit_open_low();
    xi = keep < spec.zero_fraction ? 0.0 : 10.0 * mag;
  }

  // Sign mask [r1 - r2 > 0] times (r3 - r4).
  Vector u(static_cast<std::size_t>(spec.m));
  for (double& ui : u) {
    const double r1 = rng.unit();
    const double r2 = rng.unit();
    const double r3 = rng.unit();
    const double r4 = rng.unit();
    ui = (r1 - r2 > 0.0) ? (r3 - r4) : 0.0;
  }

  Vector b = matvec(a, x);
  Vector c = matvec_transpose(a, u);
  for (Index j = 0; j < spec.n; ++j) {
    if (x[static_cast<std::size_t>(j)] == 0.0) c[static_cast<std::size_t>(j)] += 10.0;
  }

  return GeneratedInstance{
      LpProblem(std::move(a), std::move(b), std::move(c), spec.density),
      std::move(x), std::move(u), spec};
}

inline KktReport verify(const GeneratedInstance& inst) {
  return kkt_report(inst.problem, inst.x_star, inst.u_star);
}

}  // namespace alnewton
