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

#include <gtest/gtest.h>

#include <cmath>

#include "alnewton/lpgen.hpp"
#include "alnewton/oracle.hpp"
#include "alnewton/outer_loop.hpp"

namespace alnewton {
namespace {

TEST(SolverConfig, Validation) {
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  SolverConfig c;
  EXPECT_NO_THROW(c.validate(p));
  c.outer_tol = 0.0;
  EXPECT_THROW(c.validate(p), ContractViolation);
  c = {};
  c.x0 = Vector{1.0, -1.0};
  EXPECT_THROW(c.validate(p), ContractViolation);
  c = {};
  c.x0 = Vector{1.0};
  EXPECT_THROW(c.validate(p), ContractViolation);
  c = {};
  c.max_outer = 0;
  EXPECT_THROW(c.validate(p), ContractViolation);
}

TEST(DefaultAlpha, UsesDensityHintThenFill) {
  LpProblem hinted(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0}, 0.25);
  EXPECT_DOUBLE_EQ(default_alpha(hinted), 20.0);
  LpProblem plain(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  EXPECT_DOUBLE_EQ(default_alpha(plain), 10.0 / std::sqrt(0.5));
}

TEST(Solve, DiagonalLp) {
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  SolverConfig cfg;
  cfg.alpha = 10.0;
  const auto r = solve(p, cfg);
  EXPECT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_LE(r.outer_iterations, 2);
  EXPECT_LE(r.kkt.primal_infeas, 1e-8);
  EXPECT_LE(r.kkt.dual_infeas, 1e-8);
  EXPECT_LE(r.kkt.duality_gap, 1e-8);
  EXPECT_NEAR(r.solution.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.solution.u[1], 1.0, 1e-8);
}

TEST(Solve, GeneratedInstance) {
  auto inst = generate({100, 250, 0.2, 7});
  const auto r = solve(inst.problem, SolverConfig{});
  ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_LE(r.kkt.primal_infeas, 1e-7);
  EXPECT_LE(r.kkt.dual_infeas, 1e-7);
  EXPECT_LE(r.kkt.duality_gap, 1e-6 * (1.0 + std::abs(r.kkt.primal_objective)));
  EXPECT_TRUE(r.thresholds.passes(r.kkt));
}

TEST(Solve, WarmStartAtNormalSolutionTakesOneStep) {
  auto inst = generate({100, 250, 0.2, 7});
  const auto first = solve(inst.problem, SolverConfig{});
  ASSERT_EQ(first.status, SolveStatus::kOptimal);
  SolverConfig cfg;
  cfg.x0 = first.solution.x;
  const auto second = solve(inst.problem, cfg);
  EXPECT_EQ(second.status, SolveStatus::kOptimal) << second.message;
  EXPECT_EQ(second.outer_iterations, 1);
  EXPECT_TRUE(second.one_step());
}

TEST(Solve, ExitInvariantsOnGeneratedSuite) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index m = 20 + 10 * static_cast<Index>(seed);
    auto inst = generate({m, 3 * m, 0.2, seed});
    const auto& p = inst.problem;
    std::vector<OuterTrace> trace;
    const auto r = solve(p, SolverConfig{}, {{}, [&](const OuterTrace& t) { trace.push_back(t); }});
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << "seed " << seed << ": " << r.message;
    EXPECT_LE(r.kkt.dual_infeas, 1e-7 * (1.0 + norm_inf(p.c())));
    for (double x : r.solution.x) EXPECT_GE(x, 0.0);
    const Vector atu = matvec_transpose(p.a(), r.solution.u);
    double comp = 0.0;
    for (Index j = 0; j < p.cols(); ++j) comp += r.solution.x[j] * (p.c()[j] - atu[j]);
    EXPECT_LE(comp, r.thresholds.gap * (1.0 + std::abs(r.kkt.primal_objective)));
    ASSERT_EQ(static_cast<int>(trace.size()), r.outer_iterations);
    for (const auto& t : trace) EXPECT_TRUE(std::isfinite(t.primal_change));
  }
}

TEST(Solve, TinyAlphaHitsOuterCap) {
  auto inst = generate({30, 70, 0.3, 3});
  SolverConfig cfg;
  cfg.alpha = 1e-6;
  const auto r = solve(inst.problem, cfg);
  EXPECT_EQ(r.status, SolveStatus::kOuterCap);
  EXPECT_EQ(r.outer_iterations, cfg.max_outer);
  for (double x : r.solution.x) EXPECT_GE(x, 0.0);
}

TEST(Solve, AlphaEscalationRecoversFromTinyAlpha) {
  auto inst = generate({30, 70, 0.3, 3});
  SolverConfig cfg;
  cfg.alpha = 1e-6;
  cfg.alpha_escalation = true;
  cfg.max_escalations = 8;
  const auto r = solve(inst.problem, cfg);
  EXPECT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_GT(r.escalations, 0);
  EXPECT_DOUBLE_EQ(r.alpha, 1e-6 * std::pow(10.0, r.escalations));
}

TEST(Solve, InfeasiblePrimalIsNotOptimal) {
  // x1 + x2 = -1 with x >= 0 has no solution; the dual is unbounded.
  LpProblem p(SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}), Vector{-1.0},
              Vector{1.0, 1.0});
  const auto r = solve(p, SolverConfig{});
  EXPECT_NE(r.status, SolveStatus::kOptimal);
  EXPECT_FALSE(r.message.empty());
}

TEST(LeastNormCheck, UniqueOptimumIsZero) {
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  const auto o = enumerate_solve(p);
  EXPECT_NEAR(least_norm_check(p, Vector{1.0, 1.0}, o.optimal_vertices), 0.0, 1e-8);
}

TEST(LeastNormCheck, OptimalEdge) {
  // Optimal face is the edge (2,0,0)-(0,2,0); least-norm point (1,1,0).
  LpProblem p(SparseMatrix::from_triplets(1, 3, {{0, 0, 1.0}, {0, 1, 1.0}, {0, 2, 1.0}}),
              Vector{2.0}, Vector{1.0, 1.0, 2.0});
  const auto o = enumerate_solve(p);
  EXPECT_EQ(o.optimal_vertices.size(), 2u);
  EXPECT_LE(std::abs(least_norm_check(p, Vector{1.0, 1.0, 0.0}, o.optimal_vertices)), 1e-6);
  EXPECT_GT(least_norm_check(p, Vector{2.0, 0.0, 0.0}, o.optimal_vertices), 0.5);
}

TEST(LeastNormCheck, EmptyOracleSetThrows) {
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  EXPECT_THROW(least_norm_check(p, Vector{1.0, 1.0}, {}), ContractViolation);
}

TEST(LeastNormCheck, SolverOutputOnTinyInstances) {
  int nonunique = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index m = 2 + static_cast<Index>(seed % 5);
    const Index n = m + 3 + static_cast<Index>(seed % 2);
    auto inst = generate({m, n, 0.7, 500 + seed});
    const auto& p = inst.problem;
    const auto o = enumerate_solve(p);
    ASSERT_EQ(o.status, OracleStatus::kOptimal);
    const auto r = solve(p, SolverConfig{});
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << "seed " << seed << ": " << r.message;
    const double gap = least_norm_check(p, r.solution.x, o.optimal_vertices, o.optimal_rays);
    EXPECT_LE(std::abs(gap), 1e-6) << "seed " << seed;
    if (o.optimal_vertices.size() > 1 || !o.optimal_rays.empty()) ++nonunique;
  }
  std::printf("%d of 20 tiny instances have a non-unique optimum\n", nonunique);
}

}  // namespace
}  // namespace alnewton
