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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Details for each criterion are printed before its verdict.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "alnewton/alnewton.hpp"
#include "alnewton/oracle.hpp"
#include "test_util.hpp"

#ifndef ALNEWTON_CLI_PATH
#error "ALNEWTON_CLI_PATH must point at the built alnewton binary"
#endif

namespace {

using namespace alnewton;
namespace fs = std::filesystem;

struct Verdict {
  int failures = 0;
  void report(int id, bool pass, const std::string& what) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct DeskRun {
  GenSpec spec;
  LpProblem problem;
  SolveReport report;
  std::vector<NewtonTrace> trace;
};

std::vector<DeskRun> desk_runs;

// 1. Residual magnitudes on desk-scale instances with the default settings.
bool criterion_1() {
  const GenSpec shapes[] = {{200, 500, 0.1}, {100, 1000, 0.3}, {400, 600, 0.05}};
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int k = 0; k < 20; ++k) {
    GenSpec spec = shapes[k % 3];
    spec.seed = 1000 + static_cast<std::uint64_t>(k);
    auto inst = generate(spec);
    DeskRun run{spec, inst.problem, {}, {}};
    SolverConfig cfg;  // alpha = 10/sqrt(d), tol = 1e-10, x0 = 0
    run.report = solve(run.problem, cfg,
                       {[&](const NewtonTrace& t) { run.trace.push_back(t); }, {}});
    const auto& r = run.report;
    const double b_ok = r.kkt.primal_infeas / (1.0 + r.kkt.b_norm_inf);
    const double c_ok = r.kkt.dual_infeas / (1.0 + r.kkt.c_norm_inf);
    const double g_ok = r.kkt.duality_gap / (1.0 + std::abs(r.kkt.primal_objective));
    const bool pass = r.status == SolveStatus::kOptimal && b_ok <= 1e-7 && c_ok <= 1e-9 &&
                      g_ok <= 1e-6;
    std::printf("  (%ld,%ld,%g) seed %llu: %s k=%d inner=%d  %.4e %.4e %.4e  %.3fs\n",
                static_cast<long>(spec.m), static_cast<long>(spec.n), spec.density,
                static_cast<unsigned long long>(spec.seed), to_string(r.status),
                r.outer_iterations, r.inner_iterations_total, r.kkt.primal_infeas,
                r.kkt.dual_infeas, r.kkt.duality_gap, r.wall_time_seconds);
    ok = ok && pass;
    desk_runs.push_back(std::move(run));
  }
  std::printf("  total %.1fs\n", seconds_since(t0));
  return ok;
}

// 2. Least-norm solution on tiny instances, half of them with non-unique optima.
bool criterion_2() {
  int unique = 0, nonunique = 0;
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t seed = 0; unique + nonunique < 20 && seed < 10000; ++seed) {
    const Index m = 2 + static_cast<Index>(seed % 5);
    const Index n = std::min<Index>(10, m + 2 + static_cast<Index>(seed % 4));
    auto inst = generate({m, n, 0.6, 70000 + seed});
    const auto& p = inst.problem;
    const auto o = enumerate_solve(p);
    if (o.status != OracleStatus::kOptimal) continue;
    const bool multi = o.optimal_vertices.size() > 1 || !o.optimal_rays.empty();
    if (multi ? nonunique >= 10 : unique >= 10) continue;
    (multi ? nonunique : unique)++;
    const auto r = solve(p, SolverConfig{});
    const Vector xn = min_norm_over_face(p, o.optimal_vertices, o.optimal_rays);
    double diff = 0.0;
    for (Index j = 0; j < n; ++j) diff = std::max(diff, std::abs(r.solution.x[j] - xn[j]));
    worst = std::max(worst, diff);
    const bool pass = r.status == SolveStatus::kOptimal && diff <= 1e-6;
    if (!pass) {
      std::printf("  seed %llu (%ld,%ld) %s: |x - x_min_norm|_inf = %.3e\n",
                  static_cast<unsigned long long>(seed), static_cast<long>(m),
                  static_cast<long>(n), to_string(r.status), diff);
    }
    ok = ok && pass;
  }
  std::printf("  %d unique, %d non-unique optimal faces; worst |dx|_inf = %.3e\n", unique,
              nonunique, worst);
  return ok && nonunique >= 5 && unique + nonunique == 20;
}

// 3. Restarting from the computed x* finishes in one outer step.
bool criterion_3() {
  bool ok = true;
  for (const auto& run : desk_runs) {
    SolverConfig cfg;
    cfg.alpha = run.report.alpha;
    cfg.x0 = run.report.solution.x;
    const auto r = solve(run.problem, cfg);
    double diff = 0.0;
    for (std::size_t j = 0; j < cfg.x0.size(); ++j) {
      diff = std::max(diff, std::abs(r.solution.x[j] - cfg.x0[j]));
    }
    const bool pass = r.status == SolveStatus::kOptimal && r.outer_iterations == 1 && diff <= 1e-8;
    if (!pass) {
      std::printf("  (%ld,%ld,%g) seed %llu: %s k=%d |dx|_inf=%.3e\n",
                  static_cast<long>(run.spec.m), static_cast<long>(run.spec.n),
                  run.spec.density, static_cast<unsigned long long>(run.spec.seed),
                  to_string(r.status), r.outer_iterations, diff);
    }
    ok = ok && pass;
  }
  return ok && desk_runs.size() == 20;
}

// 4. Finite-difference checks of the gradient and the generalized Hessian.
bool criterion_4() {
  const double h = 1e-6;
  double worst_g = 0.0, worst_h = 0.0;
  int points = 0;
  for (std::uint64_t inst_id = 0; inst_id < 10; ++inst_id) {
    auto inst = generate({4 + static_cast<Index>(inst_id), 10 + 2 * static_cast<Index>(inst_id),
                          0.5, 900 + inst_id});
    const auto& p = inst.problem;
    const double alpha = default_alpha(p);
    std::mt19937_64 rng(inst_id);
    for (int k = 0; k < 5; ++k, ++points) {
      const auto pt = testing::sample_point(rng, p, alpha, h);
      const auto mp = MeritPoint::at(p, pt.u, alpha, pt.xbar);
      const Vector g = gradient(p, mp);
      const auto hess = generalized_hessian(p, mp);
      const testing::LongDoubleMerit ref{p, alpha, pt.xbar};
      for (Index i = 0; i < p.rows(); ++i) {
        auto up = testing::widen(pt.u), dn = testing::widen(pt.u);
        up[i] += h;
        dn[i] -= h;
        const double fd = static_cast<double>((ref.value(up) - ref.value(dn)) / (2.0L * h));
        worst_g = std::max(worst_g, std::abs(fd - g[i]));
        const auto gp = ref.grad(up), gm = ref.grad(dn);
        for (Index r = 0; r < p.rows(); ++r) {
          const double jac = static_cast<double>((gp[r] - gm[r]) / (2.0L * h));
          worst_h = std::max(worst_h, std::abs(jac - hess.dense()(r, i)));
        }
      }
    }
  }
  std::printf("  %d points: max gradient error %.3e, max Jacobian error %.3e\n", points,
              worst_g, worst_h);
  return points == 50 && worst_g <= 1e-5 && worst_h <= 1e-4;
}

// 5. Generator certificate identities over a grid of shapes.
bool criterion_5() {
  const Index ms[] = {1, 5, 20, 60, 150};
  const double ds[] = {0.05, 0.1, 0.3, 0.6, 1.0};
  int count = 0, bad = 0;
  for (std::uint64_t seed = 0; count < 1000; ++seed) {
    for (Index m : ms) {
      for (double d : ds) {
        if (count >= 1000) break;
        const Index n = std::max<Index>(2 * m + 5, static_cast<Index>(std::ceil(20.0 / d)));
        auto inst = generate({m, n, d, seed * 131 + static_cast<std::uint64_t>(count)});
        const auto r = verify(inst);
        const bool pass = r.primal_infeas == 0.0 && r.dual_infeas == 0.0 &&
                          r.duality_gap <= 1e-9 * (1.0 + std::abs(r.primal_objective));
        if (!pass) {
          ++bad;
          std::printf("  (%ld,%ld,%g): %.3e %.3e %.3e\n", static_cast<long>(m),
                      static_cast<long>(n), d, r.primal_infeas, r.dual_infeas, r.duality_gap);
        }
        ++count;
      }
    }
  }
  std::printf("  %d instances, %d violations\n", count, bad);
  return bad == 0;
}

// 6. Descent invariants over every inner iteration logged in criterion 1.
bool criterion_6() {
  long iterations = 0, violations = 0, strict_misses = 0;
  double worst = -1.0;
  for (const auto& run : desk_runs) {
    for (const auto& t : run.trace) {
      ++iterations;
      const bool descent = t.decrease > 0.0;
      double excess = 0.0;
      const bool quality = testing::direction_quality_ok(t, NewtonConfig{}.hessian_reg,
                                                          run.problem.rows(), &excess);
      if (!descent || !quality) ++violations;
      if (excess > 0.0) ++strict_misses;
      worst = std::max(worst, excess);
    }
  }
  std::printf("  %ld inner iterations checked, %ld violations\n", iterations, violations);
  std::printf("  direction quality: %ld steps miss the exact-arithmetic form by rounding, "
              "largest relative excess %.3e\n", strict_misses, worst);
  return iterations > 0 && violations == 0;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ALNEWTON_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 7. Memory-budget refusal is a recorded row, not a crash.
bool criterion_7() {
  BenchOptions opts;
  opts.memory_budget_bytes = std::size_t{64} << 20;
  const auto suite = run_bench({{1800, 2000, 0.01}, {50, 120, 0.3}}, 1, 1, opts);
  const bool rows_ok = suite.rows.size() == 2 && suite.rows[0].failed() &&
                       suite.rows[0].reason == "memory budget" && suite.rows[1].optimal() &&
                       !all_optimal(suite) &&
                       to_csv(suite).find("failed,memory budget") != std::string::npos;

  const fs::path out = fs::temp_directory_path() /
                       ("alnewton_accept_" + std::to_string(std::random_device{}()));
  const int code = run_cli("bench --size 1800,2000,0.01 --size 50,120,0.3 --memory-budget-mb 64 --out " +
                           out.string());
  const bool files = fs::exists(out / "bench.csv") && fs::exists(out / "bench.md");
  fs::remove_all(out);
  std::printf("  library rows ok: %s; CLI exit %d (expected 1), tables written: %s\n",
              rows_ok ? "yes" : "no", code, files ? "yes" : "no");
  return rows_ok && code == 1 && files;
}

}  // namespace

int main() {
  Verdict v;
  auto guarded = [&](int id, const char* what, bool (*fn)()) {
    try {
      v.report(id, fn(), what);
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
      v.report(id, false, what);
    }
  };
  guarded(1, "desk-scale residual magnitudes (20 instances)", criterion_1);
  guarded(2, "least-norm solution matches oracle on tiny instances", criterion_2);
  guarded(3, "one outer step from x0 = x*", criterion_3);
  guarded(4, "finite-difference gradient and Hessian checks", criterion_4);
  guarded(5, "generator certificate identities (1000 instances)", criterion_5);
  guarded(6, "Armijo descent and direction quality on every inner step", criterion_6);
  guarded(7, "memory budget failure is a recorded row", criterion_7);
  std::printf("%s: %d of 7 criteria failed\n", v.failures ? "FAIL" : "PASS", v.failures);
  return v.failures ? 1 : 0;
}
