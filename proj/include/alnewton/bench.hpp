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

// Benchmark harness: generate, solve, and tabulate residuals in the
// time / ||x*|| / ||Ax*-b||_inf / ||(A^T u*-c)_+||_inf / |c^T x*-b^T u*|
// layout. Also holds the solution.json serializer shared with the CLI.

#pragma once

#include <sys/utsname.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "alnewton/lp_model.hpp"
#include "alnewton/lpgen.hpp"
#include "alnewton/matrix_market.hpp"
#include "alnewton/outer_loop.hpp"

namespace alnewton {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kMethodLabel = "lpf";
inline constexpr std::size_t kDefaultMemoryBudgetMb = 4096;
inline constexpr const char* kMemoryBudgetEnv = "ALNEWTON_MEMORY_BUDGET_MB";

// Five significant digits, scientific.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", v);
  return buf;
}

inline nlohmann::json kkt_json(const KktReport& k) {
  return {{"primal_norm", k.primal_norm},
          {"primal_infeas", k.primal_infeas},
          {"dual_infeas", k.dual_infeas},
          {"duality_gap", k.duality_gap},
          {"relative_primal_infeas", k.relative_primal_infeas()},
          {"relative_dual_infeas", k.relative_dual_infeas()},
          {"relative_duality_gap", k.relative_duality_gap()}};
}

inline nlohmann::json solution_json(const SolveReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"status", to_string(r.status)},
          {"message", r.message},
          {"alpha", r.alpha},
          {"escalations", r.escalations},
          {"outer_iterations", r.outer_iterations},
          {"one_step", r.one_step()},
          {"inner_iterations_total", r.inner_iterations_total},
          {"line_search_steps_total", r.line_search_steps_total},
          {"last_inner_status", to_string(r.last_inner_status)},
          {"last_inner_grad_norm", r.last_inner_grad_norm},
          {"last_primal_change", r.last_primal_change},
          {"wall_time_seconds", r.wall_time_seconds},
          {"primal_objective", r.solution.primal_objective},
          {"dual_objective", r.solution.dual_objective},
          {"kkt", kkt_json(r.kkt)},
          {"thresholds",
           {{"primal", r.thresholds.primal},
            {"dual", r.thresholds.dual},
            {"gap", r.thresholds.gap}}},
          {"x", r.solution.x},
          {"u", r.solution.u}};
}

struct BenchSize {
  Index m = 0;
  Index n = 0;
  double density = 1.0;
};

struct BenchRow {
  Index m = 0;
  Index n = 0;
  double density = 0.0;
  std::string method_label = kMethodLabel;
  std::uint64_t seed = 0;
  int repeat = 0;
  double wall_time_seconds = 0.0;
  double primal_norm = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  double duality_gap = 0.0;
  std::string status;   // SolveStatus name or "failed"
  std::string reason;   // why a row failed or was not optimal
  int outer_iterations = 0;
  int inner_iterations = 0;

  bool failed() const { return status == "failed"; }
  bool optimal() const { return status == "optimal"; }
};

struct BenchSuite {
  std::vector<BenchRow> rows;
  nlohmann::json environment;
  std::uint64_t seed_base = 0;
};

struct BenchOptions {
  SolverConfig solver;
  std::size_t memory_budget_bytes = kDefaultMemoryBudgetMb << 20;
  int jobs = 1;
  double zero_fraction = 0.5;
};

inline std::size_t memory_budget_from_env() {
  if (const char* v = std::getenv(kMemoryBudgetEnv)) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && mb > 0) return static_cast<std::size_t>(mb) << 20;
  }
  return kDefaultMemoryBudgetMb << 20;
}

// Rough peak footprint of generating and solving one instance: A stored by
// rows and by columns, a handful of m- and n-vectors, and on the dense path
// the m x m Hessian plus its Cholesky copy.
inline double estimate_memory_bytes(const BenchSize& s, Index dense_threshold) {
  const double m = static_cast<double>(s.m);
  const double n = static_cast<double>(s.n);
  const double nnz = m * n * s.density;
  double bytes = 2.0 * nnz * (sizeof(double) + sizeof(Index)) + (m + n) * sizeof(Index);
  bytes += 12.0 * (m + n) * sizeof(double);
  if (s.m <= dense_threshold) bytes += 2.0 * m * m * sizeof(double);
  return bytes;
}

inline nlohmann::json capture_environment() {
  nlohmann::json env;
  utsname u{};
  if (uname(&u) == 0) {
    env["os"] = std::string(u.sysname) + " " + u.release + " " + u.machine;
  }
  std::ifstream cpu("/proc/cpuinfo");
  for (std::string line; std::getline(cpu, line);) {
    if (line.rfind("model name", 0) == 0) {
      env["cpu"] = std::string(detail::trim(line.substr(line.find(':') + 1)));
      break;
    }
  }
  std::ifstream mem("/proc/meminfo");
  for (std::string line; std::getline(mem, line);) {
    if (line.rfind("MemTotal", 0) == 0) {
      env["memory"] = std::string(detail::trim(line.substr(line.find(':') + 1)));
      break;
    }
  }
  env["hardware_threads"] = std::thread::hardware_concurrency();
#if defined(__VERSION__)
  env["compiler"] = __VERSION__;
#endif
#if defined(NDEBUG)
  env["build"] = "release (NDEBUG)";
#else
  env["build"] = "debug (assertions on)";
#endif
  return env;
}

inline BenchRow run_bench_row(const BenchSize& size, std::uint64_t seed, int repeat,
                              const BenchOptions& opts) {
  BenchRow row;
  row.m = size.m;
  row.n = size.n;
  row.density = size.density;
  row.seed = seed;
  row.repeat = repeat;
  const double need = estimate_memory_bytes(size, opts.solver.newton.dense_threshold);
  if (need > 0.75 * static_cast<double>(opts.memory_budget_bytes)) {
    row.status = "failed";
    row.reason = "memory budget";
    return row;
  }
  try {
    GenSpec spec;
    spec.m = size.m;
    spec.n = size.n;
    spec.density = size.density;
    spec.seed = seed;
    spec.zero_fraction = opts.zero_fraction;
    const GeneratedInstance inst = generate(spec);
    const SolveReport rep = solve(inst.problem, opts.solver);
    row.wall_time_seconds = rep.wall_time_seconds;
    row.primal_norm = rep.kkt.primal_norm;
    row.primal_infeas = rep.kkt.primal_infeas;
    row.dual_infeas = rep.kkt.dual_infeas;
    row.duality_gap = rep.kkt.duality_gap;
    row.status = to_string(rep.status);
    row.reason = rep.message;
    row.outer_iterations = rep.outer_iterations;
    row.inner_iterations = rep.inner_iterations_total;
  } catch (const std::bad_alloc&) {
    row.status = "failed";
    row.reason = "out of memory";
  } catch (const std::exception& e) {
    row.status = "failed";
    row.reason = e.what();
  }
  return row;
}

// Rows come back in input order (size-major, then repeat) whatever the job
// count. Seeds are seed_base + row index.
inline BenchSuite run_bench(const std::vector<BenchSize>& sizes, int repeats,
                            std::uint64_t seed_base, const BenchOptions& opts) {
  ALNEWTON_REQUIRE(!sizes.empty(), "run_bench: sizes must be nonempty");
  ALNEWTON_REQUIRE(repeats >= 1, "run_bench: repeats must be >= 1");
  ALNEWTON_REQUIRE(opts.jobs >= 1, "run_bench: jobs must be >= 1");
  BenchSuite suite;
  suite.seed_base = seed_base;
  suite.environment = capture_environment();
  suite.environment["jobs"] = opts.jobs;
  suite.environment["memory_budget_mb"] = opts.memory_budget_bytes >> 20;

  const std::size_t total = sizes.size() * static_cast<std::size_t>(repeats);
  suite.rows.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const auto& size = sizes[k / static_cast<std::size_t>(repeats)];
      suite.rows[k] = run_bench_row(size, seed_base + k,
                                    static_cast<int>(k % static_cast<std::size_t>(repeats)), opts);
    }
  };
  if (opts.jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < opts.jobs; ++j) pool.emplace_back(worker);
  }
  return suite;
}

inline std::string row_cells_time(const BenchRow& r) {
  return r.failed() ? "" : sci(r.wall_time_seconds);
}

inline std::string to_csv(const BenchSuite& s) {
  std::ostringstream out;
  out << "schema_version,m,n,density,method,seed,repeat,time_sec,primal_norm,"
         "primal_infeas,dual_infeas,duality_gap,status,reason,outer_iterations,"
         "inner_iterations\n";
  for (const auto& r : s.rows) {
    std::string reason = r.reason;
    for (char& ch : reason) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << kReportSchemaVersion << ',' << r.m << ',' << r.n << ',' << r.density << ','
        << r.method_label << ',' << r.seed << ',' << r.repeat << ',';
    if (r.failed()) {
      out << ",,,,,";
    } else {
      out << sci(r.wall_time_seconds) << ',' << sci(r.primal_norm) << ','
          << sci(r.primal_infeas) << ',' << sci(r.dual_infeas) << ','
          << sci(r.duality_gap) << ',';
    }
    out << r.status << ',' << reason << ',' << r.outer_iterations << ','
        << r.inner_iterations << '\n';
  }
  return out.str();
}

inline std::string to_markdown(const BenchSuite& s) {
  std::ostringstream out;
  out << "# Benchmark\n\n";
  out << "Environment: " << s.environment.dump() << "\n\n";
  out << "Seed base: " << s.seed_base
      << ". Time is the solve alone (generation and I/O excluded).\n\n";
  out << "| m,n,d | method | time(sec) | ‖x*‖ | ‖Ax*−b‖∞ | ‖(Aᵀu*−c)₊‖∞ | "
         "\\|cᵀx*−bᵀu*\\| | status |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : s.rows) {
    out << "| " << r.m << "," << r.n << "," << r.density << " | " << r.method_label << " | ";
    if (r.failed()) {
      out << "failed: " << r.reason << " |  |  |  |  | failed |\n";
      continue;
    }
    out << sci(r.wall_time_seconds) << " | " << sci(r.primal_norm) << " | "
        << sci(r.primal_infeas) << " | " << sci(r.dual_infeas) << " | "
        << sci(r.duality_gap) << " | " << r.status << " |\n";
  }
  return out.str();
}

inline bool all_optimal(const BenchSuite& s) {
  for (const auto& r : s.rows) {
    if (!r.optimal()) return false;
  }
  return true;
}

}  // namespace alnewton
