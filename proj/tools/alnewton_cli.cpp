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

// alnewton: generate random solvable LPs, solve problem bundles, and run
// residual-table benchmarks.
//
// Exit codes: 0 success, 1 solver not optimal, 2 usage, 3 I/O or parse.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "alnewton/alnewton.hpp"

namespace {

namespace fs = std::filesystem;
using namespace alnewton;

constexpr int kExitOk = 0;
constexpr int kExitNotOptimal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct GenArgs {
  GenSpec spec;
  std::string out;
};

struct SolveArgs {
  std::string bundle;
  std::string output;
  std::string trace;
  std::string x0;
  double alpha = 0.0;
  double tol = 1e-10;
  double outer_tol = 1e-10;
  double reg = 1e-4;
  int max_outer = 20;
  int max_newton = 500;
  bool escalate = false;
};

struct BenchArgs {
  std::vector<std::string> sizes;
  int repeats = 1;
  std::uint64_t seed_base = 1;
  std::string out;
  int jobs = 1;
  std::size_t memory_budget_mb = 0;
  double zero_fraction = 0.5;
};

std::string table_header() {
  return "m,n,d                method  time(sec)   ||x*||      ||Ax*-b||_inf "
         "||(A'u*-c)+||_inf |c'x*-b'u*|  status";
}

std::string table_row(Index m, Index n, double d, double time, const KktReport& k,
                      const std::string& status) {
  char lead[64];
  std::snprintf(lead, sizeof(lead), "%ld,%ld,%g", static_cast<long>(m),
                static_cast<long>(n), d);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-20s %-7s %-11s %-11s %-13s %-17s %-12s %s", lead,
                kMethodLabel, sci(time).c_str(), sci(k.primal_norm).c_str(),
                sci(k.primal_infeas).c_str(), sci(k.dual_infeas).c_str(),
                sci(k.duality_gap).c_str(), status.c_str());
  return buf;
}

int run_gen(const GenArgs& args) {
  GeneratedInstance inst = [&] {
    try {
      return generate(args.spec);
    } catch (const ContractViolation& e) {
      throw CLI::ValidationError("gen", e.what());
    }
  }();
  write_bundle(args.out, inst);
  const KktReport k = verify(inst);
  std::printf("wrote %s (m=%ld n=%ld nnz=%ld)\n", args.out.c_str(),
              static_cast<long>(inst.problem.rows()), static_cast<long>(inst.problem.cols()),
              static_cast<long>(inst.problem.a().nnz()));
  std::printf("[norm(A*x-b), norm(pl(A'*u-c)), c'*x-b'*u] = [%s, %s, %s]\n",
              sci(k.primal_infeas).c_str(), sci(k.dual_infeas).c_str(),
              sci(dot(inst.problem.c(), inst.x_star) - dot(inst.problem.b(), inst.u_star)).c_str());
  return kExitOk;
}

int run_solve(const SolveArgs& args) {
  const Bundle bundle = read_bundle(args.bundle);
  const LpProblem& p = bundle.problem;

  SolverConfig cfg;
  cfg.alpha = args.alpha;
  cfg.newton.epsilon = args.tol;
  cfg.newton.hessian_reg = args.reg;
  cfg.newton.max_iterations = args.max_newton;
  cfg.outer_tol = args.outer_tol;
  cfg.max_outer = args.max_outer;
  cfg.alpha_escalation = args.escalate;
  if (!args.x0.empty()) cfg.x0 = read_vector_file(args.x0);

  std::unique_ptr<std::ofstream> trace;
  SolveSinks sinks;
  if (!args.trace.empty()) {
    trace = std::make_unique<std::ofstream>(args.trace);
    if (!*trace) throw IoError("cannot write " + args.trace);
    sinks.newton = [&](const NewtonTrace& t) {
      *trace << nlohmann::json{{"type", "newton"},
                               {"iteration", t.iteration},
                               {"phi", t.phi},
                               {"grad_norm", t.grad_norm},
                               {"step", t.step},
                               {"trials", t.trials},
                               {"active_count", t.active_count},
                               {"slope", t.slope},
                               {"decrease", t.decrease}}
                    .dump()
             << '\n';
    };
    sinks.outer = [&](const OuterTrace& t) {
      *trace << nlohmann::json{{"type", "outer"},
                               {"k", t.k},
                               {"inner_iterations", t.inner_iterations},
                               {"inner_status", to_string(t.inner_status)},
                               {"primal_change", t.primal_change},
                               {"kkt", kkt_json(t.kkt)}}
                    .dump()
             << '\n';
    };
  }

  SolveReport rep;
  try {
    rep = solve(p, cfg, sinks);
  } catch (const ContractViolation& e) {
    throw CLI::ValidationError("solve", e.what());
  }

  const fs::path out = args.output.empty() ? fs::path(args.bundle) / "solution.json"
                                           : fs::path(args.output);
  write_json_file(out, solution_json(rep));

  std::cout << table_header() << '\n'
            << table_row(p.rows(), p.cols(), p.density(), rep.wall_time_seconds, rep.kkt,
                         to_string(rep.status))
            << '\n';
  if (rep.status != SolveStatus::kOptimal) {
    std::cerr << "not optimal: " << rep.message << '\n';
    return kExitNotOptimal;
  }
  return kExitOk;
}

BenchSize parse_size(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  BenchSize s;
  try {
    if (parts.size() != 3) throw std::invalid_argument("arity");
    s.m = std::stoll(parts[0]);
    s.n = std::stoll(parts[1]);
    s.density = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--size", "expected m,n,d but got '" + text + "'");
  }
  if (s.m < 1 || s.n < 1 || !(s.density > 0.0 && s.density <= 1.0)) {
    throw CLI::ValidationError("--size", "need m,n >= 1 and 0 < d <= 1 in '" + text + "'");
  }
  return s;
}

int run_bench_cmd(const BenchArgs& args) {
  if (args.repeats < 1) throw CLI::ValidationError("--repeats", "must be >= 1");
  std::vector<BenchSize> sizes;
  for (const auto& s : args.sizes) sizes.push_back(parse_size(s));

  BenchOptions opts;
  opts.jobs = args.jobs;
  opts.zero_fraction = args.zero_fraction;
  opts.memory_budget_bytes = args.memory_budget_mb > 0 ? args.memory_budget_mb << 20
                                                       : memory_budget_from_env();
  const BenchSuite suite = run_bench(sizes, args.repeats, args.seed_base, opts);

  const fs::path dir(args.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    std::ofstream csv(dir / "bench.csv", std::ios::binary);
    if (!csv) throw IoError("cannot write " + (dir / "bench.csv").string());
    csv << to_csv(suite);
  }
  {
    std::ofstream md(dir / "bench.md", std::ios::binary);
    if (!md) throw IoError("cannot write " + (dir / "bench.md").string());
    md << to_markdown(suite);
  }
  write_json_file(dir / "bench_env.json",
                  {{"schema_version", kReportSchemaVersion},
                   {"seed_base", suite.seed_base},
                   {"environment", suite.environment}});

  std::cout << table_header() << '\n';
  for (const auto& r : suite.rows) {
    if (r.failed()) {
      char lead[64];
      std::snprintf(lead, sizeof(lead), "%ld,%ld,%g", static_cast<long>(r.m),
                    static_cast<long>(r.n), r.density);
      std::printf("%-20s %-7s failed: %s\n", lead, r.method_label.c_str(), r.reason.c_str());
      continue;
    }
    KktReport k;
    k.primal_norm = r.primal_norm;
    k.primal_infeas = r.primal_infeas;
    k.dual_infeas = r.dual_infeas;
    k.duality_gap = r.duality_gap;
    std::cout << table_row(r.m, r.n, r.density, r.wall_time_seconds, k, r.status) << '\n';
  }
  return all_optimal(suite) ? kExitOk : kExitNotOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmented Lagrangian / generalized Newton LP solver"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random solvable LP bundle");
  gen_cmd->add_option("--m", gen.spec.m, "Rows")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.spec.n, "Columns")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--density", gen.spec.density, "Density d in (0,1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.spec.seed, "PRNG seed")->default_val(0);
  gen_cmd->add_option("--value-scale", gen.spec.value_scale,
                      "A entries uniform on (-scale, scale)")
      ->default_val(50.0);
  gen_cmd->add_option("--zero-fraction", gen.spec.zero_fraction,
                      "Probability that a certified x component is zero")
      ->default_val(0.5);
  gen_cmd->add_option("--out", gen.out, "Output bundle directory")->required();

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand(
      "solve",
      "Solve a problem bundle; writes solution.json beside it. Reported time covers "
      "the solver only (bundle I/O excluded).");
  solve_cmd->add_option("bundle", solve_args.bundle, "Bundle directory")->required();
  solve_cmd->add_option("--alpha", solve_args.alpha,
                        "Penalty alpha (default 10/sqrt(density))");
  solve_cmd->add_option("--tol", solve_args.tol, "Newton gradient tolerance")
      ->default_val(1e-10);
  solve_cmd->add_option("--outer-tol", solve_args.outer_tol, "Primal fixed-point tolerance")
      ->default_val(1e-10);
  solve_cmd->add_option("--reg", solve_args.reg, "Hessian regularization")
      ->default_val(1e-4);
  solve_cmd->add_option("--max-outer", solve_args.max_outer, "Outer iteration cap")
      ->default_val(20);
  solve_cmd->add_option("--max-newton", solve_args.max_newton, "Newton iteration cap")
      ->default_val(500);
  solve_cmd->add_option("--x0", solve_args.x0, "Starting primal point (one value per line)");
  solve_cmd->add_flag("--alpha-escalation", solve_args.escalate,
                      "Retry with 10x alpha when the outer cap is hit");
  solve_cmd->add_option("--trace", solve_args.trace, "Write JSON-lines iteration trace");
  solve_cmd->add_option("--output", solve_args.output,
                        "Report path (default BUNDLE/solution.json)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench",
      "Generate and solve a sweep of instances; writes bench.csv and bench.md. Time "
      "covers the solver only. Memory budget also from " +
          std::string(kMemoryBudgetEnv) + ".");
  bench_cmd->add_option("--size", bench.sizes, "Instance shape m,n,d (repeatable)")
      ->required();
  bench_cmd->add_option("--repeats", bench.repeats, "Instances per size")->default_val(1);
  bench_cmd->add_option("--seed-base", bench.seed_base, "First seed")->default_val(1);
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--jobs", bench.jobs, "Parallel instances")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--memory-budget-mb", bench.memory_budget_mb,
                        "Memory budget in MiB (default $" + std::string(kMemoryBudgetEnv) +
                            " or 4096)");
  bench_cmd->add_option("--zero-fraction", bench.zero_fraction,
                        "Generator zero fraction for x")
      ->default_val(0.5);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve_args);
    if (*bench_cmd) return run_bench_cmd(bench);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotOptimal;
  }
  return kExitUsage;
}
