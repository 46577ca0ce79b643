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

// Generates one random solvable LP, solves it with the default settings and
// prints the residual row.

#include <cstdio>

#include "alnewton/alnewton.hpp"

int main() {
  alnewton::GenSpec spec;
  spec.m = 200;
  spec.n = 500;
  spec.density = 0.1;
  spec.seed = 7;
  const auto inst = alnewton::generate(spec);

  const auto rep = alnewton::solve(inst.problem, alnewton::SolverConfig{});
  std::printf("status=%s outer=%d inner=%d time=%.3fs\n", alnewton::to_string(rep.status),
              rep.outer_iterations, rep.inner_iterations_total, rep.wall_time_seconds);
  std::printf("||x*||=%.4e  ||Ax*-b||=%.4e  ||(A'u*-c)+||=%.4e  |c'x*-b'u*|=%.4e\n",
              rep.kkt.primal_norm, rep.kkt.primal_infeas, rep.kkt.dual_infeas,
              rep.kkt.duality_gap);
  return rep.status == alnewton::SolveStatus::kOptimal ? 0 : 1;
}
