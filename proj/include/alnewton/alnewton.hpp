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

#pragma once

#include "alnewton/errors.hpp"
#include "alnewton/sparse_core.hpp"
#include "alnewton/matrix_market.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/aug_lagrangian.hpp"
#include "alnewton/newton_solver.hpp"
#include "alnewton/outer_loop.hpp"
#include "alnewton/lpgen.hpp"
#include "alnewton/bundle_io.hpp"
#include "alnewton/bench.hpp"
