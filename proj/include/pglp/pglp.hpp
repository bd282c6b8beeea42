// Copyright 2026 The PGLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Umbrella header.

#ifndef PGLP_PGLP_HPP_
#define PGLP_PGLP_HPP_

#include "pglp/eval.hpp"
#include "pglp/exposure.hpp"
#include "pglp/geometry.hpp"
#include "pglp/grid_map.hpp"
#include "pglp/io.hpp"
#include "pglp/mechanisms.hpp"
#include "pglp/partition.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/random.hpp"
#include "pglp/status.hpp"
#include "pglp/trace.hpp"

#endif  // PGLP_PGLP_HPP_
