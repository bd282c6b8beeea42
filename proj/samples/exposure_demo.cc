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


// Detects and repairs isolated nodes on a 3x2 map.
//
//   s4 s5 s6      policy edges: s1-s2, s2-s3, s4-s5, s1-s5, s2-s6
//   s1 s2 s3      domain C = {s2, s3, s5}

#include <cstdio>

#include "pglp/pglp.hpp"

int main() {
  const pglp::GridMap map(3, 2);
  pglp::PolicyGraph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  g.add_edge(0, 4);
  g.add_edge(1, 5);
  const pglp::ConstrainedDomain c(6, {1, 2, 4});

  const auto report = pglp::analyze_and_repair(map, g, c);
  for (std::size_t s = 0; s < report.status.size(); ++s) {
    std::printf("s%zu: %s\n", s + 1, std::string(pglp::status_name(report.status[s])).c_str());
  }
  for (const auto& r : report.repairs) {
    std::printf("repair: s%zu-s%zu, hull area %.2f -> %.2f\n", r.edge.u + 1, r.edge.v + 1,
                r.area_before, r.area_after);
  }
  return 0;
}
