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


// Releases a short synthetic trajectory on a 10x10 map under a 5x5 block
// policy and prints each release with the adversary's posterior peak.

#include <algorithm>
#include <cstdio>

#include "pglp/pglp.hpp"

int main() {
  const pglp::GridMap map(10, 10, 0.34);
  const pglp::PolicyGraph policy = pglp::build_block(map, 5);
  const pglp::MarkovModel model = pglp::random_walk_model(map);
  const pglp::BeliefVector initial = pglp::BeliefVector::uniform(map.size());

  pglp::Rng walk = pglp::make_stream(42, pglp::kStreamTrajectories, 0);
  const auto truth = pglp::simulate_trajectory(model, initial, 10, walk);

  pglp::TraceOptions options;
  options.mechanism = pglp::MechanismId::kPpim;
  options.epsilon = 1.0;
  pglp::TraceSession session(map, policy, model, initial, options);
  pglp::Rng noise = pglp::make_stream(42, pglp::kStreamReleases, 0);

  std::printf("t  true  released  |C|  repairs  E_eu(km)  max posterior\n");
  for (pglp::Location s : truth) {
    const auto rec = session.release_step(pglp::SecretLocation(s), noise);
    const auto post = session.posterior().probs();
    std::printf("%-2zu %-5zu %-9zu %-4zu %-8zu %-9.3f %.3f\n", rec.t, s.index, rec.released.index,
                rec.domain.size(), rec.repairs.size(),
                pglp::metric_eeu(map, s, rec.released),
                *std::max_element(post.begin(), post.end()));
  }
  const auto total = pglp::compose(session.ledger());
  std::printf("total epsilon %.2f, composed graph keeps %zu of %zu edges\n", total.total_epsilon,
              total.graph.edge_count(), policy.edge_count());
  return 0;
}
