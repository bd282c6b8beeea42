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

// Random variate generation on top of any 64-bit uniform random bit
// generator. The standard library distributions are implementation-defined,
// so every transform here is written out to keep seeded output identical
// across standard libraries and platforms.

#ifndef PGLP_RANDOM_HPP_
#define PGLP_RANDOM_HPP_

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace pglp {

template <class G>
concept BitGenerator64 = std::uniform_random_bit_generator<G> &&
    (G::max() - G::min()) == std::numeric_limits<std::uint64_t>::max();

// Default engine. mt19937_64 output is fixed by the standard.
using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of stream `index` under `purpose`, derived from `master`. Streams are
// keyed by counters, never by scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ purpose) ^ index);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t purpose,
                       std::uint64_t index) {
  return Rng(derive_seed(master, purpose, index));
}

// Uniform in the open interval (0, 1). A generator output of 2^63 maps to
// 0.5 + 2^-54, i.e. the median.
template <BitGenerator64 G>
double uniform_open01(G& gen) {
  const std::uint64_t bits = static_cast<std::uint64_t>(gen() - G::min()) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Zero-mean Laplace with scale b, by inversion.
template <BitGenerator64 G>
double sample_laplace(double scale, G& gen) {
  const double u = uniform_open01(gen) - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

// Gamma(shape k, scale theta) for integer k, as a sum of k exponentials.
template <BitGenerator64 G>
double sample_gamma_int(int shape, double scale, G& gen) {
  double sum = 0.0;
  for (int i = 0; i < shape; ++i) sum -= std::log(uniform_open01(gen));
  return sum * scale;
}

// Index drawn with probability proportional to `weights` (all >= 0, not all
// zero). Linear scan; callers with hot loops keep their own cumulative table.
template <BitGenerator64 G>
std::size_t sample_discrete(std::span<const double> weights, G& gen) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = uniform_open01(gen) * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return last_positive;
}

}  // namespace pglp

#endif  // PGLP_RANDOM_HPP_
