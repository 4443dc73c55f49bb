// Copyright 2026 The kartoteka authors
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

#ifndef KARTOTEKA_RNG_HPP_
#define KARTOTEKA_RNG_HPP_

#include <cstdint>
#include <vector>

namespace kartoteka {

// splitmix64 (Steele, Lea & Flood; public-domain reference constants).
// Used instead of <random> engines/distributions because the standard
// leaves distribution algorithms unspecified, and identical seeds must
// yield identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Modulo bias is below n / 2^64 and irrelevant here.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Index drawn proportionally to the (non-negative, not all zero) weights.
  // Zero-weight entries are never selected.
  std::size_t next_categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double r = next_double() * total;
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last_nonzero = i;
      if (r < acc) return i;
    }
    return last_nonzero;
  }

  // Decorrelated stream for substream n; used for per-card seeds.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t n) {
    Rng g(seed + 0x9E3779B97F4A7C15ull * (n + 1));
    return g.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace kartoteka

#endif  // KARTOTEKA_RNG_HPP_
