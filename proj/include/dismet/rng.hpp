/*
 * Copyright 2026 The dismet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <cstddef>

namespace dismet {

// Deterministic 64-bit generator (splitmix64). Every stochastic component in
// the library draws from one of these, derived from an explicit seed, so runs
// are reproducible bit-for-bit regardless of platform or thread schedule.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t next_below(std::size_t n) {
        // 64-bit state against n <= ~2^32 makes modulo bias negligible, but
        // rejection keeps it exact.
        std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return static_cast<std::size_t>(v % n);
    }

    // Independent substream; same (seed, stream) always yields the same child.
    Rng split(std::uint64_t stream) const {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL)));
        child.next_u64();
        return child;
    }

  private:
    std::uint64_t state_;
};

// Order-sensitive seed mixing for deriving task seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace dismet
