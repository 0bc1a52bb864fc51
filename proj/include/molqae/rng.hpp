// Copyright 2026 The molqae Authors
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

#include <cstdint>
#include <string_view>

namespace molqae {

/**
 * SplitMix64 generator.
 *
 * Every seeded operation in the pipeline (parameter initialization, data
 * splitting, per-epoch batch order) draws from this sequence so results
 * are identical across platforms and standard libraries:
 *
 *     state += 0x9E3779B97F4A7C15
 *     z = state
 *     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *     return z ^ (z >> 31)
 */
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double strictly inside (0, 1): (k + 0.5) / 2^53.
    constexpr double next_open01() noexcept {
        const auto k = static_cast<double>(next() >> 11);
        return (k + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection; bound must be > 0.
    constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) {
            x = next();
        }
        return x % bound;
    }

  private:
    std::uint64_t state_;
};

/// Seed for a derived stream, e.g. the shuffle of epoch `stream`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                                  std::uint64_t stream) noexcept {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    return mix.next();
}

/// 64-bit FNV-1a over raw bytes. Used for vocabulary and corpus fingerprints.
[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace molqae
