// Copyright 2026 The roi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Counter-based 64-bit generator. Output i of a stream is
 * mix(key + (i + 1) * golden), so a stream is fully described by its key and
 * position and substreams never share state. Keys are derived by folding
 * identifiers (seed, state, angle bits, outcome, projector) through the same
 * finaliser.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>

namespace roilab {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a, for turning labels into substream identifiers.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t angle_bits(double x) noexcept { return std::bit_cast<std::uint64_t>(x); }

class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    /// Key derived from a seed and an ordered list of identifiers.
    static constexpr CounterRng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) noexcept {
        std::uint64_t k = mix64(seed ^ kGolden);
        for (std::uint64_t id : ids) {
            k = mix64(k ^ mix64(id + kGolden));
        }
        return CounterRng(k);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// k ~ Binomial(n, p) with exact handling of the p = 0 and p = 1 edges.
inline std::uint64_t draw_binomial(std::uint64_t n, double p, CounterRng &rng) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::uint64_t> dist(n, p);
    return dist(rng);
}

} // namespace roilab
