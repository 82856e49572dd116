// Copyright 2026 The swapmeter Authors
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

#ifndef SWAPMETER_RANDOM_HPP
#define SWAPMETER_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace swapmeter {

// Every random draw in the library goes through std::mt19937_64, whose
// output sequence is fixed by the C++ standard. Distributions are written
// out here instead of using <random>'s, whose algorithms are
// implementation-defined, so counts agree across standard libraries.

/// Identifier written into every result record.
inline constexpr const char *kRngAlgorithm = "mt19937_64+splitmix64-streams+u53-bernoulli";

using Engine = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of independent stream `stream` derived from a master seed. Streams
/// can be consumed in any order or concurrently.
inline constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) { return Engine(stream_seed(seed, stream)); }

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Engine &g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Box-Muller; consumes two engine outputs per call.
inline double standard_normal(Engine &g) {
    const double u1 = 1.0 - uniform01(g);  // (0, 1]
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline bool bernoulli(Engine &g, double p) { return uniform01(g) < p; }

}  // namespace swapmeter

#endif  // SWAPMETER_RANDOM_HPP
