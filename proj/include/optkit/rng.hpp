// Copyright 2026 The optkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPTKIT_RNG_HPP
#define OPTKIT_RNG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace optkit {

/// SplitMix64 finalizer; used for seeding and for stateless hashing.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;
std::uint64_t mix64(std::uint64_t value) noexcept;

/**
 * xoshiro256** generator seeded through SplitMix64.
 *
 * The standard-library engines are portable but their distributions are
 * not, so every distribution used by the library is implemented here:
 *  - uniform01: top 53 bits scaled by 2^-53, in [0, 1)
 *  - uniform_index: Lemire's multiply-shift with rejection (unbiased)
 *  - normal: Marsaglia polar method, spare value cached
 *  - sample_without_replacement: Floyd's algorithm
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;
    double uniform01() noexcept;
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    double normal() noexcept;

    /// `count` distinct integers from [0, n), in insertion order of Floyd's
    /// algorithm. Requires count <= n.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t count);

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_normal_;
};

}  // namespace optkit

#endif  // OPTKIT_RNG_HPP
