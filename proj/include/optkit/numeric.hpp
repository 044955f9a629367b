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

#ifndef OPTKIT_NUMERIC_HPP
#define OPTKIT_NUMERIC_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace optkit {

/**
 * Dense d-dimensional vector of doubles (d >= 1).
 *
 * Used for the iterate and for every per-coordinate optimizer buffer. All
 * free functions below are pure and return fresh vectors. Reductions
 * accumulate left to right so results are bit-reproducible on a fixed
 * platform.
 */
class ParamVector {
public:
    /// Zero vector of dimension `dim`. Throws ConfigError if dim == 0.
    explicit ParamVector(std::size_t dim, double fill = 0.0);
    explicit ParamVector(std::vector<double> values);
    ParamVector(std::initializer_list<double> values);

    std::size_t dim() const noexcept { return values_.size(); }

    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool all_finite() const noexcept;
    /// Index of the first non-finite entry, or dim() if there is none.
    std::size_t first_non_finite() const noexcept;

    friend bool operator==(const ParamVector&, const ParamVector&) = default;

private:
    std::vector<double> values_;
};

ParamVector ones(std::size_t dim);

ParamVector hadamard(const ParamVector& a, const ParamVector& b);
/// Throws DomainError naming the first negative entry.
ParamVector elementwise_sqrt(const ParamVector& a);
ParamVector elementwise_max(const ParamVector& a, const ParamVector& b);
/// 1 / a[j] for every coordinate.
ParamVector reciprocal(const ParamVector& a);

/// alpha * a + b
ParamVector axpy(double alpha, const ParamVector& a, const ParamVector& b);
ParamVector scale(double alpha, const ParamVector& a);
ParamVector add(const ParamVector& a, const ParamVector& b);
ParamVector subtract(const ParamVector& a, const ParamVector& b);

double l2_norm(const ParamVector& a);
double l2_norm_sq(const ParamVector& a);
double l1_norm(const ParamVector& a);
double linf_norm(const ParamVector& a);
double dot(const ParamVector& a, const ParamVector& b);
double min_entry(const ParamVector& a);
double max_entry(const ParamVector& a);

}  // namespace optkit

#endif  // OPTKIT_NUMERIC_HPP
