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

#include "optkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "optkit/error.hpp"

namespace optkit {

namespace {

void require_same_dim(const ParamVector& a, const ParamVector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(a.dim(), b.dim());
    }
}

template <typename Op>
ParamVector zip(const ParamVector& a, const ParamVector& b, Op op) {
    require_same_dim(a, b);
    ParamVector out(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        out[j] = op(a[j], b[j]);
    }
    return out;
}

template <typename Op>
ParamVector map(const ParamVector& a, Op op) {
    ParamVector out(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        out[j] = op(a[j]);
    }
    return out;
}

}  // namespace

ParamVector::ParamVector(std::size_t dim, double fill) : values_(dim, fill) {
    if (dim == 0) {
        throw ConfigError("ParamVector dimension must be at least 1");
    }
}

ParamVector::ParamVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ConfigError("ParamVector dimension must be at least 1");
    }
}

ParamVector::ParamVector(std::initializer_list<double> values)
    : ParamVector(std::vector<double>(values)) {}

bool ParamVector::all_finite() const noexcept { return first_non_finite() == dim(); }

std::size_t ParamVector::first_non_finite() const noexcept {
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) {
            return j;
        }
    }
    return values_.size();
}

ParamVector ones(std::size_t dim) { return ParamVector(dim, 1.0); }

ParamVector hadamard(const ParamVector& a, const ParamVector& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}

ParamVector elementwise_sqrt(const ParamVector& a) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
        if (a[j] < 0.0) {
            throw DomainError("elementwise_sqrt of negative entry", j);
        }
    }
    return map(a, [](double x) { return std::sqrt(x); });
}

ParamVector elementwise_max(const ParamVector& a, const ParamVector& b) {
    // Ties keep the left operand.
    return zip(a, b, [](double x, double y) { return y > x ? y : x; });
}

ParamVector reciprocal(const ParamVector& a) {
    return map(a, [](double x) { return 1.0 / x; });
}

ParamVector axpy(double alpha, const ParamVector& a, const ParamVector& b) {
    return zip(a, b, [alpha](double x, double y) { return alpha * x + y; });
}

ParamVector scale(double alpha, const ParamVector& a) {
    return map(a, [alpha](double x) { return alpha * x; });
}

ParamVector add(const ParamVector& a, const ParamVector& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}

ParamVector subtract(const ParamVector& a, const ParamVector& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}

double l2_norm_sq(const ParamVector& a) {
    double acc = 0.0;
    for (double x : a) {
        acc += x * x;
    }
    return acc;
}

double l2_norm(const ParamVector& a) { return std::sqrt(l2_norm_sq(a)); }

double l1_norm(const ParamVector& a) {
    double acc = 0.0;
    for (double x : a) {
        acc += std::abs(x);
    }
    return acc;
}

double linf_norm(const ParamVector& a) {
    double best = 0.0;
    for (double x : a) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

double dot(const ParamVector& a, const ParamVector& b) {
    require_same_dim(a, b);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        acc += a[j] * b[j];
    }
    return acc;
}

double min_entry(const ParamVector& a) { return *std::min_element(a.begin(), a.end()); }

double max_entry(const ParamVector& a) { return *std::max_element(a.begin(), a.end()); }

}  // namespace optkit
