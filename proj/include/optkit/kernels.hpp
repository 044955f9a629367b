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

#ifndef OPTKIT_KERNELS_HPP
#define OPTKIT_KERNELS_HPP

#include <cstddef>
#include <functional>
#include <span>

#include "optkit/numeric.hpp"

// Data-parallel kernels. Each parallel kernel has a serial reference with a
// different loop structure; both perform the same floating-point operations
// in the same order per output entry, so their results are bit-identical.

namespace optkit::kernels {

/// Row-major n x d design matrix with 0/1 labels.
struct Design {
    std::span<const double> features;
    std::span<const double> labels;
    std::size_t n = 0;
    std::size_t d = 0;
};

/// Numerically stable log(1 + exp(z)) - y z.
double logistic_loss_term(double z, double y) noexcept;
double sigmoid(double z) noexcept;

/// (1/n) sum_i (sigmoid(a_i . x) - y_i) a_i, sample-major loop.
ParamVector logistic_grad_serial(const Design& design, const ParamVector& x);
/// Same quantity: residuals in parallel over samples, then per-coordinate
/// sums in parallel over coordinates.
ParamVector logistic_grad_parallel(const Design& design, const ParamVector& x);

double logistic_loss_serial(const Design& design, const ParamVector& x);
double logistic_loss_parallel(const Design& design, const ParamVector& x);

/// Calls body(i) for i in [0, count). The parallel variant distributes
/// indices over OpenMP threads; body must only write state owned by i.
void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_index_parallel(std::size_t count, const std::function<void(std::size_t)>& body);

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads() noexcept;

}  // namespace optkit::kernels

#endif  // OPTKIT_KERNELS_HPP
