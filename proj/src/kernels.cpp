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

#include "optkit/kernels.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "optkit/error.hpp"

namespace optkit::kernels {

namespace {

void check_design(const Design& design, const ParamVector& x) {
    if (x.dim() != design.d) {
        throw DimensionMismatch(x.dim(), design.d);
    }
}

double margin(const Design& design, std::size_t i, const ParamVector& x) {
    const double* row = design.features.data() + i * design.d;
    double z = 0.0;
    for (std::size_t j = 0; j < design.d; ++j) {
        z += row[j] * x[j];
    }
    return z;
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logistic_loss_term(double z, double y) noexcept {
    const double softplus = (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
    return softplus - y * z;
}

ParamVector logistic_grad_serial(const Design& design, const ParamVector& x) {
    check_design(design, x);
    ParamVector acc(design.d);
    for (std::size_t i = 0; i < design.n; ++i) {
        const double r = sigmoid(margin(design, i, x)) - design.labels[i];
        const double* row = design.features.data() + i * design.d;
        for (std::size_t j = 0; j < design.d; ++j) {
            acc[j] += r * row[j];
        }
    }
    const double n = static_cast<double>(design.n);
    for (std::size_t j = 0; j < design.d; ++j) {
        acc[j] /= n;
    }
    return acc;
}

ParamVector logistic_grad_parallel(const Design& design, const ParamVector& x) {
    check_design(design, x);
    const auto n = static_cast<std::ptrdiff_t>(design.n);
    const auto d = static_cast<std::ptrdiff_t>(design.d);
    std::vector<double> residual(design.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        residual[ii] = sigmoid(margin(design, ii, x)) - design.labels[ii];
    }
    ParamVector out(design.d);
    const double nd = static_cast<double>(design.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < d; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < design.n; ++i) {
            acc += residual[i] * design.features[i * design.d + jj];
        }
        out[jj] = acc / nd;
    }
    return out;
}

double logistic_loss_serial(const Design& design, const ParamVector& x) {
    check_design(design, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < design.n; ++i) {
        acc += logistic_loss_term(margin(design, i, x), design.labels[i]);
    }
    return acc / static_cast<double>(design.n);
}

double logistic_loss_parallel(const Design& design, const ParamVector& x) {
    check_design(design, x);
    const auto n = static_cast<std::ptrdiff_t>(design.n);
    std::vector<double> terms(design.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        terms[ii] = logistic_loss_term(margin(design, ii, x), design.labels[ii]);
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += t;
    }
    return acc / static_cast<double>(design.n);
}

void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

void for_each_index_parallel(std::size_t count, const std::function<void(std::size_t)>& body) {
    // Exceptions cannot cross an OpenMP region. The error from the lowest
    // index is rethrown after the join so the reported failure does not
    // depend on scheduling.
    std::exception_ptr first_error;
    std::size_t first_index = count;
    std::mutex error_mutex;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace optkit::kernels
