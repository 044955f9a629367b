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

#include "optkit/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "optkit/error.hpp"
#include "optkit/kernels.hpp"

namespace optkit {

MiniBatch make_batch(std::vector<std::uint64_t> indices) {
    std::uint64_t token = mix64(indices.size());
    for (std::uint64_t i : indices) {
        token = mix64(token ^ (i + 0x9E3779B97F4A7C15ULL));
    }
    return MiniBatch{std::move(indices), token};
}

MiniBatch full_batch(std::uint64_t n) {
    std::vector<std::uint64_t> idx(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    return make_batch(std::move(idx));
}

MiniBatch StochasticObjective::sample_batch(Rng& rng, std::size_t batch_size) const {
    if (batch_size == 0) {
        throw ConfigError("batch size must be positive");
    }
    if (!meta_.n_samples) {
        throw ConfigError(name() + ": objective without finite sample space must override sampling");
    }
    return make_batch(rng.sample_without_replacement(*meta_.n_samples, batch_size));
}

void StochasticObjective::check_dim(const ParamVector& x) const {
    if (x.dim() != meta_.dim) {
        throw DimensionMismatch(x.dim(), meta_.dim);
    }
}

void StochasticObjective::check_batch(const MiniBatch& batch) const {
    if (batch.size() == 0) {
        throw ConfigError(name() + ": empty mini-batch");
    }
    if (meta_.n_samples) {
        for (std::uint64_t i : batch.indices) {
            if (i >= *meta_.n_samples) {
                throw ConfigError(name() + ": sample index " + std::to_string(i) + " out of range");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Stochastic quadratic

StochasticQuadratic::StochasticQuadratic(ParamVector center, std::vector<double> offsets,
                                         std::size_t n_samples, double noise_scale,
                                         double box_radius)
    : StochasticObjective(ObjectiveMeta{}),
      center_(std::move(center)),
      offsets_(std::move(offsets)),
      n_(n_samples),
      noise_scale_(noise_scale),
      mean_offset_all_(center_.dim()) {
    const std::size_t d = center_.dim();
    if (n_ < 2) {
        throw ConfigError("quadratic: n_samples must be at least 2");
    }
    if (offsets_.size() != n_ * d) {
        throw ConfigError("quadratic: offset table has wrong size");
    }
    mean_offset_all_ = mean_offset(full_batch(n_));

    // Population variance of the per-sample gradients, which is constant in x.
    double var = 0.0;
    double max_center = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double u = offsets_[i * d + j];
            const double dev = noise_scale_ * (u - mean_offset_all_[j]);
            var += dev * dev;
            max_center = std::max(max_center, std::abs(center_[j] + noise_scale_ * u));
        }
    }
    var /= static_cast<double>(n_);

    meta_.dim = d;
    meta_.smoothness_L = 1.0;
    meta_.smoothness_kind = ConstantKind::exact;
    meta_.grad_variance_sigma2 = var;
    meta_.variance_kind = ConstantKind::exact;
    meta_.grad_inf_bound_G = box_radius + max_center;
    meta_.optimum_value_fstar = 0.5 * var;
    meta_.n_samples = n_;
    meta_.box_radius = box_radius;
}

ParamVector StochasticQuadratic::sample_center(std::uint64_t i) const {
    const std::size_t d = center_.dim();
    ParamVector c(d);
    for (std::size_t j = 0; j < d; ++j) {
        c[j] = center_[j] + noise_scale_ * offsets_[i * d + j];
    }
    return c;
}

ParamVector StochasticQuadratic::mean_offset(const MiniBatch& batch) const {
    const std::size_t d = center_.dim();
    ParamVector acc(d);
    for (std::uint64_t i : batch.indices) {
        for (std::size_t j = 0; j < d; ++j) {
            acc[j] += offsets_[i * d + j];
        }
    }
    const double b = static_cast<double>(batch.size());
    for (std::size_t j = 0; j < d; ++j) {
        acc[j] /= b;
    }
    return acc;
}

ParamVector StochasticQuadratic::grad_with_offset(const ParamVector& x,
                                                  const ParamVector& mean_u) const {
    ParamVector g(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) {
        g[j] = (x[j] - center_[j]) - noise_scale_ * mean_u[j];
    }
    return g;
}

ParamVector StochasticQuadratic::batch_grad(const ParamVector& x, const MiniBatch& batch) const {
    check_dim(x);
    check_batch(batch);
    return grad_with_offset(x, mean_offset(batch));
}

double StochasticQuadratic::batch_loss(const ParamVector& x, const MiniBatch& batch) const {
    check_dim(x);
    check_batch(batch);
    const std::size_t d = center_.dim();
    double acc = 0.0;
    for (std::uint64_t i : batch.indices) {
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double r = x[j] - (center_[j] + noise_scale_ * offsets_[i * d + j]);
            sq += r * r;
        }
        acc += 0.5 * sq;
    }
    return acc / static_cast<double>(batch.size());
}

ParamVector StochasticQuadratic::full_grad(const ParamVector& x) const {
    check_dim(x);
    return grad_with_offset(x, mean_offset_all_);
}

double StochasticQuadratic::full_loss(const ParamVector& x) const {
    check_dim(x);
    return 0.5 * l2_norm_sq(grad_with_offset(x, mean_offset_all_)) + *meta_.optimum_value_fstar;
}

ObjectivePtr make_stochastic_quadratic(std::size_t dim, std::size_t n_samples, double noise_scale,
                                       std::uint64_t seed, QuadraticOptions options) {
    if (dim == 0) {
        throw ConfigError("quadratic: dim must be at least 1");
    }
    if (n_samples < 2) {
        throw ConfigError("quadratic: n_samples must be at least 2 (variance undefined)");
    }
    Rng rng(seed);
    ParamVector center(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        center[j] = options.center_scale * rng.normal();
    }
    std::vector<double> offsets(n_samples * dim);
    for (double& u : offsets) {
        u = rng.normal();
    }
    // Center the offsets so that sum_i u_i = 0.
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            mean += offsets[i * dim + j];
        }
        mean /= static_cast<double>(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            offsets[i * dim + j] -= mean;
        }
    }
    return std::make_shared<StochasticQuadratic>(std::move(center), std::move(offsets), n_samples,
                                                 noise_scale, options.box_radius);
}

ObjectivePtr make_quadratic_from_centers(const std::vector<ParamVector>& centers,
                                         double box_radius) {
    if (centers.size() < 2) {
        throw ConfigError("quadratic: n_samples must be at least 2 (variance undefined)");
    }
    const std::size_t d = centers.front().dim();
    ParamVector mean(d);
    for (const auto& c : centers) {
        if (c.dim() != d) {
            throw DimensionMismatch(c.dim(), d);
        }
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += c[j];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        mean[j] /= static_cast<double>(centers.size());
    }
    std::vector<double> offsets;
    offsets.reserve(centers.size() * d);
    for (const auto& c : centers) {
        for (std::size_t j = 0; j < d; ++j) {
            offsets.push_back(c[j] - mean[j]);
        }
    }
    return std::make_shared<StochasticQuadratic>(std::move(mean), std::move(offsets),
                                                 centers.size(), 1.0, box_radius);
}

// ---------------------------------------------------------------------------
// Noisy Rosenbrock

namespace {

double rosenbrock_value(double x1, double x2) {
    const double a = 1.0 - x1;
    const double b = x2 - x1 * x1;
    return a * a + 100.0 * b * b;
}

}  // namespace

NoisyRosenbrock::NoisyRosenbrock(std::uint64_t seed, double noise_sigma, double box_radius,
                                 ParamVector start)
    : StochasticObjective(ObjectiveMeta{}),
      seed_(seed),
      noise_sigma_(noise_sigma),
      start_(std::move(start)) {
    if (!(noise_sigma >= 0.0)) {
        throw ConfigError("rosenbrock: noise_sigma must be non-negative");
    }
    if (start_.dim() != 2) {
        throw DimensionMismatch(start_.dim(), 2);
    }
    const double r = box_radius;
    meta_.dim = 2;
    meta_.smoothness_L = 2.0 + 800.0 * r + 1200.0 * r * r;
    meta_.smoothness_kind = ConstantKind::upper_bound;
    meta_.grad_variance_sigma2 = 2.0 * noise_sigma * noise_sigma;
    meta_.variance_kind = ConstantKind::exact;
    if (noise_sigma == 0.0) {
        const double g1 = 2.0 * (1.0 + r) + 400.0 * r * (r + r * r);
        const double g2 = 200.0 * (r + r * r);
        meta_.grad_inf_bound_G = std::max(g1, g2);
    }
    meta_.optimum_value_fstar = 0.0;
    meta_.box_radius = box_radius;
}

MiniBatch NoisyRosenbrock::sample_batch(Rng& rng, std::size_t batch_size) const {
    if (batch_size == 0) {
        throw ConfigError("batch size must be positive");
    }
    std::vector<std::uint64_t> ids;
    ids.reserve(batch_size);
    while (ids.size() < batch_size) {
        const std::uint64_t id = rng.next_u64();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            ids.push_back(id);
        }
    }
    return make_batch(std::move(ids));
}

ParamVector NoisyRosenbrock::sample_noise(std::uint64_t id) const {
    Rng local(mix64(seed_ ^ mix64(id)));
    const double n1 = local.normal();
    const double n2 = local.normal();
    return ParamVector{noise_sigma_ * n1, noise_sigma_ * n2};
}

ParamVector NoisyRosenbrock::mean_noise(const MiniBatch& batch) const {
    ParamVector acc(2);
    if (noise_sigma_ == 0.0) {
        return acc;
    }
    for (std::uint64_t id : batch.indices) {
        const ParamVector n = sample_noise(id);
        acc[0] += n[0];
        acc[1] += n[1];
    }
    const double b = static_cast<double>(batch.size());
    acc[0] /= b;
    acc[1] /= b;
    return acc;
}

ParamVector NoisyRosenbrock::full_grad(const ParamVector& x) const {
    check_dim(x);
    const double x1 = x[0];
    const double x2 = x[1];
    const double b = x2 - x1 * x1;
    return ParamVector{-2.0 * (1.0 - x1) - 400.0 * x1 * b, 200.0 * b};
}

double NoisyRosenbrock::full_loss(const ParamVector& x) const {
    check_dim(x);
    return rosenbrock_value(x[0], x[1]);
}

ParamVector NoisyRosenbrock::batch_grad(const ParamVector& x, const MiniBatch& batch) const {
    check_batch(batch);
    return add(full_grad(x), mean_noise(batch));
}

double NoisyRosenbrock::batch_loss(const ParamVector& x, const MiniBatch& batch) const {
    check_batch(batch);
    return full_loss(x) + dot(mean_noise(batch), x);
}

ObjectivePtr make_noisy_rosenbrock(std::uint64_t seed, double noise_sigma, double box_radius,
                                   ParamVector start) {
    return std::make_shared<NoisyRosenbrock>(seed, noise_sigma, box_radius, std::move(start));
}

// ---------------------------------------------------------------------------
// Synthetic logistic regression

SyntheticLogReg::SyntheticLogReg(std::size_t dim, std::size_t n_samples, std::uint64_t seed,
                                 double label_noise)
    : StochasticObjective(ObjectiveMeta{}), n_(n_samples) {
    if (dim == 0) {
        throw ConfigError("logreg: dim must be at least 1");
    }
    if (n_samples < 2) {
        throw ConfigError("logreg: n_samples must be at least 2");
    }
    Rng rng(seed);
    std::vector<double> w_star(dim);
    for (double& w : w_star) {
        w = rng.normal();
    }
    features_.resize(n_samples * dim);
    labels_.resize(n_samples);
    double max_sq_norm = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double z = 0.0;
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double a = rng.normal();
            features_[i * dim + j] = a;
            z += a * w_star[j];
            sq += a * a;
            max_abs = std::max(max_abs, std::abs(a));
        }
        max_sq_norm = std::max(max_sq_norm, sq);
        labels_[i] = (z + label_noise * rng.normal() > 0.0) ? 1.0 : 0.0;
    }

    meta_.dim = dim;
    meta_.smoothness_L = 0.25 * max_sq_norm;
    meta_.smoothness_kind = ConstantKind::upper_bound;
    meta_.grad_inf_bound_G = max_abs;
    meta_.optimum_value_fstar.reset();
    meta_.n_samples = n_samples;
    meta_.box_radius = 10.0;

    // Empirical per-sample gradient variance at x = 0.
    const ParamVector origin(dim);
    const ParamVector mean = full_grad(origin);
    double var = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double r = 0.5 - labels_[i];
        for (std::size_t j = 0; j < dim; ++j) {
            const double dev = r * features_[i * dim + j] - mean[j];
            var += dev * dev;
        }
    }
    meta_.grad_variance_sigma2 = var / static_cast<double>(n_samples);
    meta_.variance_kind = ConstantKind::empirical;
}

ParamVector SyntheticLogReg::batch_grad(const ParamVector& x, const MiniBatch& batch) const {
    check_dim(x);
    check_batch(batch);
    const std::size_t d = meta_.dim;
    ParamVector acc(d);
    for (std::uint64_t i : batch.indices) {
        const double* row = features_.data() + i * d;
        double z = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            z += row[j] * x[j];
        }
        const double r = kernels::sigmoid(z) - labels_[i];
        for (std::size_t j = 0; j < d; ++j) {
            acc[j] += r * row[j];
        }
    }
    const double b = static_cast<double>(batch.size());
    for (std::size_t j = 0; j < d; ++j) {
        acc[j] /= b;
    }
    return acc;
}

double SyntheticLogReg::batch_loss(const ParamVector& x, const MiniBatch& batch) const {
    check_dim(x);
    check_batch(batch);
    const std::size_t d = meta_.dim;
    double acc = 0.0;
    for (std::uint64_t i : batch.indices) {
        const double* row = features_.data() + i * d;
        double z = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            z += row[j] * x[j];
        }
        acc += kernels::logistic_loss_term(z, labels_[i]);
    }
    return acc / static_cast<double>(batch.size());
}

ParamVector SyntheticLogReg::full_grad(const ParamVector& x) const {
    check_dim(x);
    return kernels::logistic_grad_parallel({features_, labels_, n_, meta_.dim}, x);
}

ParamVector SyntheticLogReg::full_grad_reference(const ParamVector& x) const {
    check_dim(x);
    return kernels::logistic_grad_serial({features_, labels_, n_, meta_.dim}, x);
}

double SyntheticLogReg::full_loss(const ParamVector& x) const {
    check_dim(x);
    return kernels::logistic_loss_parallel({features_, labels_, n_, meta_.dim}, x);
}

ObjectivePtr make_synthetic_logreg(std::size_t dim, std::size_t n_samples, std::uint64_t seed,
                                   double label_noise) {
    return std::make_shared<SyntheticLogReg>(dim, n_samples, seed, label_noise);
}

// ---------------------------------------------------------------------------

ParamVector finite_diff_grad(const StochasticObjective& obj, const ParamVector& x,
                             const MiniBatch& batch, double h) {
    if (!(h > 0.0)) {
        throw ConfigError("finite_diff_grad: step h must be positive");
    }
    ParamVector out(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) {
        ParamVector plus = x;
        ParamVector minus = x;
        plus[j] += h;
        minus[j] -= h;
        out[j] = (obj.batch_loss(plus, batch) - obj.batch_loss(minus, batch)) / (2.0 * h);
    }
    return out;
}

double relative_error(const ParamVector& a, const ParamVector& b) {
    const double denom = std::max(l2_norm(a), l2_norm(b));
    if (denom == 0.0) {
        return 0.0;
    }
    return l2_norm(subtract(a, b)) / denom;
}

}  // namespace optkit
