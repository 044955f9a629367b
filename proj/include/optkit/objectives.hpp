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

#ifndef OPTKIT_OBJECTIVES_HPP
#define OPTKIT_OBJECTIVES_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optkit/numeric.hpp"
#include "optkit/rng.hpp"

namespace optkit {

/// How a reported constant was obtained.
enum class ConstantKind { exact, upper_bound, empirical };

/**
 * Problem constants consumed by step-size validation and the invariant
 * monitors.
 *
 *  - smoothness_L: gradient Lipschitz constant of the full objective.
 *  - grad_variance_sigma2: bound on E||grad f_i(x) - grad f(x)||^2 at batch
 *    size one.
 *  - grad_inf_bound_G: bound on ||stochastic gradient||_inf over the box
 *    [-box_radius, box_radius]^d; nullopt means unbounded (e.g. Gaussian
 *    noise).
 *  - optimum_value_fstar: nullopt when unknown.
 *  - n_samples: size of the finite sample space; nullopt when the sample
 *    space is effectively infinite.
 */
struct ObjectiveMeta {
    std::size_t dim = 1;
    double smoothness_L = 1.0;
    ConstantKind smoothness_kind = ConstantKind::exact;
    double grad_variance_sigma2 = 0.0;
    ConstantKind variance_kind = ConstantKind::exact;
    std::optional<double> grad_inf_bound_G;
    std::optional<double> optimum_value_fstar;
    std::optional<std::uint64_t> n_samples;
    double box_radius = 10.0;
};

/// Sample identifiers for one mini-batch. `token` is a hash of the indices
/// and identifies the batch in step reports.
struct MiniBatch {
    std::vector<std::uint64_t> indices;
    std::uint64_t token = 0;

    std::size_t size() const noexcept { return indices.size(); }
};

MiniBatch make_batch(std::vector<std::uint64_t> indices);
/// Batch holding every sample 0..n-1 in ascending order.
MiniBatch full_batch(std::uint64_t n);

/**
 * Finite-sum objective f(x) = (1/n) sum_i f_i(x) with exactly computable
 * gradients. Implementations are immutable after construction; all
 * evaluation methods are safe to call concurrently.
 */
class StochasticObjective {
public:
    virtual ~StochasticObjective() = default;

    virtual std::string name() const = 0;
    const ObjectiveMeta& meta() const noexcept { return meta_; }

    /// Uniform sampling without replacement within the batch. The caller
    /// owns the generator state.
    virtual MiniBatch sample_batch(Rng& rng, std::size_t batch_size) const;

    virtual ParamVector batch_grad(const ParamVector& x, const MiniBatch& batch) const = 0;
    virtual double batch_loss(const ParamVector& x, const MiniBatch& batch) const = 0;
    virtual ParamVector full_grad(const ParamVector& x) const = 0;
    virtual double full_loss(const ParamVector& x) const = 0;

    virtual ParamVector initial_point() const { return ParamVector(meta_.dim); }

protected:
    explicit StochasticObjective(ObjectiveMeta meta) : meta_(std::move(meta)) {}
    void check_dim(const ParamVector& x) const;
    void check_batch(const MiniBatch& batch) const;

    ObjectiveMeta meta_;
};

using ObjectivePtr = std::shared_ptr<const StochasticObjective>;

/**
 * f_i(x) = 1/2 ||x - c_i||^2 with c_i = c_bar + noise_scale * u_i and the
 * u_i centered so that sum_i u_i = 0.
 *
 * Then grad f(x) = x - c_bar, L = 1, f* = sigma^2 / 2 and
 * sigma^2 = noise_scale^2 * (1/n) sum_i ||u_i||^2, all exact. The batch
 * gradient is evaluated as (x - c_bar) - noise_scale * mean_B(u) so a zero
 * noise scale makes every batch gradient equal the full gradient bit for
 * bit.
 */
class StochasticQuadratic final : public StochasticObjective {
public:
    StochasticQuadratic(ParamVector center, std::vector<double> offsets, std::size_t n_samples,
                        double noise_scale, double box_radius);

    std::string name() const override { return "quadratic"; }

    ParamVector batch_grad(const ParamVector& x, const MiniBatch& batch) const override;
    double batch_loss(const ParamVector& x, const MiniBatch& batch) const override;
    ParamVector full_grad(const ParamVector& x) const override;
    double full_loss(const ParamVector& x) const override;

    const ParamVector& center() const noexcept { return center_; }
    double noise_scale() const noexcept { return noise_scale_; }
    /// c_i for sample i.
    ParamVector sample_center(std::uint64_t i) const;

private:
    ParamVector mean_offset(const MiniBatch& batch) const;
    ParamVector grad_with_offset(const ParamVector& x, const ParamVector& mean_u) const;

    ParamVector center_;
    std::vector<double> offsets_;  // n x d, row-major
    std::size_t n_;
    double noise_scale_;
    ParamVector mean_offset_all_;
};

struct QuadraticOptions {
    double center_scale = 1.0;
    double box_radius = 10.0;
};

ObjectivePtr make_stochastic_quadratic(std::size_t dim, std::size_t n_samples, double noise_scale,
                                       std::uint64_t seed, QuadraticOptions options = {});
/// Quadratic with explicitly given centers (noise_scale 1, u_i = c_i - mean).
ObjectivePtr make_quadratic_from_centers(const std::vector<ParamVector>& centers,
                                         double box_radius = 10.0);

/**
 * Two-dimensional Rosenbrock function with additive gradient noise.
 *
 * Each sample id xi carries a fixed Gaussian vector n_xi with per-coordinate
 * standard deviation noise_sigma, and f_xi(x) = f(x) + <n_xi, x>. Sample ids
 * are 64-bit values, so the sample space is treated as infinite. The batch
 * gradient is grad f(x) plus the mean of b independent noise vectors, giving
 * variance 2 noise_sigma^2 / b.
 *
 * L is the Gershgorin bound of the Hessian over [-R, R]^2:
 * 2 + 800 R + 1200 R^2.
 */
class NoisyRosenbrock final : public StochasticObjective {
public:
    NoisyRosenbrock(std::uint64_t seed, double noise_sigma, double box_radius, ParamVector start);

    std::string name() const override { return "rosenbrock"; }

    MiniBatch sample_batch(Rng& rng, std::size_t batch_size) const override;
    ParamVector batch_grad(const ParamVector& x, const MiniBatch& batch) const override;
    double batch_loss(const ParamVector& x, const MiniBatch& batch) const override;
    ParamVector full_grad(const ParamVector& x) const override;
    double full_loss(const ParamVector& x) const override;
    ParamVector initial_point() const override { return start_; }

    /// Noise vector attached to sample `id`.
    ParamVector sample_noise(std::uint64_t id) const;

private:
    ParamVector mean_noise(const MiniBatch& batch) const;

    std::uint64_t seed_;
    double noise_sigma_;
    ParamVector start_;
};

ObjectivePtr make_noisy_rosenbrock(std::uint64_t seed, double noise_sigma, double box_radius = 2.0,
                                   ParamVector start = ParamVector{-1.2, 1.0});

/**
 * Binary logistic regression on a seeded synthetic dataset: features
 * a_i ~ N(0, I_d), labels y_i = [a_i . w* + label_noise * z_i > 0].
 *
 * Per-sample Hessians are s(1-s) a_i a_i^T <= a_i a_i^T / 4, so
 * L = max_i ||a_i||^2 / 4 bounds the full Hessian. |(s - y) a_ij| <= |a_ij|
 * gives G = max_i ||a_i||_inf. sigma^2 is measured at x = 0.
 */
class SyntheticLogReg final : public StochasticObjective {
public:
    SyntheticLogReg(std::size_t dim, std::size_t n_samples, std::uint64_t seed, double label_noise);

    std::string name() const override { return "logreg"; }

    ParamVector batch_grad(const ParamVector& x, const MiniBatch& batch) const override;
    double batch_loss(const ParamVector& x, const MiniBatch& batch) const override;
    ParamVector full_grad(const ParamVector& x) const override;
    double full_loss(const ParamVector& x) const override;

    std::span<const double> features() const noexcept { return features_; }
    std::span<const double> labels() const noexcept { return labels_; }

    /// Sample-major serial reference for full_grad.
    ParamVector full_grad_reference(const ParamVector& x) const;

private:
    std::size_t n_;
    std::vector<double> features_;  // n x d, row-major
    std::vector<double> labels_;    // 0 or 1
};

ObjectivePtr make_synthetic_logreg(std::size_t dim, std::size_t n_samples, std::uint64_t seed,
                                   double label_noise = 0.5);

/// Central differences of batch_loss, one coordinate at a time.
ParamVector finite_diff_grad(const StochasticObjective& obj, const ParamVector& x,
                             const MiniBatch& batch, double h);

/// ||a - b||_2 / max(||a||_2, ||b||_2); zero when both vanish.
double relative_error(const ParamVector& a, const ParamVector& b);

}  // namespace optkit

#endif  // OPTKIT_OBJECTIVES_HPP
