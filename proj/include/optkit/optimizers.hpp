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

#ifndef OPTKIT_OPTIMIZERS_HPP
#define OPTKIT_OPTIMIZERS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "optkit/numeric.hpp"
#include "optkit/objectives.hpp"

namespace optkit {

enum class OptimizerKind { sgd, sam, amsgrad, adasam };

std::string_view to_string(OptimizerKind kind) noexcept;
/// Throws ConfigError for unknown names.
OptimizerKind parse_optimizer_kind(std::string_view name);

/**
 * Hyperparameters shared by every optimizer kind.
 *
 * epsilon only initializes the clamped second moment (v_hat_{-1} = eps^2);
 * it is never added to a denominator, so eta <= 1/eps holds exactly.
 * rho_schedule, when set, maps the step index to the neighborhood size and
 * replaces the constant rho.
 */
struct OptimizerConfig {
    double gamma = 1e-3;
    double rho = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-4;
    bool use_max_clamp = true;
    double perturb_norm_floor = 1e-12;
    std::function<double(std::uint64_t step)> rho_schedule;

    double rho_at(std::uint64_t step) const { return rho_schedule ? rho_schedule(step) : rho; }
};

/// Throws ConfigError if a hyperparameter is out of range.
void validate(const OptimizerConfig& cfg);

/// Learning rate for which SAM reproduces AdaSAM run with beta2 = 1. The
/// product is formed as gamma * (1/eps), the same rounding AdaSAM applies.
double sam_equivalent_gamma(const OptimizerConfig& cfg) noexcept;

/// True when gamma <= eps / (16 L), the step-size condition of the
/// convergence guarantee.
bool step_size_condition_holds(const OptimizerConfig& cfg, const ObjectiveMeta& meta) noexcept;

struct OptimizerState {
    ParamVector x;       // x_t
    ParamVector m;       // m_{t-1} before the step, m_t after
    ParamVector v;       // second moment
    ParamVector v_hat;   // clamped second moment
    ParamVector x_prev;  // x_{t-1}; equals x_0 before the first step
    std::uint64_t t = 0;
};

/// m = 0, v = v_hat = eps^2, x_prev = x0.
OptimizerState initial_state(const ParamVector& x0, const OptimizerConfig& cfg);

struct StepReport {
    ParamVector sam_grad;          // g_t
    ParamVector pre_perturb_grad;  // s_t
    ParamVector eta;               // 1/sqrt(v_hat_t); ones for sgd and sam
    bool perturbation_skipped = false;
    std::uint64_t s_batch_token = 0;
    std::uint64_t g_batch_token = 0;
};

struct StepResult {
    OptimizerState state;
    StepReport report;
};

/// delta = rho s / ||s||_2, or zero when ||s||_2 < floor.
struct Perturbation {
    ParamVector delta;
    bool skipped = false;
};

Perturbation sam_perturbation(const ParamVector& s, double rho, double floor);

// Each step is a pure transition: it evaluates the batch gradient s_t at
// x_t (and, for the SAM kinds, g_t at x_t + delta on the same batch), then
// returns the successor state. A non-finite gradient throws NumericError.

StepResult adasam_step(const OptimizerState& state, const OptimizerConfig& cfg,
                       const StochasticObjective& obj, const MiniBatch& batch);
StepResult amsgrad_step(const OptimizerState& state, const OptimizerConfig& cfg,
                        const StochasticObjective& obj, const MiniBatch& batch);
StepResult sam_step(const OptimizerState& state, const OptimizerConfig& cfg,
                    const StochasticObjective& obj, const MiniBatch& batch);
StepResult sgd_step(const OptimizerState& state, const OptimizerConfig& cfg,
                    const StochasticObjective& obj, const MiniBatch& batch);

StepResult step(OptimizerKind kind, const OptimizerState& state, const OptimizerConfig& cfg,
                const StochasticObjective& obj, const MiniBatch& batch);

}  // namespace optkit

#endif  // OPTKIT_OPTIMIZERS_HPP
