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

#include "optkit/optimizers.hpp"

#include <cmath>

#include "optkit/error.hpp"

namespace optkit {

namespace {

void require_finite(const ParamVector& g, const char* what, std::uint64_t t) {
    const std::size_t bad = g.first_non_finite();
    if (bad != g.dim()) {
        throw NumericError(std::string("non-finite ") + what, t, bad);
    }
}

void require_state_dim(const OptimizerState& state, const StochasticObjective& obj) {
    if (state.x.dim() != obj.meta().dim) {
        throw DimensionMismatch(state.x.dim(), obj.meta().dim);
    }
}

struct Gradients {
    ParamVector s;
    ParamVector g;
    bool skipped = false;
};

// Lines 3-5: both evaluations use the one sampled batch.
Gradients sam_gradients(const OptimizerState& state, const OptimizerConfig& cfg,
                        const StochasticObjective& obj, const MiniBatch& batch) {
    ParamVector s = obj.batch_grad(state.x, batch);
    require_finite(s, "stochastic gradient s_t", state.t);
    Perturbation p = sam_perturbation(s, cfg.rho_at(state.t), cfg.perturb_norm_floor);
    ParamVector g = p.skipped ? s : obj.batch_grad(add(state.x, p.delta), batch);
    require_finite(g, "SAM gradient g_t", state.t);
    return {std::move(s), std::move(g), p.skipped};
}

ParamVector momentum(const ParamVector& m_prev, const ParamVector& g, double beta1) {
    ParamVector m(g.dim());
    for (std::size_t j = 0; j < g.dim(); ++j) {
        m[j] = beta1 * m_prev[j] + (1.0 - beta1) * g[j];
    }
    return m;
}

// Lines 6-10 given g_t.
StepResult adaptive_update(const OptimizerState& state, const OptimizerConfig& cfg,
                           Gradients grads, std::uint64_t token) {
    const std::size_t d = state.x.dim();
    OptimizerState next{state.x, momentum(state.m, grads.g, cfg.beta1), state.v, state.v_hat,
                        state.x, state.t + 1};
    for (std::size_t j = 0; j < d; ++j) {
        next.v[j] = cfg.beta2 * state.v[j] + (1.0 - cfg.beta2) * grads.g[j] * grads.g[j];
    }
    next.v_hat = cfg.use_max_clamp ? elementwise_max(state.v_hat, next.v) : next.v;
    ParamVector eta = reciprocal(elementwise_sqrt(next.v_hat));
    for (std::size_t j = 0; j < d; ++j) {
        next.x[j] = state.x[j] - (cfg.gamma * eta[j]) * next.m[j];
    }
    return {std::move(next),
            StepReport{std::move(grads.g), std::move(grads.s), std::move(eta), grads.skipped,
                       token, token}};
}

StepResult momentum_update(const OptimizerState& state, const OptimizerConfig& cfg,
                           Gradients grads, std::uint64_t token) {
    const std::size_t d = state.x.dim();
    OptimizerState next{state.x, momentum(state.m, grads.g, cfg.beta1), state.v, state.v_hat,
                        state.x, state.t + 1};
    for (std::size_t j = 0; j < d; ++j) {
        next.x[j] = state.x[j] - cfg.gamma * next.m[j];
    }
    return {std::move(next), StepReport{std::move(grads.g), std::move(grads.s), ones(d),
                                        grads.skipped, token, token}};
}

}  // namespace

std::string_view to_string(OptimizerKind kind) noexcept {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::sam: return "sam";
        case OptimizerKind::amsgrad: return "amsgrad";
        case OptimizerKind::adasam: return "adasam";
    }
    return "unknown";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
    for (auto kind : {OptimizerKind::sgd, OptimizerKind::sam, OptimizerKind::amsgrad,
                      OptimizerKind::adasam}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw ConfigError("unknown optimizer kind '" + std::string(name) +
                      "' (expected sgd, sam, amsgrad or adasam)");
}

void validate(const OptimizerConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw ConfigError("optimizer.gamma must be positive");
    if (!(cfg.rho >= 0.0)) throw ConfigError("optimizer.rho must be non-negative");
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) throw ConfigError("optimizer.beta1 must lie in [0, 1)");
    if (!(cfg.beta2 >= 0.0 && cfg.beta2 <= 1.0)) throw ConfigError("optimizer.beta2 must lie in [0, 1]");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("optimizer.epsilon must be positive");
    if (!(cfg.perturb_norm_floor > 0.0)) {
        throw ConfigError("optimizer.perturb_norm_floor must be positive");
    }
}

double sam_equivalent_gamma(const OptimizerConfig& cfg) noexcept {
    return cfg.gamma * (1.0 / cfg.epsilon);
}

bool step_size_condition_holds(const OptimizerConfig& cfg, const ObjectiveMeta& meta) noexcept {
    return cfg.gamma <= cfg.epsilon / (16.0 * meta.smoothness_L);
}

OptimizerState initial_state(const ParamVector& x0, const OptimizerConfig& cfg) {
    const double eps_sq = cfg.epsilon * cfg.epsilon;
    return OptimizerState{x0, ParamVector(x0.dim()), ParamVector(x0.dim(), eps_sq),
                          ParamVector(x0.dim(), eps_sq), x0, 0};
}

Perturbation sam_perturbation(const ParamVector& s, double rho, double floor) {
    const double norm = l2_norm(s);
    if (norm < floor) {
        return {ParamVector(s.dim()), true};
    }
    ParamVector delta(s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j) {
        delta[j] = rho * (s[j] / norm);
    }
    return {std::move(delta), false};
}

StepResult adasam_step(const OptimizerState& state, const OptimizerConfig& cfg,
                       const StochasticObjective& obj, const MiniBatch& batch) {
    require_state_dim(state, obj);
    return adaptive_update(state, cfg, sam_gradients(state, cfg, obj, batch), batch.token);
}

StepResult amsgrad_step(const OptimizerState& state, const OptimizerConfig& cfg,
                        const StochasticObjective& obj, const MiniBatch& batch) {
    require_state_dim(state, obj);
    ParamVector s = obj.batch_grad(state.x, batch);
    require_finite(s, "stochastic gradient s_t", state.t);
    ParamVector g = s;
    return adaptive_update(state, cfg, Gradients{std::move(s), std::move(g), false}, batch.token);
}

StepResult sam_step(const OptimizerState& state, const OptimizerConfig& cfg,
                    const StochasticObjective& obj, const MiniBatch& batch) {
    require_state_dim(state, obj);
    return momentum_update(state, cfg, sam_gradients(state, cfg, obj, batch), batch.token);
}

StepResult sgd_step(const OptimizerState& state, const OptimizerConfig& cfg,
                    const StochasticObjective& obj, const MiniBatch& batch) {
    require_state_dim(state, obj);
    ParamVector s = obj.batch_grad(state.x, batch);
    require_finite(s, "stochastic gradient s_t", state.t);
    ParamVector g = s;
    return momentum_update(state, cfg, Gradients{std::move(s), std::move(g), false}, batch.token);
}

StepResult step(OptimizerKind kind, const OptimizerState& state, const OptimizerConfig& cfg,
                const StochasticObjective& obj, const MiniBatch& batch) {
    switch (kind) {
        case OptimizerKind::sgd: return sgd_step(state, cfg, obj, batch);
        case OptimizerKind::sam: return sam_step(state, cfg, obj, batch);
        case OptimizerKind::amsgrad: return amsgrad_step(state, cfg, obj, batch);
        case OptimizerKind::adasam: return adasam_step(state, cfg, obj, batch);
    }
    throw ConfigError("unknown optimizer kind");
}

}  // namespace optkit
