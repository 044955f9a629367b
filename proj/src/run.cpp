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

#include "optkit/run.hpp"

#include <cmath>
#include <utility>

#include "optkit/error.hpp"

namespace optkit {

namespace {

bool is_adaptive(OptimizerKind kind) {
    return kind == OptimizerKind::amsgrad || kind == OptimizerKind::adasam;
}

}  // namespace

Runner::Runner(OptimizerKind kind, OptimizerConfig cfg, ObjectivePtr objective, RunOptions options)
    : kind_(kind),
      cfg_(std::move(cfg)),
      objective_(std::move(objective)),
      options_(std::move(options)),
      rng_(options_.seed),
      state_(initial_state(options_.x0 ? *options_.x0 : objective_->initial_point(), cfg_)),
      eta_prev_(state_.x.dim(), 1.0) {
    validate(cfg_);
    if (options_.steps == 0) {
        throw ConfigError("run: steps must be at least 1");
    }
    if (options_.batch_size == 0) {
        throw ConfigError("run: batch_size must be at least 1");
    }
    if (options_.eval_stride == 0) {
        throw ConfigError("run: eval_stride must be at least 1");
    }
    const auto& meta = objective_->meta();
    if (meta.n_samples && options_.batch_size > *meta.n_samples) {
        throw ConfigError("run: batch_size exceeds the number of samples");
    }
    if (state_.x.dim() != meta.dim) {
        throw DimensionMismatch(state_.x.dim(), meta.dim);
    }
    if (options_.initial_v_hat_override) {
        state_.v = ParamVector(meta.dim, *options_.initial_v_hat_override);
        state_.v_hat = state_.v;
    }
    if (is_adaptive(kind_)) {
        eta_prev_ = reciprocal(elementwise_sqrt(state_.v_hat));
    }
    ledger_ = make_ledger(meta.dim, cfg_.epsilon, is_adaptive(kind_) && cfg_.use_max_clamp,
                          options_.monitor);
}

std::optional<TrajectoryRecord> Runner::advance() {
    const std::uint64_t t = state_.t;
    const bool due = t % options_.eval_stride == 0;

    TrajectoryRecord rec;
    rec.step = t;
    if (due) {
        rec.loss = objective_->full_loss(state_.x);
        rec.grad_norm_sq = l2_norm_sq(objective_->full_grad(state_.x));
    }
    rec.outside_box = linf_norm(state_.x) > objective_->meta().box_radius;
    if (rec.outside_box) {
        ++box_exits_;
    }

    const MiniBatch batch = objective_->sample_batch(rng_, options_.batch_size);
    StepResult result = step(kind_, state_, cfg_, *objective_, batch);

    const AuxSequencePoint z_now = aux_sequence(state_.x, state_.x_prev, cfg_.beta1);
    const AuxSequencePoint z_next = aux_sequence(result.state.x, result.state.x_prev, cfg_.beta1);
    const ParamVector predicted = predicted_displacement(
        state_.m, eta_prev_, result.report.eta, result.report.sam_grad, cfg_.gamma, cfg_.beta1);
    const double residual = displacement_residual(z_now, z_next, predicted);
    if (!(residual <= max_residual_)) {
        max_residual_ = residual;
    }

    ledger_ = update_ledger(ledger_, eta_prev_, result.report.eta, result.report.sam_grad, t);

    rec.eta_min = min_entry(result.report.eta);
    rec.eta_max = max_entry(result.report.eta);
    rec.eta_l1_diff_sum = ledger_.eta_l1_diff_sum;
    rec.eta_l2sq_diff_sum = ledger_.eta_l2sq_diff_sum;
    rec.g_inf_max = ledger_.g_inf_max;
    rec.displacement_residual = residual;
    rec.perturb_skipped = result.report.perturbation_skipped;

    eta_prev_ = result.report.eta;
    state_ = std::move(result.state);
    last_report_ = std::move(result.report);
    if (!due) {
        return std::nullopt;
    }
    return rec;
}

RunResult Runner::finish(std::vector<TrajectoryRecord> records) const {
    return RunResult{std::move(records),
                     state_,
                     objective_->full_loss(state_.x),
                     l2_norm_sq(objective_->full_grad(state_.x)),
                     ledger_,
                     max_residual_,
                     box_exits_};
}

RunResult run(OptimizerKind kind, const OptimizerConfig& cfg, const ObjectivePtr& objective,
              const RunOptions& options) {
    Runner runner(kind, cfg, objective, options);
    std::vector<TrajectoryRecord> records;
    records.reserve(options.steps / options.eval_stride + 1);
    for (std::uint64_t t = 0; t < options.steps; ++t) {
        if (auto rec = runner.advance()) {
            records.push_back(*rec);
        }
    }
    return runner.finish(std::move(records));
}

}  // namespace optkit
