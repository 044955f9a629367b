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

#ifndef OPTKIT_RUN_HPP
#define OPTKIT_RUN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "optkit/diagnostics.hpp"
#include "optkit/objectives.hpp"
#include "optkit/optimizers.hpp"
#include "optkit/rng.hpp"

namespace optkit {

struct RunOptions {
    std::uint64_t steps = 1000;
    std::size_t batch_size = 1;
    std::uint64_t seed = 1;
    /// Starting point; the objective's initial_point() when unset.
    std::optional<ParamVector> x0;
    /// Full loss and gradient are evaluated every `eval_stride` steps.
    std::uint64_t eval_stride = 1;
    MonitorMode monitor = MonitorMode::soft;
    /// Test hook: replaces v_hat_{-1} = eps^2 (and v_{-1}) with this value.
    std::optional<double> initial_v_hat_override;
};

struct RunResult {
    std::vector<TrajectoryRecord> records;
    OptimizerState final_state;
    double final_loss = 0.0;
    double final_grad_norm_sq = 0.0;
    InvariantLedger ledger;
    double max_displacement_residual = 0.0;
    std::uint64_t box_exits = 0;
};

/**
 * Stepwise driver for one seeded run. The batch stream is drawn from
 * Rng(seed); everything else is deterministic, so two runners built with
 * identical arguments produce bit-identical records.
 */
class Runner {
public:
    Runner(OptimizerKind kind, OptimizerConfig cfg, ObjectivePtr objective, RunOptions options);

    /// Performs step t = steps_done(). Returns the record for x_t when the
    /// step falls on the evaluation stride.
    std::optional<TrajectoryRecord> advance();

    std::uint64_t steps_done() const noexcept { return state_.t; }
    const OptimizerState& state() const noexcept { return state_; }
    const InvariantLedger& ledger() const noexcept { return ledger_; }
    const StepReport* last_report() const noexcept { return last_report_ ? &*last_report_ : nullptr; }
    double max_displacement_residual() const noexcept { return max_residual_; }
    std::uint64_t box_exits() const noexcept { return box_exits_; }

    RunResult finish(std::vector<TrajectoryRecord> records) const;

private:
    OptimizerKind kind_;
    OptimizerConfig cfg_;
    ObjectivePtr objective_;
    RunOptions options_;
    Rng rng_;
    OptimizerState state_;
    ParamVector eta_prev_;
    InvariantLedger ledger_;
    std::optional<StepReport> last_report_;
    double max_residual_ = 0.0;
    std::uint64_t box_exits_ = 0;
};

/// Runs `options.steps` steps and returns every recorded step. Errors from
/// a step propagate with the step index attached.
RunResult run(OptimizerKind kind, const OptimizerConfig& cfg, const ObjectivePtr& objective,
              const RunOptions& options);

}  // namespace optkit

#endif  // OPTKIT_RUN_HPP
