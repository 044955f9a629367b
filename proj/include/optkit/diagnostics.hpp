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

#ifndef OPTKIT_DIAGNOSTICS_HPP
#define OPTKIT_DIAGNOSTICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optkit/numeric.hpp"

namespace optkit {

/// Action taken when a monitor detects a violation.
enum class MonitorMode {
    soft,  // record and continue
    hard,  // throw InvariantViolation
};

/**
 * Running sums for the adaptive step sizes of one run.
 *
 * With the max clamp active each coordinate of eta is non-increasing, so
 * sum_t ||eta_{t-1} - eta_t||_1 telescopes to sum_j (eta_{-1}[j] - eta_t[j])
 * and stays below d (1/eps - 1/G) with G the running max of ||g||_inf.
 * The same clamp gives eps^2 <= v_hat, i.e. eta <= 1/eps, and
 * v_hat <= max(eps^2, max_s g_s^2), i.e. eta >= 1/max(eps, G).
 *
 * The monitors check these at every update with the current running G.
 * With the clamp off the sums are still recorded but nothing is asserted.
 */
struct InvariantLedger {
    double eta_l1_diff_sum = 0.0;
    double eta_l2sq_diff_sum = 0.0;
    double g_inf_max = 0.0;
    std::size_t d = 1;
    double epsilon = 1.0;
    bool clamp_active = true;
    MonitorMode mode = MonitorMode::soft;
    double tolerance_abs = 1e-9;    // telescoping bound
    double tolerance_rel = 1e-12;   // eta bounds and monotonicity
    std::uint64_t steps = 0;
    std::uint64_t telescoping_violations = 0;
    std::uint64_t eta_bound_violations = 0;
    std::uint64_t monotonicity_violations = 0;
    std::vector<std::string> messages;  // first few violation descriptions

    std::uint64_t total_violations() const noexcept {
        return telescoping_violations + eta_bound_violations + monotonicity_violations;
    }
};

InvariantLedger make_ledger(std::size_t d, double epsilon, bool clamp_active,
                            MonitorMode mode = MonitorMode::soft);

/// d (1/eps - 1/max(eps, G)).
double telescoping_bound(const InvariantLedger& ledger) noexcept;

/// Accumulates one step. `step` is used in violation messages. In hard
/// mode a violation throws InvariantViolation.
InvariantLedger update_ledger(const InvariantLedger& ledger, const ParamVector& eta_prev,
                              const ParamVector& eta_now, const ParamVector& g_now,
                              std::uint64_t step);

struct EtaBoundCheck {
    std::size_t upper_violations = 0;
    std::size_t lower_violations = 0;
    bool ok() const noexcept { return upper_violations == 0 && lower_violations == 0; }
};

/// eta[j] <= 1/eps and eta[j] >= 1/max(eps, g_inf_max), relative tolerance
/// `tol`.
EtaBoundCheck check_eta_bounds(const ParamVector& eta, double epsilon, double g_inf_max,
                               double tol = 1e-12);

struct AuxSequencePoint {
    ParamVector z;
};

/// z = x_now + beta1 / (1 - beta1) (x_now - x_prev).
AuxSequencePoint aux_sequence(const ParamVector& x_now, const ParamVector& x_prev, double beta1);

/**
 * Right-hand side of the momentum displacement identity
 *   z_{t+1} - z_t = beta1/(1-beta1) gamma m_{t-1} (eta_{t-1} - eta_t) - gamma g_t eta_t
 * evaluated from optimizer internals.
 */
ParamVector predicted_displacement(const ParamVector& m_prev, const ParamVector& eta_prev,
                                   const ParamVector& eta_now, const ParamVector& g_now,
                                   double gamma, double beta1);

/// max_j |(z_next - z_now)[j] - predicted[j]|.
double displacement_residual(const AuxSequencePoint& z_now, const AuxSequencePoint& z_next,
                             const ParamVector& predicted);

/// Per-step record of a run.
struct TrajectoryRecord {
    std::uint64_t step = 0;
    double loss = 0.0;          // f(x_t)
    double grad_norm_sq = 0.0;  // ||grad f(x_t)||^2
    double eta_min = 0.0;
    double eta_max = 0.0;
    double eta_l1_diff_sum = 0.0;
    double eta_l2sq_diff_sum = 0.0;
    double g_inf_max = 0.0;
    double displacement_residual = 0.0;
    bool perturb_skipped = false;
    bool outside_box = false;
};

/// (1/T) sum_t ||grad f(x_t)||^2 over the records. Throws on empty input.
double grad_norm_metric(std::span<const TrajectoryRecord> trajectory);

}  // namespace optkit

#endif  // OPTKIT_DIAGNOSTICS_HPP
