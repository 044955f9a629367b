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

#include "optkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optkit/error.hpp"

namespace optkit {

namespace {

constexpr std::size_t kMaxMessages = 8;

void report(InvariantLedger& ledger, std::uint64_t& counter, const std::string& what,
            std::uint64_t step) {
    ++counter;
    if (ledger.mode == MonitorMode::hard) {
        throw InvariantViolation(what, step);
    }
    if (ledger.messages.size() < kMaxMessages) {
        ledger.messages.push_back(what + " (step " + std::to_string(step) + ")");
    }
}

}  // namespace

InvariantLedger make_ledger(std::size_t d, double epsilon, bool clamp_active, MonitorMode mode) {
    InvariantLedger ledger;
    ledger.d = d;
    ledger.epsilon = epsilon;
    ledger.clamp_active = clamp_active;
    ledger.mode = mode;
    return ledger;
}

double telescoping_bound(const InvariantLedger& ledger) noexcept {
    const double g = std::max(ledger.epsilon, ledger.g_inf_max);
    return static_cast<double>(ledger.d) * (1.0 / ledger.epsilon - 1.0 / g);
}

EtaBoundCheck check_eta_bounds(const ParamVector& eta, double epsilon, double g_inf_max,
                               double tol) {
    EtaBoundCheck out;
    const double upper = 1.0 / epsilon;
    const double lower = 1.0 / std::max(epsilon, g_inf_max);
    for (double e : eta) {
        // Negated comparisons so NaN counts as a violation.
        if (!(e <= upper * (1.0 + tol))) {
            ++out.upper_violations;
        }
        if (!(e >= lower * (1.0 - tol))) {
            ++out.lower_violations;
        }
    }
    return out;
}

InvariantLedger update_ledger(const InvariantLedger& ledger, const ParamVector& eta_prev,
                              const ParamVector& eta_now, const ParamVector& g_now,
                              std::uint64_t step) {
    if (eta_prev.dim() != eta_now.dim()) throw DimensionMismatch(eta_prev.dim(), eta_now.dim());
    if (g_now.dim() != eta_now.dim()) throw DimensionMismatch(g_now.dim(), eta_now.dim());
    if (eta_now.dim() != ledger.d) throw DimensionMismatch(eta_now.dim(), ledger.d);

    InvariantLedger next = ledger;
    next.steps += 1;
    next.g_inf_max = std::max(ledger.g_inf_max, linf_norm(g_now));
    for (std::size_t j = 0; j < eta_now.dim(); ++j) {
        const double diff = eta_prev[j] - eta_now[j];
        next.eta_l1_diff_sum += std::abs(diff);
        next.eta_l2sq_diff_sum += diff * diff;
    }
    if (!next.clamp_active) {
        return next;
    }

    const double bound = telescoping_bound(next);
    if (!(next.eta_l1_diff_sum <= bound + next.tolerance_abs)) {
        std::ostringstream os;
        os.precision(17);
        os << "telescoping bound violated: sum ||eta_{t-1} - eta_t||_1 = " << next.eta_l1_diff_sum
           << " > d (1/eps - 1/G) = " << bound;
        report(next, next.telescoping_violations, os.str(), step);
    }
    const EtaBoundCheck bounds =
        check_eta_bounds(eta_now, next.epsilon, next.g_inf_max, next.tolerance_rel);
    if (!bounds.ok()) {
        std::ostringstream os;
        os << "eta bound violated: " << bounds.upper_violations << " coordinate(s) above 1/eps, "
           << bounds.lower_violations << " below 1/max(eps, G)";
        report(next, next.eta_bound_violations, os.str(), step);
    }
    std::size_t increases = 0;
    for (std::size_t j = 0; j < eta_now.dim(); ++j) {
        if (!(eta_now[j] <= eta_prev[j])) {
            ++increases;
        }
    }
    if (increases > 0) {
        report(next, next.monotonicity_violations,
               "eta increased in " + std::to_string(increases) + " coordinate(s)", step);
    }
    return next;
}

AuxSequencePoint aux_sequence(const ParamVector& x_now, const ParamVector& x_prev, double beta1) {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) {
        throw ConfigError("aux_sequence: beta1 must lie in [0, 1)");
    }
    if (beta1 == 0.0) {
        return {x_now};
    }
    const double k = beta1 / (1.0 - beta1);
    return {axpy(k, subtract(x_now, x_prev), x_now)};
}

ParamVector predicted_displacement(const ParamVector& m_prev, const ParamVector& eta_prev,
                                   const ParamVector& eta_now, const ParamVector& g_now,
                                   double gamma, double beta1) {
    const double k = beta1 / (1.0 - beta1);
    ParamVector out(g_now.dim());
    for (std::size_t j = 0; j < g_now.dim(); ++j) {
        out[j] = k * gamma * m_prev[j] * (eta_prev[j] - eta_now[j]) - gamma * g_now[j] * eta_now[j];
    }
    return out;
}

double displacement_residual(const AuxSequencePoint& z_now, const AuxSequencePoint& z_next,
                             const ParamVector& predicted) {
    double worst = 0.0;
    for (std::size_t j = 0; j < predicted.dim(); ++j) {
        const double r = std::abs((z_next.z[j] - z_now.z[j]) - predicted[j]);
        worst = std::isnan(r) ? r : std::max(worst, r);
        if (std::isnan(worst)) {
            break;
        }
    }
    return worst;
}

double grad_norm_metric(std::span<const TrajectoryRecord> trajectory) {
    if (trajectory.empty()) {
        throw ConfigError("grad_norm_metric: empty trajectory");
    }
    double acc = 0.0;
    for (const auto& r : trajectory) {
        acc += r.grad_norm_sq;
    }
    return acc / static_cast<double>(trajectory.size());
}

}  // namespace optkit
