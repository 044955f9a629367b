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

#ifndef OPTKIT_HARNESS_HPP
#define OPTKIT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optkit/config.hpp"
#include "optkit/objectives.hpp"
#include "optkit/optimizers.hpp"
#include "optkit/run.hpp"

namespace optkit {

enum class LrScaling { none, sqrt_batch };

struct ObjectiveSpec {
    std::string name = "quadratic";
    std::size_t dim = 10;
    std::size_t n_samples = 1024;
    double noise_scale = 1.0;   // quadratic
    double center_scale = 1.0;  // quadratic
    double noise_sigma = 1.0;   // rosenbrock
    double label_noise = 0.5;   // logreg
    std::uint64_t seed = 0;
    std::optional<double> box_radius;
    std::optional<std::vector<double>> x0;
};

/// Builds "quadratic", "rosenbrock" or "logreg" from its parameters.
ObjectivePtr make_objective(const ObjectiveSpec& spec);

struct ExperimentSpec {
    ObjectiveSpec objective;
    OptimizerKind kind = OptimizerKind::adasam;
    OptimizerConfig optimizer;
    std::uint64_t steps = 1000;
    std::size_t batch_size = 1;
    std::vector<std::uint64_t> seeds{1};
    LrScaling lr_scaling = LrScaling::none;
    std::size_t lr_ref_batch = 1;
    std::uint64_t eval_stride = 1;
    bool strict = false;
    bool parallel = true;
    std::filesystem::path output_path = "out";

    // speedup
    std::vector<std::size_t> batch_sizes{1, 2, 4, 8, 16, 32};
    std::optional<double> threshold;
    std::uint64_t max_steps = 200000;
    std::uint64_t chunk_steps = 256;

    // ablation
    std::map<OptimizerKind, double> ablation_gamma;
    std::vector<double> ablation_beta1{0.0, 0.9};
};

/// Every key understood by spec_from_config.
const std::vector<std::string>& known_config_keys();

/// Validates keys and values; throws ConfigError naming the key path.
ExperimentSpec spec_from_config(const Config& config);

/// gamma scaled for batch size b under the spec's lr_scaling rule.
double scaled_gamma(const ExperimentSpec& spec, std::size_t batch_size);

/// Warning text when gamma exceeds eps / (16 L) for an objective with exact
/// L; empty otherwise.
std::string step_size_warning(const OptimizerConfig& cfg, const ObjectiveMeta& meta);

// ---------------------------------------------------------------------------

struct ExperimentSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<RunResult> runs;                 // one per seed
    std::vector<TrajectoryRecord> mean_records;  // seed-averaged
    std::vector<double> skip_fraction;           // per row, share of seeds that skipped
    double mean_grad_metric = 0.0;               // seed-mean of (1/T) sum ||grad f||^2
    double mean_final_loss = 0.0;
    std::vector<std::filesystem::path> files;
};

/// Runs every seed and, when `write_files`, writes one trajectory CSV per
/// seed plus summary.csv under spec.output_path.
ExperimentSummary run_experiment(const ExperimentSpec& spec, bool write_files = true);

struct SpeedupRow {
    std::size_t batch_size = 1;
    double gamma = 0.0;
    std::optional<std::uint64_t> steps_to_threshold;  // nullopt: not reached
    double final_metric = 0.0;
};

struct SpeedupResult {
    std::vector<SpeedupRow> rows;  // ascending batch size
    double threshold = 0.0;
    bool threshold_is_default = false;
    double predicted_noise_floor = 0.0;
    /// OLS slope of log(steps) on log(b) over rows that reached the
    /// threshold; NaN with fewer than two such rows.
    double loglog_slope = 0.0;
};

/// Steady-state ||grad f||^2 predicted for an adaptive method with sqrt
/// batch scaling: L gamma_ref sqrt(d sigma^2) / 2. Nullopt if sigma^2 is 0.
std::optional<double> predicted_noise_floor(const ExperimentSpec& spec, const ObjectiveMeta& meta);

/**
 * For each batch size, advances all seeds in lockstep and reports the first
 * step count T at which the seed mean of (1/T) sum_{t<T} ||grad f(x_t)||^2
 * falls below the threshold (default: 10x the predicted noise floor).
 */
SpeedupResult run_speedup(const ExperimentSpec& spec);

double loglog_slope(const std::vector<SpeedupRow>& rows);

struct AblationRow {
    OptimizerKind kind = OptimizerKind::sgd;
    double beta1 = 0.0;
    double gamma = 0.0;
    std::vector<double> final_losses;  // per seed
    double mean_final_loss = 0.0;
    double mean_grad_metric = 0.0;
};

/// {sgd, sam, amsgrad, adasam} x ablation_beta1, in that order.
std::vector<AblationRow> run_ablation(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckOptions {
    /// Negative control: start adaptive runs from v_hat_{-1} = 0.
    bool corrupt_v_hat_init = false;
};

/// Suites: "fd", "reductions", "eta", "telescoping", "displacement",
/// "all". Throws ConfigError for an unknown suite.
std::vector<CheckRow> run_checks(const std::string& suite, const CheckOptions& options = {});

// Output helpers.
std::string format_real(double value);
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<TrajectoryRecord>& mean_records,
                       const std::vector<double>& skip_fraction);
void write_speedup_csv(std::ostream& out, const SpeedupResult& result);
void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows);

}  // namespace optkit

#endif  // OPTKIT_HARNESS_HPP
