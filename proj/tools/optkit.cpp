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

// optkit command-line front end.
//
//   optkit run <config>                  seeded runs, one CSV per seed + summary
//   optkit speedup <config> [--threshold R]
//   optkit ablation <config>
//   optkit check [suite]
//
// Exit codes: 0 success, 1 usage/config error, 2 invariant failure,
// 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optkit/error.hpp"
#include "optkit/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("config", flags.config_path, "experiment config file")->required();
    cmd->add_option("--seed", flags.seed, "base seed (replaces run.seed and drops run.seeds)");
    cmd->add_option("--out", flags.out, "output directory (output.path)");
    cmd->add_option("--override", flags.overrides, "key=value, applied after the config file")
        ->take_all();
}

optkit::ExperimentSpec load_spec(const CommonFlags& flags) {
    optkit::Config cfg = optkit::Config::load(flags.config_path);
    for (const auto& kv : flags.overrides) {
        cfg.apply_override(kv);
    }
    if (flags.seed) {
        cfg.set("run.seed", std::to_string(*flags.seed));
        cfg.erase("run.seeds");
    }
    if (flags.out) {
        cfg.set("output.path", *flags.out);
    }
    return optkit::spec_from_config(cfg);
}

void warn_step_size(const optkit::ExperimentSpec& spec) {
    const auto objective = optkit::make_objective(spec.objective);
    const std::string msg = optkit::step_size_warning(spec.optimizer, objective->meta());
    if (!msg.empty()) {
        std::cerr << msg << '\n';
    }
}

std::ofstream open_table(const optkit::ExperimentSpec& spec, const std::string& name) {
    std::filesystem::create_directories(spec.output_path);
    const auto path = spec.output_path / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw optkit::ConfigError("cannot write output file '" + path.string() + "'");
    }
    return out;
}

int cmd_run(const CommonFlags& flags) {
    const auto spec = load_spec(flags);
    warn_step_size(spec);
    const auto summary = optkit::run_experiment(spec);
    for (const auto& path : summary.files) {
        std::cout << "wrote " << path.string() << '\n';
    }
    std::cout << "seed-mean final loss " << optkit::format_real(summary.mean_final_loss) << '\n';
    std::cout << "seed-mean avg ||grad f||^2 " << optkit::format_real(summary.mean_grad_metric)
              << '\n';
    std::uint64_t violations = 0;
    for (const auto& run : summary.runs) {
        violations += run.ledger.total_violations();
    }
    if (violations != 0) {
        std::cerr << "invariant monitor recorded " << violations << " violations\n";
    }
    return kExitOk;
}

int cmd_speedup(const CommonFlags& flags, std::optional<double> threshold) {
    auto spec = load_spec(flags);
    if (threshold) {
        if (!(*threshold > 0.0)) {
            throw optkit::ConfigError("--threshold must be positive");
        }
        spec.threshold = threshold;
    }
    warn_step_size(spec);
    const auto result = optkit::run_speedup(spec);
    std::cout << "threshold " << optkit::format_real(result.threshold)
              << (result.threshold_is_default ? " (default: 10 x predicted noise floor "
                                                      + optkit::format_real(result.predicted_noise_floor) + ")"
                                              : "")
              << '\n';
    std::cout << "batch_size  gamma                 steps_to_threshold\n";
    for (const auto& row : result.rows) {
        char line[128];
        std::snprintf(line, sizeof line, "%10zu  %-20.6g  %s\n", row.batch_size, row.gamma,
                      row.steps_to_threshold ? std::to_string(*row.steps_to_threshold).c_str()
                                             : "not reached");
        std::cout << line;
    }
    std::cout << "log-log slope " << optkit::format_real(result.loglog_slope) << '\n';
    auto out = open_table(spec, "speedup.csv");
    optkit::write_speedup_csv(out, result);
    return kExitOk;
}

int cmd_ablation(const CommonFlags& flags) {
    const auto spec = load_spec(flags);
    warn_step_size(spec);
    const auto rows = optkit::run_ablation(spec);
    std::cout << "optimizer  beta1  mean_final_loss\n";
    for (const auto& row : rows) {
        char line[128];
        std::snprintf(line, sizeof line, "%-9s  %-5.3g  %.10g\n",
                      std::string(optkit::to_string(row.kind)).c_str(), row.beta1,
                      row.mean_final_loss);
        std::cout << line;
    }
    auto out = open_table(spec, "ablation.csv");
    optkit::write_ablation_csv(out, rows);
    return kExitOk;
}

int cmd_check(const std::string& suite, bool corrupt) {
    optkit::CheckOptions options;
    options.corrupt_v_hat_init = corrupt;
    const auto rows = optkit::run_checks(suite, options);
    bool ok = true;
    for (const auto& row : rows) {
        std::cout << (row.passed ? "PASS  " : "FAIL  ") << row.name << "  " << row.detail << '\n';
        ok = ok && row.passed;
    }
    std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optkit: sharpness-aware adaptive optimizer experiments"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "run seeded trajectories");
    add_common(run, run_flags);

    CommonFlags speedup_flags;
    std::optional<double> threshold;
    auto* speedup = app.add_subcommand("speedup", "mini-batch speedup sweep");
    add_common(speedup, speedup_flags);
    speedup->add_option("--threshold", threshold, "gradient-metric threshold");

    CommonFlags ablation_flags;
    auto* ablation = app.add_subcommand("ablation", "optimizer x momentum grid");
    add_common(ablation, ablation_flags);

    std::string suite = "all";
    bool corrupt = false;
    auto* check = app.add_subcommand("check", "invariant suite");
    check->add_option("suite", suite, "fd, reductions, eta, telescoping, displacement or all");
    check->add_flag("--corrupt-vhat-init", corrupt, "negative control: start from v_hat = 0")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*speedup) return cmd_speedup(speedup_flags, threshold);
        if (*ablation) return cmd_ablation(ablation_flags);
        if (*check) return cmd_check(suite, corrupt);
    } catch (const optkit::InvariantViolation& e) {
        std::cerr << "invariant failure: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const optkit::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const optkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
