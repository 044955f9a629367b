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

#include "optkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "optkit/error.hpp"
#include "optkit/kernels.hpp"

namespace optkit {

namespace {

constexpr OptimizerKind kAllKinds[] = {OptimizerKind::sgd, OptimizerKind::sam,
                                       OptimizerKind::amsgrad, OptimizerKind::adasam};

void for_each(bool parallel, std::size_t count, const std::function<void(std::size_t)>& body) {
    if (parallel) {
        kernels::for_each_index_parallel(count, body);
    } else {
        kernels::for_each_index_serial(count, body);
    }
}

RunOptions run_options(const ExperimentSpec& spec, std::uint64_t seed, std::size_t batch_size) {
    RunOptions opts;
    opts.steps = spec.steps;
    opts.batch_size = batch_size;
    opts.seed = seed;
    if (spec.objective.x0) {
        opts.x0 = ParamVector(*spec.objective.x0);
    }
    opts.eval_stride = spec.eval_stride;
    opts.monitor = spec.strict ? MonitorMode::hard : MonitorMode::soft;
    return opts;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write output file '" + path.string() + "'");
    }
    return out;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

ObjectivePtr make_objective(const ObjectiveSpec& spec) {
    if (spec.name == "quadratic") {
        QuadraticOptions opts;
        opts.center_scale = spec.center_scale;
        if (spec.box_radius) {
            opts.box_radius = *spec.box_radius;
        }
        return make_stochastic_quadratic(spec.dim, spec.n_samples, spec.noise_scale, spec.seed,
                                         opts);
    }
    if (spec.name == "rosenbrock") {
        ParamVector start{-1.2, 1.0};
        if (spec.x0) {
            start = ParamVector(*spec.x0);
        }
        return make_noisy_rosenbrock(spec.seed, spec.noise_sigma, spec.box_radius.value_or(2.0),
                                     std::move(start));
    }
    if (spec.name == "logreg") {
        if (spec.box_radius) {
            throw ConfigError("objective.box_radius is not supported for logreg");
        }
        return make_synthetic_logreg(spec.dim, spec.n_samples, spec.seed, spec.label_noise);
    }
    throw ConfigError("objective.name: unknown objective '" + spec.name +
                      "' (expected quadratic, rosenbrock or logreg)");
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "objective.name",        "objective.dim",          "objective.n_samples",
        "objective.noise_scale", "objective.center_scale", "objective.noise_sigma",
        "objective.label_noise", "objective.seed",         "objective.box_radius",
        "objective.x0",          "optimizer.kind",         "optimizer.gamma",
        "optimizer.rho",         "optimizer.beta1",        "optimizer.beta2",
        "optimizer.epsilon",     "optimizer.use_max_clamp", "optimizer.perturb_norm_floor",
        "run.steps",             "run.batch_size",         "run.seed",
        "run.num_seeds",         "run.seeds",              "run.lr_scaling",
        "run.lr_ref_batch",      "run.eval_stride",        "run.strict",
        "run.parallel",          "output.path",            "speedup.batch_sizes",
        "speedup.threshold",     "speedup.max_steps",      "speedup.chunk",
        "ablation.gamma.sgd",    "ablation.gamma.sam",     "ablation.gamma.amsgrad",
        "ablation.gamma.adasam", "ablation.beta1",
    };
    return keys;
}

ExperimentSpec spec_from_config(const Config& config) {
    config.require_known(known_config_keys());
    ExperimentSpec spec;

    ObjectiveSpec& obj = spec.objective;
    obj.name = config.get_string("objective.name", obj.name);
    if (obj.name == "rosenbrock") {
        if (config.get_uint("objective.dim", 2) != 2) {
            throw ConfigError("objective.dim: rosenbrock is two-dimensional");
        }
        obj.dim = 2;
    } else {
        obj.dim = config.get_uint("objective.dim", obj.dim);
    }
    obj.n_samples = config.get_uint("objective.n_samples", obj.n_samples);
    obj.noise_scale = config.get_double("objective.noise_scale", obj.noise_scale);
    obj.center_scale = config.get_double("objective.center_scale", obj.center_scale);
    obj.noise_sigma = config.get_double("objective.noise_sigma", obj.noise_sigma);
    obj.label_noise = config.get_double("objective.label_noise", obj.label_noise);
    obj.seed = config.get_uint("objective.seed", obj.seed);
    obj.box_radius = config.get_optional_double("objective.box_radius");
    obj.x0 = config.get_double_list("objective.x0");
    if (obj.x0 && obj.x0->size() != obj.dim) {
        throw ConfigError("objective.x0: expected " + std::to_string(obj.dim) + " values, got " +
                          std::to_string(obj.x0->size()));
    }
    if (obj.dim == 0) throw ConfigError("objective.dim must be at least 1");

    spec.kind = parse_optimizer_kind(config.get_string("optimizer.kind", "adasam"));
    OptimizerConfig& opt = spec.optimizer;
    opt.gamma = config.get_double("optimizer.gamma", opt.gamma);
    opt.rho = config.get_double("optimizer.rho", opt.rho);
    opt.beta1 = config.get_double("optimizer.beta1", opt.beta1);
    opt.beta2 = config.get_double("optimizer.beta2", opt.beta2);
    opt.epsilon = config.get_double("optimizer.epsilon", opt.epsilon);
    opt.use_max_clamp = config.get_bool("optimizer.use_max_clamp", opt.use_max_clamp);
    opt.perturb_norm_floor = config.get_double("optimizer.perturb_norm_floor", opt.perturb_norm_floor);
    validate(opt);

    spec.steps = config.get_uint("run.steps", spec.steps);
    if (spec.steps == 0) throw ConfigError("run.steps must be at least 1");
    spec.batch_size = config.get_uint("run.batch_size", spec.batch_size);
    if (spec.batch_size == 0) throw ConfigError("run.batch_size must be at least 1");

    if (auto seeds = config.get_uint_list("run.seeds")) {
        spec.seeds = *seeds;
    } else {
        const std::uint64_t base = config.get_uint("run.seed", 1);
        const std::uint64_t count = config.get_uint("run.num_seeds", 1);
        if (count == 0) throw ConfigError("run.num_seeds must be at least 1");
        spec.seeds.clear();
        for (std::uint64_t i = 0; i < count; ++i) {
            spec.seeds.push_back(base + i);
        }
    }
    if (std::set<std::uint64_t>(spec.seeds.begin(), spec.seeds.end()).size() != spec.seeds.size()) {
        throw ConfigError("run.seeds: seeds must be distinct");
    }

    const std::string scaling = config.get_string("run.lr_scaling", "none");
    if (scaling == "none") {
        spec.lr_scaling = LrScaling::none;
    } else if (scaling == "sqrt_batch") {
        spec.lr_scaling = LrScaling::sqrt_batch;
    } else {
        throw ConfigError("run.lr_scaling: expected none or sqrt_batch, got '" + scaling + "'");
    }
    spec.lr_ref_batch = config.get_uint("run.lr_ref_batch", spec.lr_ref_batch);
    if (spec.lr_ref_batch == 0) throw ConfigError("run.lr_ref_batch must be at least 1");
    spec.eval_stride = config.get_uint("run.eval_stride", spec.eval_stride);
    if (spec.eval_stride == 0) throw ConfigError("run.eval_stride must be at least 1");
    spec.strict = config.get_bool("run.strict", spec.strict);
    spec.parallel = config.get_bool("run.parallel", spec.parallel);
    spec.output_path = config.get_string("output.path", spec.output_path.string());

    if (auto sizes = config.get_uint_list("speedup.batch_sizes")) {
        spec.batch_sizes.assign(sizes->begin(), sizes->end());
        std::sort(spec.batch_sizes.begin(), spec.batch_sizes.end());
        if (spec.batch_sizes.front() == 0) {
            throw ConfigError("speedup.batch_sizes: batch sizes must be at least 1");
        }
        if (std::adjacent_find(spec.batch_sizes.begin(), spec.batch_sizes.end()) !=
            spec.batch_sizes.end()) {
            throw ConfigError("speedup.batch_sizes: batch sizes must be distinct");
        }
    }
    spec.threshold = config.get_optional_double("speedup.threshold");
    if (spec.threshold && !(*spec.threshold > 0.0)) {
        throw ConfigError("speedup.threshold must be positive");
    }
    spec.max_steps = config.get_uint("speedup.max_steps", spec.max_steps);
    spec.chunk_steps = config.get_uint("speedup.chunk", spec.chunk_steps);
    if (spec.max_steps == 0) throw ConfigError("speedup.max_steps must be at least 1");
    if (spec.chunk_steps == 0) throw ConfigError("speedup.chunk must be at least 1");

    for (OptimizerKind kind : kAllKinds) {
        const std::string key = "ablation.gamma." + std::string(to_string(kind));
        if (auto g = config.get_optional_double(key)) {
            if (!(*g > 0.0)) throw ConfigError(key + " must be positive");
            spec.ablation_gamma[kind] = *g;
        }
    }
    if (auto b1 = config.get_double_list("ablation.beta1")) {
        for (double b : *b1) {
            if (!(b >= 0.0 && b < 1.0)) throw ConfigError("ablation.beta1 values must lie in [0, 1)");
        }
        spec.ablation_beta1 = *b1;
    }
    return spec;
}

double scaled_gamma(const ExperimentSpec& spec, std::size_t batch_size) {
    if (spec.lr_scaling == LrScaling::none) {
        return spec.optimizer.gamma;
    }
    return spec.optimizer.gamma *
           std::sqrt(static_cast<double>(batch_size) / static_cast<double>(spec.lr_ref_batch));
}

std::string step_size_warning(const OptimizerConfig& cfg, const ObjectiveMeta& meta) {
    if (step_size_condition_holds(cfg, meta)) {
        return {};
    }
    const double limit = cfg.epsilon / (16.0 * meta.smoothness_L);
    return "warning: gamma = " + format_real(cfg.gamma) + " exceeds eps/(16 L) = " +
           format_real(limit) + "; the convergence guarantee does not cover this step size";
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentSummary run_experiment(const ExperimentSpec& spec, bool write_files) {
    const ObjectivePtr objective = make_objective(spec.objective);
    OptimizerConfig cfg = spec.optimizer;
    cfg.gamma = scaled_gamma(spec, spec.batch_size);

    ExperimentSummary summary;
    summary.seeds = spec.seeds;
    std::vector<std::optional<RunResult>> results(spec.seeds.size());
    for_each(spec.parallel, spec.seeds.size(), [&](std::size_t i) {
        results[i] =
            run(spec.kind, cfg, objective, run_options(spec, spec.seeds[i], spec.batch_size));
    });
    for (auto& r : results) {
        summary.runs.push_back(std::move(*r));
    }

    const std::size_t rows = summary.runs.front().records.size();
    const double n = static_cast<double>(summary.runs.size());
    summary.mean_records.resize(rows);
    summary.skip_fraction.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        TrajectoryRecord& mean = summary.mean_records[r];
        mean.step = summary.runs.front().records[r].step;
        double skipped = 0.0;
        for (const RunResult& run : summary.runs) {
            const TrajectoryRecord& rec = run.records[r];
            mean.loss += rec.loss;
            mean.grad_norm_sq += rec.grad_norm_sq;
            mean.eta_min += rec.eta_min;
            mean.eta_max += rec.eta_max;
            mean.eta_l1_diff_sum += rec.eta_l1_diff_sum;
            skipped += rec.perturb_skipped ? 1.0 : 0.0;
        }
        mean.loss /= n;
        mean.grad_norm_sq /= n;
        mean.eta_min /= n;
        mean.eta_max /= n;
        mean.eta_l1_diff_sum /= n;
        summary.skip_fraction[r] = skipped / n;
    }

    std::vector<double> metrics;
    std::vector<double> finals;
    for (const RunResult& run : summary.runs) {
        metrics.push_back(grad_norm_metric(run.records));
        finals.push_back(run.final_loss);
    }
    summary.mean_grad_metric = mean_of(metrics);
    summary.mean_final_loss = mean_of(finals);

    if (write_files) {
        ensure_directory(spec.output_path);
        for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
            const auto path =
                spec.output_path / ("trajectory_seed" + std::to_string(spec.seeds[i]) + ".csv");
            auto out = open_output(path);
            write_trajectory_csv(out, summary.runs[i].records);
            summary.files.push_back(path);
        }
        const auto path = spec.output_path / "summary.csv";
        auto out = open_output(path);
        write_summary_csv(out, summary.mean_records, summary.skip_fraction);
        summary.files.push_back(path);
    }
    return summary;
}

std::optional<double> predicted_noise_floor(const ExperimentSpec& spec, const ObjectiveMeta& meta) {
    if (!(meta.grad_variance_sigma2 > 0.0)) {
        return std::nullopt;
    }
    return meta.smoothness_L * spec.optimizer.gamma *
           std::sqrt(static_cast<double>(meta.dim) * meta.grad_variance_sigma2) / 2.0;
}

double loglog_slope(const std::vector<SpeedupRow>& rows) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const SpeedupRow& row : rows) {
        if (row.steps_to_threshold) {
            xs.push_back(std::log(static_cast<double>(row.batch_size)));
            ys.push_back(std::log(static_cast<double>(*row.steps_to_threshold)));
        }
    }
    if (xs.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

SpeedupResult run_speedup(const ExperimentSpec& spec) {
    const ObjectivePtr objective = make_objective(spec.objective);
    SpeedupResult result;
    if (spec.threshold) {
        result.threshold = *spec.threshold;
    } else {
        const auto floor = predicted_noise_floor(spec, objective->meta());
        if (!floor) {
            throw ConfigError("speedup.threshold is required when the objective has no gradient noise");
        }
        result.threshold = 10.0 * *floor;
        result.threshold_is_default = true;
    }
    if (const auto floor = predicted_noise_floor(spec, objective->meta())) {
        result.predicted_noise_floor = *floor;
    }

    const std::size_t seeds = spec.seeds.size();
    for (std::size_t b : spec.batch_sizes) {
        OptimizerConfig cfg = spec.optimizer;
        cfg.gamma = scaled_gamma(spec, b);

        std::vector<Runner> runners;
        runners.reserve(seeds);
        for (std::uint64_t seed : spec.seeds) {
            RunOptions opts = run_options(spec, seed, b);
            opts.steps = spec.max_steps;
            opts.eval_stride = 1;
            runners.emplace_back(spec.kind, cfg, objective, std::move(opts));
        }

        SpeedupRow row;
        row.batch_size = b;
        row.gamma = cfg.gamma;
        double prefix = 0.0;
        std::uint64_t done = 0;
        std::vector<std::vector<double>> chunk(seeds);
        while (done < spec.max_steps && !row.steps_to_threshold) {
            const std::uint64_t len = std::min(spec.chunk_steps, spec.max_steps - done);
            for_each(spec.parallel, seeds, [&](std::size_t i) {
                chunk[i].resize(len);
                for (std::uint64_t k = 0; k < len; ++k) {
                    chunk[i][k] = runners[i].advance()->grad_norm_sq;
                }
            });
            for (std::uint64_t k = 0; k < len; ++k) {
                double mean = 0.0;
                for (std::size_t i = 0; i < seeds; ++i) {
                    mean += chunk[i][k];
                }
                prefix += mean / static_cast<double>(seeds);
                const std::uint64_t t = done + k + 1;
                row.final_metric = prefix / static_cast<double>(t);
                if (row.final_metric < result.threshold) {
                    row.steps_to_threshold = t;
                    break;
                }
            }
            done += len;
        }
        result.rows.push_back(row);
    }
    result.loglog_slope = loglog_slope(result.rows);
    return result;
}

std::vector<AblationRow> run_ablation(const ExperimentSpec& spec) {
    const ObjectivePtr objective = make_objective(spec.objective);
    std::vector<AblationRow> rows;
    for (OptimizerKind kind : kAllKinds) {
        for (double beta1 : spec.ablation_beta1) {
            AblationRow row;
            row.kind = kind;
            row.beta1 = beta1;
            const auto it = spec.ablation_gamma.find(kind);
            row.gamma = it != spec.ablation_gamma.end() ? it->second : spec.optimizer.gamma;
            row.final_losses.resize(spec.seeds.size());
            rows.push_back(std::move(row));
        }
    }

    const std::size_t seeds = spec.seeds.size();
    std::vector<double> metrics(rows.size() * seeds);
    for_each(spec.parallel, rows.size() * seeds, [&](std::size_t job) {
        AblationRow& row = rows[job / seeds];
        const std::size_t s = job % seeds;
        OptimizerConfig cfg = spec.optimizer;
        cfg.beta1 = row.beta1;
        cfg.gamma = row.gamma;
        const RunResult res = run(row.kind, cfg, objective,
                                  run_options(spec, spec.seeds[s], spec.batch_size));
        row.final_losses[s] = res.final_loss;
        metrics[job] = grad_norm_metric(res.records);
    });
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].mean_final_loss = mean_of(rows[r].final_losses);
        rows[r].mean_grad_metric = mean_of(std::vector<double>(
            metrics.begin() + static_cast<std::ptrdiff_t>(r * seeds),
            metrics.begin() + static_cast<std::ptrdiff_t>((r + 1) * seeds)));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Invariant suite

namespace {

bool same_trajectory(const RunResult& a, const RunResult& b) {
    if (a.records.size() != b.records.size() || a.final_state.x != b.final_state.x ||
        a.final_state.m != b.final_state.m) {
        return false;
    }
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].loss != b.records[i].loss ||
            a.records[i].grad_norm_sq != b.records[i].grad_norm_sq) {
            return false;
        }
    }
    return true;
}

std::vector<CheckRow> check_fd() {
    const std::vector<ObjectivePtr> objectives = {
        make_stochastic_quadratic(10, 256, 1.0, 7),
        make_noisy_rosenbrock(7, 1.0),
        make_synthetic_logreg(10, 256, 7),
    };
    constexpr double h = 1e-5;
    constexpr double limit = 1e-5;
    std::vector<CheckRow> rows;
    for (const auto& obj : objectives) {
        Rng rng(2024);
        double worst = 0.0;
        for (std::size_t b : {1u, 4u, 16u}) {
            for (int p = 0; p < 20; ++p) {
                ParamVector x(obj->meta().dim);
                for (std::size_t j = 0; j < x.dim(); ++j) {
                    x[j] = 2.0 * rng.uniform01() - 1.0;
                }
                const MiniBatch batch = obj->sample_batch(rng, b);
                const double err = relative_error(obj->batch_grad(x, batch),
                                                  finite_diff_grad(*obj, x, batch, h));
                worst = std::max(worst, err);
            }
        }
        rows.push_back({"fd/" + obj->name(), worst < limit,
                        "max relative error " + format_real(worst) + " (limit 1e-05)"});
    }
    return rows;
}

std::vector<CheckRow> check_reductions() {
    const ObjectivePtr obj = make_stochastic_quadratic(10, 512, 1.0, 11);
    RunOptions opts;
    opts.steps = 1000;
    opts.batch_size = 4;
    opts.seed = 5;
    OptimizerConfig base;
    base.gamma = 1e-2;
    base.rho = 0.05;

    std::vector<CheckRow> rows;
    {
        OptimizerConfig cfg = base;
        cfg.rho = 0.0;
        const bool ok = same_trajectory(run(OptimizerKind::adasam, cfg, obj, opts),
                                        run(OptimizerKind::amsgrad, cfg, obj, opts));
        rows.push_back({"reductions/adasam_rho0_is_amsgrad", ok, ok ? "bit-exact" : "differs"});
    }
    {
        OptimizerConfig cfg = base;
        cfg.beta2 = 1.0;
        cfg.gamma = 1e-6;
        OptimizerConfig sam = cfg;
        sam.gamma = sam_equivalent_gamma(cfg);
        const bool ok = same_trajectory(run(OptimizerKind::adasam, cfg, obj, opts),
                                        run(OptimizerKind::sam, sam, obj, opts));
        rows.push_back({"reductions/adasam_beta2_1_is_sam", ok, ok ? "bit-exact" : "differs"});
    }
    {
        OptimizerConfig cfg = base;
        cfg.rho = 0.0;
        const bool ok = same_trajectory(run(OptimizerKind::sam, cfg, obj, opts),
                                        run(OptimizerKind::sgd, cfg, obj, opts));
        rows.push_back({"reductions/sam_rho0_is_sgd", ok, ok ? "bit-exact" : "differs"});
    }
    return rows;
}

struct MonitorRuns {
    std::uint64_t bound_violations = 0;
    std::uint64_t monotone_violations = 0;
    std::uint64_t telescoping_violations = 0;
    std::string first_error;
    std::size_t runs = 0;
};

// AdaSAM on the noisy Rosenbrock, plus one run whose first coordinate
// starts next to its optimum so g_0 is tiny there and only the eps^2
// initialization keeps eta below 1/eps.
MonitorRuns monitor_runs(const CheckOptions& options) {
    std::vector<std::pair<ObjectivePtr, RunOptions>> jobs;
    const ObjectivePtr rosen = make_noisy_rosenbrock(3, 1.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RunOptions opts;
        opts.steps = 5000;
        opts.seed = seed;
        opts.eval_stride = 5000;
        jobs.emplace_back(rosen, opts);
    }
    {
        const ObjectivePtr quad =
            make_quadratic_from_centers({ParamVector{0.5, -0.5}, ParamVector{0.5, -0.5}});
        RunOptions opts;
        opts.steps = 200;
        opts.x0 = ParamVector{0.5 + 1e-6, 1.0};
        jobs.emplace_back(quad, opts);
    }

    OptimizerConfig cfg;
    cfg.gamma = 1e-3;
    cfg.rho = 0.01;
    std::vector<MonitorRuns> per(jobs.size());
    kernels::for_each_index_parallel(jobs.size(), [&](std::size_t i) {
        RunOptions opts = jobs[i].second;
        if (options.corrupt_v_hat_init) {
            opts.initial_v_hat_override = 0.0;
        }
        try {
            const RunResult res = run(OptimizerKind::adasam, cfg, jobs[i].first, opts);
            per[i].bound_violations = res.ledger.eta_bound_violations;
            per[i].monotone_violations = res.ledger.monotonicity_violations;
            per[i].telescoping_violations = res.ledger.telescoping_violations;
        } catch (const Error& e) {
            per[i].first_error = e.what();
        }
    });
    MonitorRuns total;
    total.runs = jobs.size();
    for (const MonitorRuns& r : per) {
        total.bound_violations += r.bound_violations;
        total.monotone_violations += r.monotone_violations;
        total.telescoping_violations += r.telescoping_violations;
        if (total.first_error.empty()) {
            total.first_error = r.first_error;
        }
    }
    return total;
}

std::vector<CheckRow> check_eta(const MonitorRuns& m) {
    const bool crashed = !m.first_error.empty();
    const std::string suffix = crashed ? "; run failed: " + m.first_error : "";
    return {
        {"eta/bounds", !crashed && m.bound_violations == 0,
         std::to_string(m.bound_violations) + " violations over " + std::to_string(m.runs) +
             " runs" + suffix},
        {"eta/monotone", !crashed && m.monotone_violations == 0,
         std::to_string(m.monotone_violations) + " violations" + suffix},
    };
}

std::vector<CheckRow> check_telescoping(const MonitorRuns& m) {
    const bool crashed = !m.first_error.empty();
    return {{"telescoping/bound", !crashed && m.telescoping_violations == 0,
             std::to_string(m.telescoping_violations) + " violations over " +
                 std::to_string(m.runs) + " runs" +
                 (crashed ? "; run failed: " + m.first_error : "")}};
}

std::vector<CheckRow> check_displacement(const CheckOptions& options) {
    const std::vector<ObjectivePtr> objectives = {
        make_stochastic_quadratic(10, 256, 1.0, 13),
        make_noisy_rosenbrock(13, 1.0),
        make_synthetic_logreg(10, 256, 13),
    };
    OptimizerConfig cfg;
    cfg.beta1 = 0.9;
    cfg.gamma = 1e-3;
    constexpr double limit = 1e-10;
    std::vector<CheckRow> rows;
    for (const auto& obj : objectives) {
        double worst = 0.0;
        std::string error;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            RunOptions opts;
            opts.steps = 100;
            opts.batch_size = 4;
            opts.seed = seed;
            if (options.corrupt_v_hat_init) {
                opts.initial_v_hat_override = 0.0;
            }
            try {
                const double r = run(OptimizerKind::adasam, cfg, obj, opts).max_displacement_residual;
                worst = std::isnan(r) || std::isnan(worst) ? std::numeric_limits<double>::quiet_NaN()
                                                           : std::max(worst, r);
            } catch (const Error& e) {
                error = e.what();
            }
        }
        const bool ok = error.empty() && worst < limit;
        rows.push_back({"displacement/" + obj->name(), ok,
                        error.empty() ? "max residual " + format_real(worst) + " (limit 1e-10)"
                                      : "run failed: " + error});
    }
    return rows;
}

}  // namespace

std::vector<CheckRow> run_checks(const std::string& suite, const CheckOptions& options) {
    static const std::vector<std::string> suites = {"fd",          "reductions",   "eta",
                                                    "telescoping", "displacement", "all"};
    if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
        throw ConfigError("unknown check suite '" + suite +
                          "' (expected fd, reductions, eta, telescoping, displacement or all)");
    }
    const bool all = suite == "all";
    std::vector<CheckRow> rows;
    auto append = [&rows](std::vector<CheckRow> more) {
        rows.insert(rows.end(), more.begin(), more.end());
    };
    if (all || suite == "fd") append(check_fd());
    if (all || suite == "reductions") append(check_reductions());
    if (all || suite == "eta" || suite == "telescoping") {
        const MonitorRuns m = monitor_runs(options);
        if (all || suite == "eta") append(check_eta(m));
        if (all || suite == "telescoping") append(check_telescoping(m));
    }
    if (all || suite == "displacement") append(check_displacement(options));
    return rows;
}

// ---------------------------------------------------------------------------
// Output

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

constexpr const char* kTrajectoryHeader =
    "step,loss,grad_norm_sq,eta_min,eta_max,eta_l1_diff_sum,perturb_skipped\n";

void write_row(std::ostream& out, const TrajectoryRecord& r, const std::string& skipped) {
    out << r.step << ',' << format_real(r.loss) << ',' << format_real(r.grad_norm_sq) << ','
        << format_real(r.eta_min) << ',' << format_real(r.eta_max) << ','
        << format_real(r.eta_l1_diff_sum) << ',' << skipped << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
    out << kTrajectoryHeader;
    for (const auto& r : records) {
        write_row(out, r, r.perturb_skipped ? "1" : "0");
    }
}

void write_summary_csv(std::ostream& out, const std::vector<TrajectoryRecord>& mean_records,
                       const std::vector<double>& skip_fraction) {
    out << kTrajectoryHeader;
    for (std::size_t i = 0; i < mean_records.size(); ++i) {
        write_row(out, mean_records[i], format_real(skip_fraction.at(i)));
    }
}

void write_speedup_csv(std::ostream& out, const SpeedupResult& result) {
    out << "batch_size,gamma,steps_to_threshold,final_metric\n";
    for (const auto& row : result.rows) {
        out << row.batch_size << ',' << format_real(row.gamma) << ','
            << (row.steps_to_threshold ? std::to_string(*row.steps_to_threshold) : "not reached")
            << ',' << format_real(row.final_metric) << '\n';
    }
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
    out << "optimizer,beta1,gamma,mean_final_loss,mean_grad_norm_sq_avg\n";
    for (const auto& row : rows) {
        out << to_string(row.kind) << ',' << format_real(row.beta1) << ',' << format_real(row.gamma)
            << ',' << format_real(row.mean_final_loss) << ',' << format_real(row.mean_grad_metric)
            << '\n';
    }
}

}  // namespace optkit
