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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "optkit/error.hpp"
#include "optkit/optimizers.hpp"
#include "optkit/run.hpp"

using namespace optkit;

namespace {

// f(x) = 1/2 x^2 in one dimension, no noise.
ObjectivePtr half_square() {
    return make_quadratic_from_centers({ParamVector{0.0}, ParamVector{0.0}});
}

// f(x) = sum_j x_j: every gradient is the all-ones vector.
class LinearObjective final : public StochasticObjective {
public:
    explicit LinearObjective(std::size_t d) : StochasticObjective(make_meta(d)) {}
    std::string name() const override { return "linear"; }
    ParamVector batch_grad(const ParamVector& x, const MiniBatch&) const override {
        return ones(x.dim());
    }
    double batch_loss(const ParamVector& x, const MiniBatch&) const override {
        return full_loss(x);
    }
    ParamVector full_grad(const ParamVector& x) const override { return ones(x.dim()); }
    double full_loss(const ParamVector& x) const override { return l1_norm(x); }

private:
    static ObjectiveMeta make_meta(std::size_t d) {
        ObjectiveMeta m;
        m.dim = d;
        m.n_samples = 4;
        return m;
    }
};

// Forwards to another objective and records the batch token of every
// gradient call.
class RecordingObjective final : public StochasticObjective {
public:
    explicit RecordingObjective(ObjectivePtr inner)
        : StochasticObjective(inner->meta()), inner_(std::move(inner)) {}
    std::string name() const override { return "recording"; }
    MiniBatch sample_batch(Rng& rng, std::size_t b) const override {
        return inner_->sample_batch(rng, b);
    }
    ParamVector batch_grad(const ParamVector& x, const MiniBatch& batch) const override {
        const std::lock_guard<std::mutex> lock(mutex_);
        tokens_.push_back(batch.token);
        return inner_->batch_grad(x, batch);
    }
    double batch_loss(const ParamVector& x, const MiniBatch& batch) const override {
        return inner_->batch_loss(x, batch);
    }
    ParamVector full_grad(const ParamVector& x) const override { return inner_->full_grad(x); }
    double full_loss(const ParamVector& x) const override { return inner_->full_loss(x); }
    std::vector<std::uint64_t> tokens() const { return tokens_; }

private:
    ObjectivePtr inner_;
    mutable std::mutex mutex_;
    mutable std::vector<std::uint64_t> tokens_;
};

// Returns NaN in coordinate 1 once x[0] drops below zero.
class PoisonedObjective final : public StochasticObjective {
public:
    PoisonedObjective() : StochasticObjective(make_meta()) {}
    std::string name() const override { return "poisoned"; }
    ParamVector batch_grad(const ParamVector& x, const MiniBatch&) const override {
        return full_grad(x);
    }
    double batch_loss(const ParamVector& x, const MiniBatch&) const override { return full_loss(x); }
    ParamVector full_grad(const ParamVector& x) const override {
        return ParamVector{1.0, x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0};
    }
    double full_loss(const ParamVector& x) const override { return x[0] + x[1]; }

private:
    static ObjectiveMeta make_meta() {
        ObjectiveMeta m;
        m.dim = 2;
        m.n_samples = 2;
        return m;
    }
};

ParamVector scalar(double v) { return ParamVector{v}; }

// Scalar transcription of the adaptive update, used as an oracle for the
// vector implementation.
struct ScalarAdaSam {
    double x, m, v, vhat;
};

}  // namespace

TEST_CASE("sam_perturbation") {
    const Perturbation p = sam_perturbation({3, 4}, 1.0, 1e-12);
    CHECK_FALSE(p.skipped);
    CHECK(p.delta[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(p.delta[1] == doctest::Approx(0.8).epsilon(1e-15));

    const Perturbation z = sam_perturbation(ParamVector(3), 0.3, 1e-12);
    CHECK(z.skipped);
    CHECK(z.delta == ParamVector(3));

    const Perturbation small = sam_perturbation({1, 0}, 0.005, 1e-12);
    CHECK(small.delta == ParamVector{0.005, 0.0});

    CHECK(sam_perturbation({1e-13, 0}, 1.0, 1e-12).skipped);
}

TEST_CASE("perturbation norm equals rho") {
    Rng rng(4);
    for (int k = 0; k < 500; ++k) {
        ParamVector s(1 + rng.uniform_index(20));
        for (std::size_t j = 0; j < s.dim(); ++j) s[j] = std::ldexp(rng.normal(), static_cast<int>(rng.uniform_index(40)) - 20);
        const double rho = 0.001 + rng.uniform01();
        const Perturbation p = sam_perturbation(s, rho, 1e-12);
        REQUIRE_FALSE(p.skipped);
        CHECK(std::abs(l2_norm(p.delta) - rho) <= 1e-12 * rho);
    }
}

TEST_CASE("adasam single step matches the hand trace") {
    const auto obj = half_square();
    OptimizerConfig cfg;
    cfg.gamma = 0.1;
    cfg.rho = 0.1;
    cfg.beta1 = 0.0;
    cfg.beta2 = 0.0;
    cfg.epsilon = 0.01;
    const OptimizerState s0 = initial_state(scalar(1.0), cfg);
    const StepResult r = adasam_step(s0, cfg, *obj, make_batch({0}));
    CHECK(r.report.pre_perturb_grad == scalar(1.0));
    CHECK(r.report.sam_grad[0] == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(r.state.m[0] == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(r.state.v[0] == doctest::Approx(1.21).epsilon(1e-15));
    CHECK(r.state.v_hat[0] == doctest::Approx(1.21).epsilon(1e-15));
    CHECK(r.report.eta[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
    CHECK(r.state.x[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(r.state.x_prev == scalar(1.0));
    CHECK(r.state.t == 1);
    CHECK_FALSE(r.report.perturbation_skipped);
    // Inputs are untouched.
    CHECK(s0.x == scalar(1.0));
    CHECK(s0.t == 0);
}

TEST_CASE("sam and sgd single steps") {
    const auto obj = half_square();
    OptimizerConfig cfg;
    cfg.gamma = 0.1;
    cfg.rho = 0.1;
    cfg.beta1 = 0.0;
    const OptimizerState s0 = initial_state(scalar(1.0), cfg);
    CHECK(sam_step(s0, cfg, *obj, make_batch({0})).state.x[0] == doctest::Approx(0.89).epsilon(1e-15));
    CHECK(sgd_step(s0, cfg, *obj, make_batch({0})).state.x[0] == doctest::Approx(0.9).epsilon(1e-15));
    cfg.rho = 0.0;
    CHECK(sam_step(s0, cfg, *obj, make_batch({0})).state.x ==
          sgd_step(s0, cfg, *obj, make_batch({0})).state.x);
    CHECK(sam_step(s0, cfg, *obj, make_batch({0})).report.eta == ones(1));

    OptimizerConfig tiny = cfg;
    tiny.gamma = std::numeric_limits<double>::denorm_min();
    CHECK(sgd_step(s0, tiny, *obj, make_batch({0})).state.x == s0.x);
}

TEST_CASE("amsgrad with no momentum moves by gamma in the sign of the gradient") {
    const auto obj = make_stochastic_quadratic(4, 8, 1.0, 3);
    OptimizerConfig cfg;
    cfg.gamma = 0.05;
    cfg.beta1 = 0.0;
    cfg.beta2 = 0.0;
    cfg.epsilon = 1e-6;
    const ParamVector x0{0.5, -1.0, 2.0, 0.0};
    const OptimizerState s0 = initial_state(x0, cfg);
    const MiniBatch batch = make_batch({1, 6});
    const ParamVector g = obj->batch_grad(x0, batch);
    const StepResult r = amsgrad_step(s0, cfg, *obj, batch);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(r.state.x[j] == doctest::Approx(x0[j] - 0.05 * (g[j] > 0 ? 1.0 : -1.0)).epsilon(1e-14));
    }
}

TEST_CASE("momentum on a constant gradient follows the geometric series") {
    const auto obj = std::make_shared<LinearObjective>(3);
    OptimizerConfig cfg;
    cfg.gamma = 0.01;
    cfg.beta1 = 0.9;
    OptimizerState s = initial_state(ParamVector(3), cfg);
    for (int t = 0; t < 10; ++t) {
        s = sgd_step(s, cfg, *obj, make_batch({0})).state;
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(s.m[j] == doctest::Approx(1.0 - std::pow(0.9, t + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("adasam agrees with a scalar transcription of the update") {
    const auto obj = make_synthetic_logreg(1, 64, 3);
    OptimizerConfig cfg;
    cfg.gamma = 0.05;
    cfg.rho = 0.02;
    cfg.beta1 = 0.8;
    cfg.beta2 = 0.95;
    cfg.epsilon = 1e-3;

    OptimizerState s = initial_state(scalar(0.7), cfg);
    const double eps_sq = cfg.epsilon * cfg.epsilon;
    ScalarAdaSam o{0.7, 0.0, eps_sq, eps_sq};
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const MiniBatch batch = obj->sample_batch(rng, 4);
        const double sg = obj->batch_grad(scalar(o.x), batch)[0];
        const double delta = sg == 0.0 ? 0.0 : cfg.rho * (sg > 0 ? 1.0 : -1.0);
        const double g = obj->batch_grad(scalar(o.x + delta), batch)[0];
        o.m = cfg.beta1 * o.m + (1 - cfg.beta1) * g;
        o.v = cfg.beta2 * o.v + (1 - cfg.beta2) * g * g;
        o.vhat = std::max(o.vhat, o.v);
        o.x -= cfg.gamma * o.m / std::sqrt(o.vhat);

        s = adasam_step(s, cfg, *obj, batch).state;
        REQUIRE(s.x[0] == doctest::Approx(o.x).epsilon(1e-12));
        REQUIRE(s.v_hat[0] == doctest::Approx(o.vhat).epsilon(1e-12));
    }
}

TEST_CASE("both gradient evaluations use the sampled batch") {
    auto rec = std::make_shared<RecordingObjective>(make_stochastic_quadratic(3, 50, 1.0, 2));
    OptimizerConfig cfg;
    RunOptions opts;
    opts.steps = 25;
    opts.batch_size = 5;
    opts.eval_stride = 1000;
    Runner runner(OptimizerKind::adasam, cfg, rec, opts);
    for (int t = 0; t < 25; ++t) {
        (void)runner.advance();
        const StepReport* report = runner.last_report();
        REQUIRE(report != nullptr);
        CHECK(report->s_batch_token == report->g_batch_token);
    }
    const auto tokens = rec->tokens();
    REQUIRE(tokens.size() == 50);
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
        CHECK(tokens[i] == tokens[i + 1]);
    }
    CHECK(tokens[0] != tokens[2]);
}

TEST_CASE("skipped perturbation at a stationary point") {
    const auto obj = half_square();
    OptimizerConfig cfg;
    const StepResult r = adasam_step(initial_state(scalar(0.0), cfg), cfg, *obj, make_batch({0}));
    CHECK(r.report.perturbation_skipped);
    CHECK(r.report.sam_grad == r.report.pre_perturb_grad);
    CHECK(r.state.x == scalar(0.0));
}

TEST_CASE("second-moment clamp") {
    const auto obj = make_stochastic_quadratic(5, 100, 2.0, 1);
    OptimizerConfig cfg;
    cfg.gamma = 1e-2;
    OptimizerState s = initial_state(ParamVector(5, 3.0), cfg);
    Rng rng(9);
    for (int t = 0; t < 1000; ++t) {
        const StepResult r = adasam_step(s, cfg, *obj, obj->sample_batch(rng, 2));
        for (std::size_t j = 0; j < 5; ++j) {
            REQUIRE(r.state.v_hat[j] >= s.v_hat[j]);
            REQUIRE(r.state.v_hat[j] >= cfg.epsilon * cfg.epsilon);
            REQUIRE(r.report.eta[j] <= 1.0 / cfg.epsilon);
        }
        s = r.state;
    }
}

TEST_CASE("clamp off gives the Adam-style variant") {
    const auto obj = half_square();
    OptimizerConfig cfg;
    cfg.beta1 = 0.0;
    cfg.beta2 = 0.5;
    cfg.use_max_clamp = false;
    OptimizerState s = initial_state(scalar(1.0), cfg);
    s.v = scalar(4.0);
    s.v_hat = scalar(4.0);
    const StepResult r = amsgrad_step(s, cfg, *obj, make_batch({0}));
    // v_t = 0.5 * 4 + 0.5 * 1 = 2.5 < 4, kept without the clamp.
    CHECK(r.state.v == scalar(2.5));
    CHECK(r.state.v_hat == scalar(2.5));
    cfg.use_max_clamp = true;
    CHECK(amsgrad_step(s, cfg, *obj, make_batch({0})).state.v_hat == scalar(4.0));
}

TEST_CASE("beta2 = 1 freezes eta at 1/eps") {
    const auto obj = make_stochastic_quadratic(3, 20, 1.0, 4);
    OptimizerConfig cfg;
    cfg.beta2 = 1.0;
    cfg.gamma = 1e-5;
    OptimizerState s = initial_state(ParamVector(3), cfg);
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const StepResult r = adasam_step(s, cfg, *obj, obj->sample_batch(rng, 3));
        CHECK(r.state.v == ParamVector(3, cfg.epsilon * cfg.epsilon));
        CHECK(r.report.eta == ParamVector(3, 1.0 / cfg.epsilon));
        s = r.state;
    }
}

TEST_CASE("reduction equalities over seeded runs") {
    const auto obj = make_stochastic_quadratic(6, 200, 1.0, 21);
    RunOptions opts;
    opts.steps = 300;
    opts.batch_size = 3;
    opts.seed = 8;
    OptimizerConfig cfg;
    cfg.gamma = 5e-3;
    cfg.rho = 0.05;

    auto same = [](const RunResult& a, const RunResult& b) {
        if (a.final_state.x != b.final_state.x) return false;
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            if (a.records[i].loss != b.records[i].loss) return false;
        }
        return true;
    };

    OptimizerConfig no_rho = cfg;
    no_rho.rho = 0.0;
    CHECK(same(run(OptimizerKind::adasam, no_rho, obj, opts),
               run(OptimizerKind::amsgrad, no_rho, obj, opts)));
    CHECK(same(run(OptimizerKind::sam, no_rho, obj, opts), run(OptimizerKind::sgd, no_rho, obj, opts)));

    OptimizerConfig frozen = cfg;
    frozen.beta2 = 1.0;
    frozen.gamma = 1e-7;
    OptimizerConfig sam = frozen;
    sam.gamma = sam_equivalent_gamma(frozen);
    CHECK(sam.gamma == 1e-7 * (1.0 / 1e-4));
    CHECK(same(run(OptimizerKind::adasam, frozen, obj, opts), run(OptimizerKind::sam, sam, obj, opts)));

    // Sanity: the perturbation does change the trajectory.
    CHECK_FALSE(same(run(OptimizerKind::adasam, cfg, obj, opts),
                     run(OptimizerKind::amsgrad, cfg, obj, opts)));
}

TEST_CASE("rho schedule replaces the constant") {
    const auto obj = half_square();
    OptimizerConfig cfg;
    cfg.gamma = 0.1;
    cfg.beta1 = 0.0;
    cfg.rho = 0.1;
    cfg.rho_schedule = [](std::uint64_t) { return 0.0; };
    CHECK(cfg.rho_at(3) == 0.0);
    const OptimizerState s0 = initial_state(scalar(1.0), cfg);
    CHECK(sam_step(s0, cfg, *obj, make_batch({0})).state.x[0] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("non-finite gradient reports step and coordinate") {
    const auto obj = std::make_shared<PoisonedObjective>();
    OptimizerConfig cfg;
    cfg.gamma = 0.4;
    cfg.beta1 = 0.0;
    RunOptions opts;
    opts.steps = 10;
    opts.x0 = ParamVector{1.0, 0.0};
    try {
        (void)run(OptimizerKind::sgd, cfg, obj, opts);
        FAIL("expected a numeric error");
    } catch (const NumericError& e) {
        // x[0] = 1 - 0.4 t is negative from t = 3 on.
        CHECK(e.step() == 3);
        CHECK(e.coordinate() == 1);
    }
}

TEST_CASE("config validation") {
    OptimizerConfig ok;
    CHECK_NOTHROW(validate(ok));
    auto bad = [](auto mutate) {
        OptimizerConfig c;
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.gamma = 0.0; })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.rho = -0.1; })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.beta1 = 1.0; })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.beta2 = 1.5; })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.epsilon = 0.0; })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.gamma = std::nan(""); })), ConfigError);
    CHECK_THROWS_AS(validate(bad([](auto& c) { c.perturb_norm_floor = 0.0; })), ConfigError);
    CHECK_NOTHROW(validate(bad([](auto& c) { c.beta2 = 1.0; })));
}

TEST_CASE("state initialization and dimension checks") {
    OptimizerConfig cfg;
    cfg.epsilon = 0.5;
    const OptimizerState s = initial_state(ParamVector{1, 2}, cfg);
    CHECK(s.m == ParamVector(2));
    CHECK(s.v == ParamVector(2, 0.25));
    CHECK(s.v_hat == ParamVector(2, 0.25));
    CHECK(s.x_prev == s.x);
    CHECK(s.t == 0);
    const auto obj = make_stochastic_quadratic(3, 4, 1.0, 0);
    CHECK_THROWS_AS(adasam_step(s, cfg, *obj, make_batch({0})), DimensionMismatch);
}

TEST_CASE("kind names") {
    for (auto kind : {OptimizerKind::sgd, OptimizerKind::sam, OptimizerKind::amsgrad,
                      OptimizerKind::adasam}) {
        CHECK(parse_optimizer_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_optimizer_kind("adam"), ConfigError);
}

TEST_CASE("step-size condition") {
    ObjectiveMeta meta;
    meta.smoothness_L = 2.0;
    OptimizerConfig cfg;
    cfg.epsilon = 0.32;
    cfg.gamma = 0.01;
    CHECK(step_size_condition_holds(cfg, meta));
    cfg.gamma = 0.011;
    CHECK_FALSE(step_size_condition_holds(cfg, meta));
}

TEST_CASE("runs are deterministic") {
    const auto obj = make_synthetic_logreg(5, 100, 1);
    OptimizerConfig cfg;
    RunOptions opts;
    opts.steps = 200;
    opts.batch_size = 7;
    opts.seed = 3;
    const RunResult a = run(OptimizerKind::adasam, cfg, obj, opts);
    const RunResult b = run(OptimizerKind::adasam, cfg, obj, opts);
    CHECK(a.final_state.x == b.final_state.x);
    REQUIRE(a.records.size() == 200);
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(a.records[i].loss == b.records[i].loss);
        CHECK(a.records[i].eta_min == b.records[i].eta_min);
        CHECK(a.records[i].step == i);
    }
    opts.seed = 4;
    CHECK_FALSE(run(OptimizerKind::adasam, cfg, obj, opts).final_state.x == a.final_state.x);
}

TEST_CASE("run option validation") {
    const auto obj = make_stochastic_quadratic(2, 4, 1.0, 0);
    OptimizerConfig cfg;
    RunOptions opts;
    opts.steps = 0;
    CHECK_THROWS_AS(run(OptimizerKind::sgd, cfg, obj, opts), ConfigError);
    opts.steps = 5;
    opts.batch_size = 5;
    CHECK_THROWS_AS(run(OptimizerKind::sgd, cfg, obj, opts), ConfigError);
    opts.batch_size = 1;
    opts.x0 = ParamVector(3);
    CHECK_THROWS_AS(run(OptimizerKind::sgd, cfg, obj, opts), DimensionMismatch);
    opts.x0.reset();
    opts.eval_stride = 2;
    CHECK(run(OptimizerKind::sgd, cfg, obj, opts).records.size() == 3);
}

TEST_CASE("box exits are counted") {
    const auto obj = make_stochastic_quadratic(2, 4, 1.0, 0, QuadraticOptions{1.0, 0.5});
    OptimizerConfig cfg;
    RunOptions opts;
    opts.steps = 4;
    opts.x0 = ParamVector{5.0, 0.0};
    cfg.gamma = 1e-6;
    const RunResult r = run(OptimizerKind::sgd, cfg, obj, opts);
    CHECK(r.box_exits == 4);
    CHECK(r.records[0].outside_box);
}
