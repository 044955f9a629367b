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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "optkit/harness.hpp"
#include "optkit/kernels.hpp"
#include "optkit/objectives.hpp"

namespace {

using namespace optkit;

const SyntheticLogReg& logreg(std::size_t d) {
    static std::vector<std::unique_ptr<SyntheticLogReg>> cache;
    for (const auto& p : cache) {
        if (p->meta().dim == d) return *p;
    }
    cache.push_back(std::make_unique<SyntheticLogReg>(d, 8192, 3, 0.5));
    return *cache.back();
}

kernels::Design design_of(const SyntheticLogReg& obj) {
    return {obj.features(), obj.labels(), obj.labels().size(), obj.meta().dim};
}

void BM_LogisticGradSerial(benchmark::State& state) {
    const auto& obj = logreg(static_cast<std::size_t>(state.range(0)));
    const auto design = design_of(obj);
    const ParamVector x(design.d, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::logistic_grad_serial(design, x));
    }
}

void BM_LogisticGradParallel(benchmark::State& state) {
    const auto& obj = logreg(static_cast<std::size_t>(state.range(0)));
    const auto design = design_of(obj);
    const ParamVector x(design.d, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::logistic_grad_parallel(design, x));
    }
}

ExperimentSpec seed_sweep_spec(bool parallel) {
    ExperimentSpec spec;
    spec.objective.dim = 20;
    spec.optimizer.gamma = 1e-4;
    spec.steps = 500;
    spec.batch_size = 8;
    spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    spec.parallel = parallel;
    return spec;
}

void BM_SeedsSerial(benchmark::State& state) {
    const auto spec = seed_sweep_spec(false);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(spec, false).mean_final_loss);
    }
}

void BM_SeedsParallel(benchmark::State& state) {
    const auto spec = seed_sweep_spec(true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(spec, false).mean_final_loss);
    }
}

}  // namespace

BENCHMARK(BM_LogisticGradSerial)->Arg(10)->Arg(100);
BENCHMARK(BM_LogisticGradParallel)->Arg(10)->Arg(100);
BENCHMARK(BM_SeedsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeedsParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
