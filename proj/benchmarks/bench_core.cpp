// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include <benchmark/benchmark.h>

#include "cirauth/auth.hpp"
#include "cirauth/hvae.hpp"
#include "cirauth/normalize.hpp"

using namespace cirauth;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (auto& v : m.data) v = rng.normal();
    return m;
}

void BM_Multiply(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, n, 1);
    const Matrix b = random_matrix(n, n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multiply(a, b));
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Multiply)->Arg(64)->Arg(128)->Arg(256);

void BM_HvaeForward(benchmark::State& state) {
    HvaeConfig cfg;
    cfg.input_dim = 128;
    cfg.h = 64;
    cfg.z = 32;
    cfg.train.seed = 3;
    const HvaeModel model = make_hvae(cfg);
    const Matrix batch = random_matrix(128, 32, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_hvae(model, batch, nullptr));
    }
}
BENCHMARK(BM_HvaeForward);

void BM_HvaeTrainStep(benchmark::State& state) {
    HvaeConfig cfg;
    cfg.input_dim = 128;
    cfg.h = 64;
    cfg.z = 32;
    cfg.train.seed = 5;
    HvaeModel model = make_hvae(cfg);
    const Matrix batch = random_matrix(128, 32, 6);
    Rng rng(7);
    for (auto _ : state) {
        const HvaeNoise noise = draw_hvae_noise(cfg, batch.cols, rng);
        const HvaeTrace trace = forward_hvae(model, batch, &noise);
        HvaeGrads grads;
        hvae_backward(model, trace, batch, grads);
        hvae_momentum_step(model, grads);
    }
}
BENCHMARK(BM_HvaeTrainStep);

void BM_StaticGeneration(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen_static_dataset(11, 10));
    }
}
BENCHMARK(BM_StaticGeneration);

void BM_KlDoublePeakBound(benchmark::State& state) {
    LatentGaussian g;
    g.mu = random_matrix(32, 32, 8);
    g.sigma = random_matrix(32, 32, 9);
    for (auto& v : g.sigma.data) v = 0.5 + std::abs(v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kl_double_peak_bound(g, 1.0, 1.0));
    }
}
BENCHMARK(BM_KlDoublePeakBound);

void BM_RankRule(benchmark::State& state) {
    Rng rng(10);
    std::vector<AuthVerdict> batch(1000);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        batch[i].record_index = i;
        batch[i].score = rng.uniform();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(authenticate_batch(batch, 0.5));
    }
}
BENCHMARK(BM_RankRule);

}  // namespace

BENCHMARK_MAIN();
