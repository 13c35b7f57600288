#include <benchmark/benchmark.h>

#include <random>

#include "umap/umap.hpp"

namespace {

umap::DataMatrix random_matrix(umap::Index n, umap::Index d, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd m(n, d);
    for (umap::Index i = 0; i < n; ++i)
        for (umap::Index j = 0; j < d; ++j) m(i, j) = dist(gen);
    return umap::DataMatrix(std::move(m));
}

void bm_knn_build(benchmark::State& state) {
    const auto data = random_matrix(state.range(0), 10, 1);
    for (auto _ : state) benchmark::DoNotOptimize(umap::build_knn(data, 15));
    state.SetComplexityN(state.range(0));
}

void bm_fuzzy_build(benchmark::State& state) {
    const auto data = random_matrix(state.range(0), 10, 2);
    const auto graph = umap::build_knn(data, 15);
    for (auto _ : state) benchmark::DoNotOptimize(umap::build_fuzzy(graph, data, 15));
}

void bm_spectral_init(benchmark::State& state) {
    const auto data = random_matrix(state.range(0), 10, 3);
    const auto fg = umap::build_fuzzy(umap::build_knn(data, 15), data, 15);
    for (auto _ : state) benchmark::DoNotOptimize(umap::spectral_embed(fg, 2, 42));
}

void bm_sgd_epoch(benchmark::State& state) {
    const auto data = random_matrix(state.range(0), 10, 4);
    const auto fg = umap::build_fuzzy(umap::build_knn(data, 15), data, 15);
    umap::RunConfig config;
    auto emb = umap::spectral_embed(fg, 2, config.seed);
    umap::SgdOptimizer opt(emb, fg, config);
    for (auto _ : state) benchmark::DoNotOptimize(opt.run_epoch());
}

void bm_parametric_epoch(benchmark::State& state) {
    const auto data = random_matrix(state.range(0), 10, 5);
    const auto fg = umap::build_fuzzy(umap::build_knn(data, 15), data, 15);
    umap::RunConfig config;
    config.mode = umap::Mode::Parametric;
    umap::ParametricTrainer trainer(data, fg, config);
    for (auto _ : state) benchmark::DoNotOptimize(trainer.train_epoch());
}

BENCHMARK(bm_knn_build)->Arg(200)->Arg(500)->Arg(1000)->Complexity();
BENCHMARK(bm_fuzzy_build)->Arg(200)->Arg(1000);
BENCHMARK(bm_spectral_init)->Arg(200)->Arg(500);
BENCHMARK(bm_sgd_epoch)->Arg(200)->Arg(1000);
BENCHMARK(bm_parametric_epoch)->Arg(200)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
