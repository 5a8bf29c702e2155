#include <benchmark/benchmark.h>

#include "fastrp/engine.hpp"
#include "fastrp/graph.hpp"
#include "fastrp/projection.hpp"

using namespace fastrp;

namespace {

CsrGraph bench_graph(std::int64_t n, std::int64_t mean_degree) {
    return generate_erdos_renyi(static_cast<NodeId>(n),
                                static_cast<std::uint64_t>(n * mean_degree / 2), 7);
}

void BM_ApplyTransition(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const std::int64_t d = state.range(1);
    const CsrGraph g = bench_graph(n, 20);
    DenseMatrix<float> x(g.num_nodes(), d, 0.5f);
    for (auto _ : state) {
        auto y = apply_transition(g, x, 1);
        benchmark::DoNotOptimize(y.values().data());
    }
    state.SetItemsProcessed(state.iterations() * 2 * g.num_edges() * d);
}

void BM_SampleVerySparse(benchmark::State& state) {
    const std::uint64_t n = state.range(0);
    const ProjectionSpec spec{n, 512, default_sparsity(n), ProjectionKind::kVerySparse, 3};
    for (auto _ : state) {
        auto r = sample_very_sparse(spec);
        benchmark::DoNotOptimize(r.nonzeros());
    }
}

void BM_SampleGaussian(benchmark::State& state) {
    const std::uint64_t n = state.range(0);
    const ProjectionSpec spec{n, 128, 1.0, ProjectionKind::kGaussian, 3};
    for (auto _ : state) {
        auto r = sample_gaussian(spec);
        benchmark::DoNotOptimize(r.dense_row(0).data());
    }
}

void BM_FastRpEmbed(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const std::int64_t d = state.range(1);
    const CsrGraph g = bench_graph(n, 20);
    FastRpConfig cfg;
    cfg.d = static_cast<std::uint32_t>(d);
    cfg.k = 4;
    cfg.beta = -0.5;
    cfg.weights = {0.0, 0.0, 1.0, 1.0};
    cfg.s = default_sparsity(g.num_nodes());
    for (auto _ : state) {
        auto emb = fastrp_embed(g, cfg, static_cast<unsigned>(state.range(2)));
        benchmark::DoNotOptimize(emb.values().data());
    }
    state.SetItemsProcessed(state.iterations() * 2 * g.num_edges() * d * cfg.k);
}

void BM_MergeWeighted(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const CsrGraph g = bench_graph(n, 20);
    FastRpConfig cfg;
    cfg.d = 128;
    cfg.k = 4;
    cfg.weights = {1.0, 1.0, 1.0, 1.0};
    cfg.s = default_sparsity(g.num_nodes());
    const PowerEmbeddings powers = compute_power_embeddings(g, cfg);
    for (auto _ : state) {
        auto merged = merge_weighted(powers, cfg.weights, 1);
        benchmark::DoNotOptimize(merged.values().data());
    }
}

}  // namespace

BENCHMARK(BM_ApplyTransition)->Args({10000, 64})->Args({10000, 512})->Args({100000, 64});
BENCHMARK(BM_SampleVerySparse)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SampleGaussian)->Arg(10000);
BENCHMARK(BM_FastRpEmbed)
    ->Args({10000, 128, 1})
    ->Args({10000, 128, 2})
    ->Args({100000, 32, 1});
BENCHMARK(BM_MergeWeighted)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
