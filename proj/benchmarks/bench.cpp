#include <benchmark/benchmark.h>

#include "cplearn/constraints.hpp"
#include "cplearn/encode.hpp"
#include "cplearn/layers.hpp"
#include "cplearn/problems/coloring.hpp"
#include "cplearn/search.hpp"

using namespace cplearn;

namespace {

void bm_fix_point(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        CPModel m;
        for (int i = 0; i < n; ++i) m.make_var(1, n);
        for (int i = 0; i + 1 < n; ++i)
            m.post(std::make_unique<NotEqual>(i, i + 1));
        m.assign(0, 1);
        state.ResumeTiming();
        benchmark::DoNotOptimize(m.fix_point());
    }
}
BENCHMARK(bm_fix_point)->Arg(16)->Arg(64)->Arg(256);

void bm_coloring_solve(benchmark::State& state) {
    const auto inst =
        coloring::generate(static_cast<int>(state.range(0)), 0.5, 4, 42);
    for (auto _ : state) {
        auto built = coloring::build_model(inst);
        MinValueHeuristic h;
        benchmark::DoNotOptimize(
            dfs_solve(*built.model, min_domain_heuristic(), h));
    }
}
BENCHMARK(bm_coloring_solve)->Arg(8)->Arg(12);

void bm_encode_tripartite(benchmark::State& state) {
    const auto inst =
        coloring::generate(static_cast<int>(state.range(0)), 0.5, 4, 42);
    auto built = coloring::build_model(inst);
    built.model->fix_point();
    SearchStatistics stats;
    for (auto _ : state)
        benchmark::DoNotOptimize(encode_tripartite(
            *built.model, built.vertex_vars[0], stats, FeatureConfig{}));
}
BENCHMARK(bm_encode_tripartite)->Arg(10)->Arg(20);

void bm_network_forward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const NetworkSpec spec = default_gat_spec(11, 6);
    ParameterStore store;
    init_parameters(spec, store, 1);
    GraphTopology g;
    g.n_nodes = n;
    for (int i = 0; i + 1 < n; ++i) {
        g.src.push_back(i);
        g.dst.push_back(i + 1);
        g.src.push_back(i + 1);
        g.dst.push_back(i);
    }
    Tensor feats = glorot_init(n, 11, 7);
    for (auto _ : state) {
        Tape tape;
        benchmark::DoNotOptimize(
            tape.val(network_forward(tape, feats, g, 0, spec, store)));
    }
}
BENCHMARK(bm_network_forward)->Arg(16)->Arg(64);

} // namespace

BENCHMARK_MAIN();
