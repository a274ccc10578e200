#include <benchmark/benchmark.h>

#include "adpqis/rng.hpp"
#include "adpqis/samplers.hpp"

using namespace adpqis;

static void BM_ProposeUniformShares(benchmark::State& state)
{
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(propose_uniform_shares(4, rng).shares[0]);
}
BENCHMARK(BM_ProposeUniformShares);

static void BM_QisSampleAction(benchmark::State& state)
{
    FeatureSpec spec;
    spec.inputs.assign(4, InputBounds{0.0, 1.0});
    QApprox q = QApprox::zeros(1, spec);
    Rng rng(2);
    for (auto& t : q.theta)
        t = uniform_in(rng, -1, 1);
    const QisBounds bounds{1, -3.0, 3.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(qis_sample_action(q, StateVector{{}}, bounds, rng).proposals);
}
BENCHMARK(BM_QisSampleAction);

static void BM_ReevaluateBounds(benchmark::State& state)
{
    FeatureSpec spec;
    spec.inputs.assign(4, InputBounds{0.0, 1.0});
    QApprox q = QApprox::zeros(1, spec);
    Rng rng(3);
    for (auto& t : q.theta)
        t = uniform_in(rng, -1, 1);
    SampleArchive archive(1);
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
        archive.append({1, StateVector{{}}, propose_uniform_shares(4, rng), 1.0, i + 1});
    for (auto _ : state)
        benchmark::DoNotOptimize(reevaluate_bounds(q, archive, 1, {1, 0.0, 1.0}).q_max);
}
BENCHMARK(BM_ReevaluateBounds)->Arg(1000)->Arg(27000);
