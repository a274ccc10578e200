#include <benchmark/benchmark.h>

#include "adpqis/approx.hpp"
#include "adpqis/rng.hpp"
#include "adpqis/samplers.hpp"

using namespace adpqis;

namespace {

QApprox make_q(int inputs)
{
    FeatureSpec spec;
    spec.inputs.assign(static_cast<std::size_t>(inputs), InputBounds{0.0, 1.0});
    QApprox q = QApprox::zeros(1, spec);
    Rng rng(1);
    for (auto& t : q.theta)
        t = uniform_in(rng, -1, 1);
    return q;
}

} // namespace

static void BM_Evaluate(benchmark::State& state)
{
    const QApprox q = make_q(10); // 66 features, the bundled problem's width
    const StateVector s{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}};
    const ActionShares a{{0.25, 0.25, 0.25, 0.25}};
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate(q, s, a));
}
BENCHMARK(BM_Evaluate);

static void BM_TdBatchUpdate(benchmark::State& state)
{
    const QApprox q = make_q(10);
    Rng rng(2);
    std::vector<TdSample> batch;
    for (int m = 0; m < 10; ++m) {
        TdSample sample;
        sample.state.values = {next_unit(rng), next_unit(rng), next_unit(rng),
                               next_unit(rng), next_unit(rng), next_unit(rng)};
        sample.action = propose_uniform_shares(4, rng);
        sample.target = uniform_in(rng, 0, 100);
        batch.push_back(std::move(sample));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(td_batch_update(q, batch, 0.1).theta[0]);
}
BENCHMARK(BM_TdBatchUpdate);

static void BM_ArgminAction(benchmark::State& state)
{
    const QApprox q = make_q(10);
    const StateVector s{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}};
    const ArgminParams params{1.0 / static_cast<int>(state.range(0)), 20};
    for (auto _ : state)
        benchmark::DoNotOptimize(argmin_action(q, s, params).value);
}
BENCHMARK(BM_ArgminAction)->Arg(10)->Arg(20);
