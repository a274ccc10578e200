#include <benchmark/benchmark.h>

#include "adpqis/gep.hpp"

using namespace adpqis;

static void BM_Dispatch16Blocks(benchmark::State& state)
{
    const gep::GepInstance inst = gep::load_instance(std::string(ADPQIS_DATA_DIR) + "/gep_default.json");
    const std::vector<gep::BlockDemand> blocks = gep::stage_blocks(inst, 1);
    const std::vector<double> mc = gep::marginal_costs(inst, {3.2, 50.0});
    std::vector<double> cap = inst.initial_capacity_mw;
    cap[1] += gep::peak_demand(inst, 1); // comfortably feasible
    for (auto _ : state)
        benchmark::DoNotOptimize(gep::dispatch(cap, mc, blocks).operating_cost);
}
BENCHMARK(BM_Dispatch16Blocks);

static void BM_StageCost(benchmark::State& state)
{
    const gep::GepInstance inst = gep::load_instance(std::string(ADPQIS_DATA_DIR) + "/gep_default.json");
    const gep::GepProblem problem(inst);
    const StateVector s0 = problem.initial_state();
    const ActionShares a{{0.25, 0.25, 0.25, 0.25}};
    for (auto _ : state)
        benchmark::DoNotOptimize(gep::stage_cost(inst, 1, s0, a));
}
BENCHMARK(BM_StageCost);
