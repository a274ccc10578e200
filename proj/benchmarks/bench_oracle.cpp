#include <benchmark/benchmark.h>

#include "adpqis/gep.hpp"
#include "adpqis/oracle.hpp"

using namespace adpqis;

static void BM_BackwardInduction(benchmark::State& state)
{
    const gep::GepInstance inst = gep::load_instance(std::string(ADPQIS_DATA_DIR) + "/gep_default.json");
    const oracle::ScenarioTree tree = oracle::build_tree(inst, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::backward_induction(inst, tree, 0.25).expected_cost);
}
BENCHMARK(BM_BackwardInduction)->Unit(benchmark::kMillisecond);

static void BM_SimulatePolicy(benchmark::State& state)
{
    const gep::GepInstance inst = gep::load_instance(std::string(ADPQIS_DATA_DIR) + "/gep_default.json");
    const oracle::ScenarioTree tree = oracle::build_tree(inst, 0.5);
    const oracle::OracleSolution sol = oracle::backward_induction(inst, tree, 0.25);
    const oracle::PolicyFn policy = sol.policy();
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::simulate_policy(inst, tree, policy));
}
BENCHMARK(BM_SimulatePolicy)->Unit(benchmark::kMillisecond);
