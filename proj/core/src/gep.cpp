#include "adpqis/gep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace adpqis::gep {

namespace {

void check_stage(const GepInstance& instance, int stage)
{
    if (stage < 1 || stage > instance.horizon())
        throw ContractViolation("gep: stage out of range");
}

void check_state(const GepInstance& instance, const StateVector& state)
{
    if (state.values.size() != static_cast<std::size_t>(instance.tech_count()) + 2)
        throw ContractViolation("gep: state dimension mismatch");
}

void check_action(const GepInstance& instance, const ActionShares& action)
{
    if (action.shares.size() != static_cast<std::size_t>(instance.tech_count()))
        throw ContractViolation("gep: action dimension mismatch");
    validate_shares(action);
}

} // namespace

double demand_at(const GepInstance& instance, int block, int stage)
{
    check_stage(instance, stage);
    if (block < 0 || block >= static_cast<int>(instance.blocks.size()))
        throw ContractViolation("gep: block index out of range");
    const double years = instance.years_per_stage * (stage - 1);
    return instance.blocks[static_cast<std::size_t>(block)].net_demand_mw *
           std::pow(1.0 + instance.growth_rate, years);
}

double peak_demand(const GepInstance& instance, int stage)
{
    double peak = 0.0;
    for (int b = 0; b < static_cast<int>(instance.blocks.size()); ++b)
        peak = std::max(peak, demand_at(instance, b, stage));
    return peak;
}

double marginal_cost(const Technology& tech, const ExogenousDraw& draw)
{
    const double fuel_price = tech.fuel == Fuel::Gas ? draw.gas_price : tech.fuel_price;
    return tech.heat_rate * fuel_price + tech.emission_rate * draw.carbon_price + tech.variable_om;
}

std::vector<double> marginal_costs(const GepInstance& instance, const ExogenousDraw& draw)
{
    std::vector<double> mc;
    mc.reserve(instance.technologies.size());
    for (const Technology& t : instance.technologies)
        mc.push_back(marginal_cost(t, draw));
    return mc;
}

double required_new_capacity(const GepInstance& instance, int stage, const std::vector<double>& capacity)
{
    check_stage(instance, stage);
    for (double c : capacity)
        if (c < 0.0 || !std::isfinite(c))
            throw ContractViolation("gep: negative or non-finite capacity");
    const double total = std::accumulate(capacity.begin(), capacity.end(), 0.0);
    return std::max(0.0, peak_demand(instance, stage) - total);
}

ExogenousDraw prices_of(const StateVector& state, int tech_count)
{
    if (state.values.size() != static_cast<std::size_t>(tech_count) + 2)
        throw ContractViolation("gep: state dimension mismatch");
    return {state.values[static_cast<std::size_t>(tech_count)],
            state.values[static_cast<std::size_t>(tech_count) + 1]};
}

std::vector<double> capacities_of(const StateVector& state, int tech_count)
{
    if (state.values.size() != static_cast<std::size_t>(tech_count) + 2)
        throw ContractViolation("gep: state dimension mismatch");
    return {state.values.begin(), state.values.begin() + tech_count};
}

std::vector<double> shares_to_build(const GepInstance& instance, int stage, const StateVector& state,
                                    const ActionShares& action)
{
    check_state(instance, state);
    check_action(instance, action);
    const double required = required_new_capacity(instance, stage, capacities_of(state, instance.tech_count()));
    std::vector<double> build(action.shares.size());
    for (std::size_t g = 0; g < build.size(); ++g)
        build[g] = std::max(0.0, action.shares[g]) * required;
    return build;
}

StateVector transition(const GepInstance& instance, int stage, const StateVector& state,
                       const ActionShares& action, const ExogenousDraw& draw)
{
    const std::vector<double> build = shares_to_build(instance, stage, state, action);
    std::vector<double> capacity = capacities_of(state, instance.tech_count());
    for (std::size_t g = 0; g < capacity.size(); ++g)
        capacity[g] += build[g];
    return make_state(capacity, draw);
}

std::vector<BlockDemand> stage_blocks(const GepInstance& instance, int stage)
{
    std::vector<BlockDemand> out;
    out.reserve(instance.blocks.size());
    for (int b = 0; b < static_cast<int>(instance.blocks.size()); ++b)
        out.push_back({instance.blocks[static_cast<std::size_t>(b)].hours, demand_at(instance, b, stage)});
    return out;
}

DispatchResult dispatch(const std::vector<double>& capacity, const std::vector<double>& mc,
                        const std::vector<BlockDemand>& blocks)
{
    if (capacity.size() != mc.size())
        throw ContractViolation("dispatch: capacity/cost dimension mismatch");
    const std::size_t g = capacity.size();

    // Merit order: ascending marginal cost, ties by technology index.
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mc[a] < mc[b]; });

    DispatchResult result;
    result.generation.assign(blocks.size(), std::vector<double>(g, 0.0));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        double remaining = blocks[b].demand_mw;
        for (std::size_t k = 0; k < g && remaining > 1e-9; ++k) {
            const std::size_t unit = order[k];
            const double x = std::min(capacity[unit], remaining);
            result.generation[b][unit] = x;
            result.operating_cost += mc[unit] * x * blocks[b].hours;
            remaining -= x;
        }
        if (remaining > 1e-9)
            throw InfeasibleDispatch("dispatch: demand block " + std::to_string(b) +
                                     " exceeds total capacity by " + std::to_string(remaining) + " MW");
    }
    return result;
}

double stage_cost(const GepInstance& instance, int stage, const StateVector& state, const ActionShares& action)
{
    const std::vector<double> build = shares_to_build(instance, stage, state, action);
    std::vector<double> capacity = capacities_of(state, instance.tech_count());
    double investment = 0.0;
    for (std::size_t g = 0; g < build.size(); ++g) {
        investment += instance.technologies[g].capital_cost_per_mw * build[g];
        capacity[g] += build[g];
    }
    const ExogenousDraw draw = prices_of(state, instance.tech_count());
    const DispatchResult d = dispatch(capacity, marginal_costs(instance, draw), stage_blocks(instance, stage));
    return investment + instance.epoch_weight * d.operating_cost;
}

GepProblem::GepProblem(GepInstance instance)
    : instance_(std::move(instance))
{
    validate(instance_);
}

StateVector GepProblem::initial_state() const
{
    const StageBounds& b = instance_.stage_bounds.front();
    return make_state(instance_.initial_capacity_mw, {b.gas_lo, b.carbon_lo});
}

ExogenousDraw GepProblem::sample_exogenous(int stage, Rng& rng) const
{
    if (stage < 1 || stage > horizon())
        throw ContractViolation("gep: stage out of range");
    const StageBounds& b = instance_.stage_bounds[static_cast<std::size_t>(stage - 1)];
    // Degenerate bounds collapse to the fixed point; stage 1 needs no
    // special case anywhere else.
    return {uniform_in(rng, b.gas_lo, b.gas_hi), uniform_in(rng, b.carbon_lo, b.carbon_hi)};
}

StateVector GepProblem::transition(int stage, const StateVector& state, const ActionShares& action,
                                   const ExogenousDraw& draw) const
{
    return gep::transition(instance_, stage, state, action, draw);
}

double GepProblem::stage_cost(int stage, const StateVector& state, const ActionShares& action) const
{
    return gep::stage_cost(instance_, stage, state, action);
}

std::vector<InputBounds> GepProblem::state_bounds() const
{
    // Capacities normalized against four times the initial fleet; prices
    // against the widest (final-stage) bounds.
    const double cap_hi =
        4.0 * std::accumulate(instance_.initial_capacity_mw.begin(), instance_.initial_capacity_mw.end(), 0.0);
    std::vector<InputBounds> bounds(static_cast<std::size_t>(instance_.tech_count()), {0.0, cap_hi});
    const StageBounds& last = instance_.stage_bounds.back();
    bounds.push_back({last.gas_lo, last.gas_hi});
    bounds.push_back({last.carbon_lo, last.carbon_hi});
    return bounds;
}

} // namespace adpqis::gep
