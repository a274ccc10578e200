#pragma once

#include <string>
#include <vector>

#include "adpqis/mdp.hpp"

namespace adpqis::gep {

enum class Fuel { Gas, Coal, Uranium };

struct Technology {
    std::string name;
    double capital_cost_per_mw = 0.0; // $/MW
    double heat_rate = 0.0;           // MMBtu/MWh
    Fuel fuel = Fuel::Gas;
    double fuel_price = 0.0;   // $/MMBtu, fixed for non-gas fuels
    double emission_rate = 0.0; // tonCO2/MWh
    double variable_om = 0.0;   // $/MWh
};

struct LoadBlock {
    double hours = 0.0;          // h/yr
    double net_demand_mw = 0.0;  // base-year net demand
};

struct StageBounds {
    double gas_lo = 0.0, gas_hi = 0.0;
    double carbon_lo = 0.0, carbon_hi = 0.0;
};

// A concrete generation-expansion instance: the technologies that can be
// built, a base-year load duration curve that grows geometrically, per-stage
// uniform price bounds, and the epoch weighting that scales one
// representative year of operations up to a stage.
struct GepInstance {
    std::vector<Technology> technologies;
    std::vector<LoadBlock> blocks;
    std::vector<double> initial_capacity_mw; // per technology
    std::vector<StageBounds> stage_bounds;   // one per stage; stage 1 degenerate
    double years_per_stage = 20.0;
    double growth_rate = 0.02; // per annum
    double epoch_weight = 20.0; // years of operating cost per stage

    int horizon() const { return static_cast<int>(stage_bounds.size()); }
    int tech_count() const { return static_cast<int>(technologies.size()); }
};

struct DispatchResult {
    // generation[block][tech] in MW
    std::vector<std::vector<double>> generation;
    double operating_cost = 0.0; // $/yr
};

// Block demand grown from the base year to the stage's representative year.
double demand_at(const GepInstance& instance, int block, int stage);

double peak_demand(const GepInstance& instance, int stage);

// $/MWh of running the unit under the drawn prices.
double marginal_cost(const Technology& tech, const ExogenousDraw& draw);

std::vector<double> marginal_costs(const GepInstance& instance, const ExogenousDraw& draw);

// Stage deficit between peak block demand and installed capacity; the
// quantity the simplex action allocates. Never negative, and covering it
// keeps every block dispatchable.
double required_new_capacity(const GepInstance& instance, int stage, const std::vector<double>& capacity);

std::vector<double> shares_to_build(const GepInstance& instance, int stage, const StateVector& state,
                                    const ActionShares& action);

// Capacity accumulates; prices are replaced by the new draw.
StateVector transition(const GepInstance& instance, int stage, const StateVector& state,
                       const ActionShares& action, const ExogenousDraw& draw);

struct BlockDemand {
    double hours = 0.0;
    double demand_mw = 0.0;
};

std::vector<BlockDemand> stage_blocks(const GepInstance& instance, int stage);

// Merit-order economic dispatch: each block is served in ascending
// marginal-cost order (ties by technology index) up to capacity.
DispatchResult dispatch(const std::vector<double>& capacity, const std::vector<double>& mc,
                        const std::vector<BlockDemand>& blocks);

// Investment cost of the build decision plus epoch-weighted operating cost
// of the post-investment system under the state's prices.
double stage_cost(const GepInstance& instance, int stage, const StateVector& state, const ActionShares& action);

ExogenousDraw prices_of(const StateVector& state, int tech_count);
std::vector<double> capacities_of(const StateVector& state, int tech_count);

// Loader-facing validation; throws ContractViolation with the offending key.
void validate(const GepInstance& instance);

// Parses the JSON dataset format. Parse errors carry the line number;
// semantic errors name the key.
GepInstance load_instance(const std::string& path);

// ProblemContract adapter used by the learning driver and the benchmarks.
class GepProblem final : public ProblemContract {
public:
    explicit GepProblem(GepInstance instance);

    int horizon() const override { return instance_.horizon(); }
    int action_dim() const override { return instance_.tech_count(); }
    StateVector initial_state() const override;
    ExogenousDraw sample_exogenous(int stage, Rng& rng) const override;
    StateVector transition(int stage, const StateVector& state, const ActionShares& action,
                           const ExogenousDraw& draw) const override;
    double stage_cost(int stage, const StateVector& state, const ActionShares& action) const override;
    std::vector<InputBounds> state_bounds() const override;

    const GepInstance& instance() const { return instance_; }

private:
    GepInstance instance_;
};

} // namespace adpqis::gep
