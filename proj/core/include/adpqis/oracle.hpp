#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "adpqis/gep.hpp"
#include "adpqis/mdp.hpp"

namespace adpqis::oracle {

struct OracleBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TreeNode {
    ExogenousDraw draw;
    double prob = 1.0;
};

// Stagewise discretization of the price uncertainty; stage 1 holds the
// single degenerate node. Node probabilities are uniform per stage.
struct ScenarioTree {
    std::vector<std::vector<TreeNode>> stages; // stages[t-1]
};

ScenarioTree build_tree(const gep::GepInstance& instance, double grid_step);

using PolicyFn = std::function<ActionShares(int stage, const StateVector& state)>;

// Exact optimum over policies restricted to the shares lattice, by
// backward induction over composition histories. States reached through
// identical build histories share value-table cells.
class OracleSolution {
public:
    double expected_cost = 0.0;
    ActionShares stage1_shares;
    double shares_step = 0.0;
    double grid_step = 0.0;

    // Total decision on the lattice for any state reached by lattice play.
    ActionShares policy_action(int stage, const StateVector& state) const;
    PolicyFn policy() const;

private:
    friend OracleSolution backward_induction(const gep::GepInstance&, const ScenarioTree&, double, std::uint64_t);
    int lattice_n_ = 0;
    std::vector<std::vector<int>> compositions_;
    // per stage: state-byte key -> composition index
    std::vector<std::unordered_map<std::string, int>> policy_table_;
};

inline constexpr std::uint64_t kDefaultCellBudget = 8'000'000;

OracleSolution backward_induction(const gep::GepInstance& instance, const ScenarioTree& tree, double shares_step,
                                  std::uint64_t cell_budget = kDefaultCellBudget);

// Expected total cost of a policy over every root-to-leaf path of the tree;
// exact weighted sum, no sampling.
double simulate_policy(const gep::GepInstance& instance, const ScenarioTree& tree, const PolicyFn& policy);

// 100 * (policy - oracle) / oracle.
double percent_gap(double policy_cost, double oracle_cost);

} // namespace adpqis::oracle
