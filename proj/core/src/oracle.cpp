#include "adpqis/oracle.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "adpqis/lattice.hpp"

namespace adpqis::oracle {

namespace {

std::string state_key(const StateVector& s)
{
    std::string key(s.values.size() * sizeof(double), '\0');
    std::memcpy(key.data(), s.values.data(), key.size());
    return key;
}

std::vector<double> axis_points(double lo, double hi, double grid_step)
{
    if (hi <= lo)
        return {lo}; // degenerate dimension collapses to one point
    const int m = lattice_refinement(grid_step);
    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        points.push_back(lo + (static_cast<double>(i) / m) * (hi - lo));
    return points;
}

ActionShares shares_from_composition(const std::vector<int>& c, int n)
{
    ActionShares a;
    a.shares.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        a.shares[i] = static_cast<double>(c[i]) / n;
    return a;
}

} // namespace

ScenarioTree build_tree(const gep::GepInstance& instance, double grid_step)
{
    ScenarioTree tree;
    tree.stages.reserve(static_cast<std::size_t>(instance.horizon()));
    for (const gep::StageBounds& b : instance.stage_bounds) {
        const std::vector<double> gas = axis_points(b.gas_lo, b.gas_hi, grid_step);
        const std::vector<double> carbon = axis_points(b.carbon_lo, b.carbon_hi, grid_step);
        std::vector<TreeNode> nodes;
        nodes.reserve(gas.size() * carbon.size());
        const double prob = 1.0 / static_cast<double>(gas.size() * carbon.size());
        for (double g : gas)
            for (double c : carbon)
                nodes.push_back({{g, c}, prob});
        tree.stages.push_back(std::move(nodes));
    }
    return tree;
}

ActionShares OracleSolution::policy_action(int stage, const StateVector& state) const
{
    if (stage < 1 || stage > static_cast<int>(policy_table_.size()))
        throw ContractViolation("oracle policy: stage out of range");
    const auto& table = policy_table_[static_cast<std::size_t>(stage - 1)];
    const auto it = table.find(state_key(state));
    if (it == table.end())
        throw ContractViolation("oracle policy: state not reachable by lattice play at stage " +
                                std::to_string(stage));
    return shares_from_composition(compositions_[static_cast<std::size_t>(it->second)], lattice_n_);
}

PolicyFn OracleSolution::policy() const
{
    return [this](int stage, const StateVector& state) { return policy_action(stage, state); };
}

OracleSolution backward_induction(const gep::GepInstance& instance, const ScenarioTree& tree, double shares_step,
                                  std::uint64_t cell_budget)
{
    const int horizon = instance.horizon();
    if (static_cast<int>(tree.stages.size()) != horizon)
        throw ContractViolation("backward_induction: tree/instance horizon mismatch");
    const int n = lattice_refinement(shares_step);
    const int g = instance.tech_count();

    // Value cells are (build history, node) pairs; refuse lattices whose
    // tables cannot fit.
    const auto budget_error = [&] {
        return OracleBudgetExceeded("backward_induction: value table needs more than " +
                                    std::to_string(cell_budget) +
                                    " cells; use a coarser shares_step or grid_step");
    };
    const std::uint64_t comps = composition_count(n, g);
    std::uint64_t cells = 0;
    std::uint64_t histories = 1;
    for (int t = 1; t <= horizon; ++t) {
        const std::uint64_t nodes = tree.stages[static_cast<std::size_t>(t - 1)].size();
        if (histories > cell_budget / nodes)
            throw budget_error();
        cells += histories * nodes;
        if (cells > cell_budget)
            throw budget_error();
        if (t < horizon) {
            if (histories > cell_budget / comps)
                throw budget_error();
            histories *= comps;
        }
    }

    OracleSolution solution;
    solution.shares_step = shares_step;
    solution.lattice_n_ = n;
    solution.compositions_ = simplex_compositions(n, g);
    solution.policy_table_.resize(static_cast<std::size_t>(horizon));

    std::vector<std::unordered_map<std::string, double>> value_memo(static_cast<std::size_t>(horizon));

    std::function<double(int, const StateVector&)> value = [&](int t, const StateVector& state) -> double {
        auto& memo = value_memo[static_cast<std::size_t>(t - 1)];
        const std::string key = state_key(state);
        if (const auto it = memo.find(key); it != memo.end())
            return it->second;

        double best = std::numeric_limits<double>::infinity();
        int best_c = -1;
        for (std::size_t ci = 0; ci < solution.compositions_.size(); ++ci) {
            const ActionShares shares = shares_from_composition(solution.compositions_[ci], n);
            double cost = gep::stage_cost(instance, t, state, shares);
            if (t < horizon) {
                for (const TreeNode& node : tree.stages[static_cast<std::size_t>(t)]) {
                    const StateVector next = gep::transition(instance, t, state, shares, node.draw);
                    cost += node.prob * value(t + 1, next);
                }
            }
            if (cost < best) {
                best = cost;
                best_c = static_cast<int>(ci);
            }
        }
        memo.emplace(key, best);
        solution.policy_table_[static_cast<std::size_t>(t - 1)].emplace(key, best_c);
        return best;
    };

    const gep::GepProblem problem(instance);
    const StateVector s0 = problem.initial_state();
    solution.expected_cost = value(1, s0);
    solution.stage1_shares = solution.policy_action(1, s0);
    return solution;
}

double simulate_policy(const gep::GepInstance& instance, const ScenarioTree& tree, const PolicyFn& policy)
{
    const int horizon = instance.horizon();
    if (static_cast<int>(tree.stages.size()) != horizon)
        throw ContractViolation("simulate_policy: tree/instance horizon mismatch");

    std::function<double(int, const StateVector&)> walk = [&](int t, const StateVector& state) -> double {
        const ActionShares action = policy(t, state);
        double cost = gep::stage_cost(instance, t, state, action);
        if (t == horizon)
            return cost;
        for (const TreeNode& node : tree.stages[static_cast<std::size_t>(t)])
            cost += node.prob * walk(t + 1, gep::transition(instance, t, state, action, node.draw));
        return cost;
    };

    const gep::GepProblem problem(instance);
    return walk(1, problem.initial_state());
}

double percent_gap(double policy_cost, double oracle_cost)
{
    if (!(oracle_cost > 0.0))
        throw ContractViolation("percent_gap: oracle cost must be positive");
    return 100.0 * (policy_cost - oracle_cost) / oracle_cost;
}

} // namespace adpqis::oracle
