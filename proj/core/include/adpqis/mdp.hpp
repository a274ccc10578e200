#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "adpqis/rng.hpp"

namespace adpqis {

// Thrown when a caller breaks an interface precondition (bad dimensions,
// non-finite coefficients, invalid shares, ...).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct InfeasibleDispatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProposalBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State vector for a stage. For the generation-expansion problem the layout
// is fixed: one installed capacity per technology (MW), then gas price
// ($/MMBtu), then carbon price ($/ton).
struct StateVector {
    std::vector<double> values;

    bool operator==(const StateVector&) const = default;
};

// A point on the unit simplex: fraction of the stage's required new
// capacity assigned to each technology.
struct ActionShares {
    std::vector<double> shares;

    bool operator==(const ActionShares&) const = default;
};

struct ExogenousDraw {
    double gas_price = 0.0;
    double carbon_price = 0.0;

    bool operator==(const ExogenousDraw&) const = default;
};

// One accepted state-action sample, kept for later bound reevaluation.
struct SampleRecord {
    int stage = 0;
    StateVector state;
    ActionShares action;
    double reward = 0.0;
    int iteration = 0;
};

inline void validate_shares(const ActionShares& a)
{
    double sum = 0.0;
    for (double s : a.shares) {
        if (!(s >= -1e-9 && s <= 1.0 + 1e-9))
            throw ContractViolation("action share outside [0,1]");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractViolation("action shares do not sum to 1");
}

// Concatenates capacities and the two price components, in that fixed
// order, so feature extraction can stay position-based.
inline StateVector make_state(const std::vector<double>& capacities, const ExogenousDraw& draw)
{
    if (capacities.empty())
        throw ContractViolation("make_state: empty capacity vector");
    for (double c : capacities)
        if (!std::isfinite(c))
            throw ContractViolation("make_state: non-finite capacity");
    if (!std::isfinite(draw.gas_price) || !std::isfinite(draw.carbon_price))
        throw ContractViolation("make_state: non-finite price");
    StateVector s;
    s.values = capacities;
    s.values.push_back(draw.gas_price);
    s.values.push_back(draw.carbon_price);
    return s;
}

// Lower/upper range of one state or action input, used to normalize
// quadratic features.
struct InputBounds {
    double lo = 0.0;
    double hi = 1.0;
};

// Finite-horizon decision problem with a deterministic transition plus an
// exogenous draw. Implementations must be read-only after construction so
// samples can be evaluated concurrently.
class ProblemContract {
public:
    virtual ~ProblemContract() = default;

    virtual int horizon() const = 0;
    virtual int action_dim() const = 0;
    virtual StateVector initial_state() const = 0;
    virtual ExogenousDraw sample_exogenous(int stage, Rng& rng) const = 0;
    virtual StateVector transition(int stage, const StateVector& state, const ActionShares& action,
                                   const ExogenousDraw& draw) const = 0;
    virtual double stage_cost(int stage, const StateVector& state, const ActionShares& action) const = 0;

    // Normalization ranges for the state part of the feature inputs.
    virtual std::vector<InputBounds> state_bounds() const = 0;
};

} // namespace adpqis
