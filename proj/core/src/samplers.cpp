#include "adpqis/samplers.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace adpqis {

SampleArchive::SampleArchive(int horizon)
{
    if (horizon < 1)
        throw ContractViolation("SampleArchive: horizon must be >= 1");
    by_stage_.resize(static_cast<std::size_t>(horizon));
}

void SampleArchive::append(SampleRecord record)
{
    if (record.stage < 1 || record.stage > horizon())
        throw ContractViolation("SampleArchive: stage out of range");
    if (!std::isfinite(record.reward))
        throw ContractViolation("SampleArchive: non-finite reward");
    if (record.iteration < 1)
        throw ContractViolation("SampleArchive: iteration must be >= 1");
    by_stage_[static_cast<std::size_t>(record.stage - 1)].push_back(std::move(record));
}

const std::vector<SampleRecord>& SampleArchive::records(int stage) const
{
    if (stage < 1 || stage > horizon())
        throw ContractViolation("SampleArchive: stage out of range");
    return by_stage_[static_cast<std::size_t>(stage - 1)];
}

std::size_t SampleArchive::total_size() const
{
    std::size_t n = 0;
    for (const auto& v : by_stage_)
        n += v.size();
    return n;
}

double EpsilonSchedule::delta() const
{
    if (!(epsilon_initial > 0.0 && epsilon_initial <= 1.0))
        throw ContractViolation("EpsilonSchedule: epsilon_initial outside (0,1]");
    if (epsilon_final < 0.0 || epsilon_final > epsilon_initial)
        throw ContractViolation("EpsilonSchedule: epsilon_final outside [0, epsilon_initial]");
    if (total_iterations < 1)
        throw ContractViolation("EpsilonSchedule: total_iterations must be >= 1");
    return std::pow(epsilon_final / epsilon_initial, 1.0 / total_iterations);
}

double epsilon_at(const EpsilonSchedule& schedule, int k)
{
    (void)schedule.delta(); // validates fields
    if (k < 0 || k > schedule.total_iterations)
        throw ContractViolation("epsilon_at: k outside [0, K]");
    if (k == 0)
        return schedule.epsilon_initial;
    // Closed form epsilon_initial * delta^k, not repeated multiplication.
    return schedule.epsilon_initial *
           std::pow(schedule.epsilon_final / schedule.epsilon_initial,
                    static_cast<double>(k) / schedule.total_iterations);
}

ActionShares propose_uniform_shares(int dim, Rng& rng)
{
    if (dim < 2)
        throw ContractViolation("propose_uniform_shares: need at least 2 components");
    ActionShares a;
    a.shares.resize(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double& s : a.shares) {
        s = next_exponential(rng);
        sum += s;
    }
    for (double& s : a.shares)
        s /= sum;
    return a;
}

double qratio(double q_value, const QisBounds& bounds)
{
    if (bounds.q_max <= bounds.q_min)
        return 1.0; // no spread observed yet: explore freely
    const double r = (bounds.q_max - q_value) / (bounds.q_max - bounds.q_min);
    if (r < 0.0)
        return 0.0;
    if (r > 1.0)
        return 1.0;
    return r;
}

QisSampleResult qis_sample_action(const QApprox& q, const StateVector& state, QisBounds bounds, Rng& rng,
                                  std::int64_t proposal_budget)
{
    const int g = static_cast<int>(q.spec.input_dim() - state.values.size());
    for (std::int64_t tried = 1; tried <= proposal_budget; ++tried) {
        ActionShares proposal = propose_uniform_shares(g, rng);
        const double v = evaluate(q, state, proposal);
        if (v > bounds.q_max)
            bounds.q_max = v;
        if (v < bounds.q_min)
            bounds.q_min = v;
        const double ratio = qratio(v, bounds);
        const double u = next_unit(rng);
        if (ratio > u)
            return {std::move(proposal), bounds, tried};
    }
    throw ProposalBudgetExceeded("qis_sample_action: proposal budget exhausted at stage " +
                                 std::to_string(bounds.stage) +
                                 " (surrogate bounds may have collapsed)");
}

QisBounds reevaluate_bounds(const QApprox& q, const SampleArchive& archive, int stage, const QisBounds& prior)
{
    const auto& records = archive.records(stage);
    if (records.empty())
        return prior;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const SampleRecord& r : records) {
        const double v = evaluate(q, r.state, r.action);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {stage, lo, hi};
}

ActionShares epsilon_greedy_action(const QApprox& q, const StateVector& state, double epsilon,
                                   const ArgminParams& argmin_params, Rng& rng)
{
    if (epsilon < 0.0 || epsilon > 1.0)
        throw ContractViolation("epsilon_greedy_action: epsilon outside [0,1]");
    const int g = static_cast<int>(q.spec.input_dim() - state.values.size());
    if (next_unit(rng) < epsilon)
        return propose_uniform_shares(g, rng);
    return argmin_action(q, state, argmin_params).action;
}

} // namespace adpqis
