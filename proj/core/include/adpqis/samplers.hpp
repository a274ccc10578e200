#pragma once

#include <cstdint>
#include <vector>

#include "adpqis/approx.hpp"
#include "adpqis/mdp.hpp"
#include "adpqis/rng.hpp"

namespace adpqis {

// Running envelope of surrogate values seen for one stage.
struct QisBounds {
    int stage = 0;
    double q_min = 0.0;
    double q_max = 1.0;
};

// Append-only store of every accepted state-action sample, per stage.
class SampleArchive {
public:
    explicit SampleArchive(int horizon);

    void append(SampleRecord record);
    const std::vector<SampleRecord>& records(int stage) const;
    int horizon() const { return static_cast<int>(by_stage_.size()); }
    std::size_t total_size() const;

private:
    std::vector<std::vector<SampleRecord>> by_stage_;
};

// Geometric schedule epsilon_k = epsilon_initial * delta^k with delta
// chosen so epsilon_K equals epsilon_final.
struct EpsilonSchedule {
    double epsilon_initial = 1.0;
    double epsilon_final = 0.1;
    int total_iterations = 1;

    double delta() const;
};

// Closed form, valid for 0 <= k <= K. epsilon_final == 0 degenerates to
// zero exploration from k = 1 on.
double epsilon_at(const EpsilonSchedule& schedule, int k);

// Uniform point on the (G-1)-simplex via normalized unit exponentials.
ActionShares propose_uniform_shares(int dim, Rng& rng);

// Acceptance probability of a proposal value given the running bounds.
// Equal bounds carry no information and accept with probability 1.
double qratio(double q_value, const QisBounds& bounds);

struct QisSampleResult {
    ActionShares action;
    QisBounds bounds;
    std::int64_t proposals = 0;
};

inline constexpr std::int64_t kDefaultProposalBudget = 1'000'000;

// Accept-reject loop: propose uniformly, extend bounds with every proposal
// (accepted or not), accept when qratio exceeds a fresh U(0,1).
QisSampleResult qis_sample_action(const QApprox& q, const StateVector& state, QisBounds bounds, Rng& rng,
                                  std::int64_t proposal_budget = kDefaultProposalBudget);

// Fresh bounds from scanning every archived sample of the stage under the
// current coefficients. An unvisited stage keeps its prior bounds.
QisBounds reevaluate_bounds(const QApprox& q, const SampleArchive& archive, int stage, const QisBounds& prior);

// Uniform exploration with probability epsilon, otherwise the surrogate
// minimizer.
ActionShares epsilon_greedy_action(const QApprox& q, const StateVector& state, double epsilon,
                                   const ArgminParams& argmin_params, Rng& rng);

} // namespace adpqis
