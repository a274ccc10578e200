#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adpqis/approx.hpp"
#include "adpqis/mdp.hpp"
#include "adpqis/samplers.hpp"

namespace adpqis {

enum class SamplerKind { Qis, QisRe, EpsGreedy, EpsDecay };

const char* sampler_name(SamplerKind kind);
SamplerKind sampler_from_name(const std::string& name);

struct RunConfig {
    SamplerKind sampler = SamplerKind::Qis;
    int iterations = 900;       // K
    int samples = 10;           // M per stage per iteration
    int reeval_every = 20;      // K-hat, used by QisRe
    double lambda = 0.1;        // TD rate
    double gamma = 1.0;         // per-stage discount
    double epsilon = 0.5;       // EpsGreedy
    double epsilon_initial = 0.7; // EpsDecay
    double epsilon_final = 0.2;   // EpsDecay
    std::uint64_t seed = 1;
    ArgminParams argmin;
    std::int64_t proposal_budget = kDefaultProposalBudget;

    void validate() const;
};

struct RunReport {
    // Per-iteration optimal stage-1 surrogate value (raw, before
    // normalization) and the stage-1 bounds after the backward pass.
    std::vector<double> stage1_value_trace;
    std::vector<double> qmin1_trace;
    std::vector<double> qmax1_trace;
    std::vector<std::int64_t> proposals_trace; // per iteration, all stages

    double sampling_seconds = 0.0;
    double evaluation_seconds = 0.0;
    double other_seconds = 0.0;
    double total_seconds = 0.0;

    std::vector<std::vector<double>> final_theta; // per stage
};

// Min-max rescaling of the stage-1 trace to [0,1] over the run.
std::vector<double> normalized_stage1_trace(const RunReport& report);

struct RunResult {
    std::vector<QApprox> q; // index stage-1
    SampleArchive archive;
    RunReport report;
};

// Forward/backward sampling loop: per iteration, M state-action samples per
// stage via the configured strategy, then a TD batch update from stage T
// down to 1 with bound reevaluation for the QIS family. Deterministic given
// (config, seed).
RunResult run(const ProblemContract& problem, const RunConfig& config);

// Greedy rule on the learned surrogates.
class GreedyPolicy {
public:
    GreedyPolicy(std::vector<QApprox> q, ArgminParams params);

    ActionShares operator()(int stage, const StateVector& state) const;

private:
    std::vector<QApprox> q_;
    ArgminParams params_;
};

GreedyPolicy extract_policy(std::vector<QApprox> q, const ArgminParams& params);

} // namespace adpqis
