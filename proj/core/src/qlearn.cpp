#include "adpqis/qlearn.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace adpqis {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

const char* sampler_name(SamplerKind kind)
{
    switch (kind) {
    case SamplerKind::Qis: return "qis";
    case SamplerKind::QisRe: return "qis-re";
    case SamplerKind::EpsGreedy: return "eps-greedy";
    case SamplerKind::EpsDecay: return "eps-decay";
    }
    throw ContractViolation("unknown sampler kind");
}

SamplerKind sampler_from_name(const std::string& name)
{
    if (name == "qis") return SamplerKind::Qis;
    if (name == "qis-re") return SamplerKind::QisRe;
    if (name == "eps-greedy") return SamplerKind::EpsGreedy;
    if (name == "eps-decay") return SamplerKind::EpsDecay;
    throw ContractViolation("unknown sampler '" + name + "' (expected qis, qis-re, eps-greedy or eps-decay)");
}

void RunConfig::validate() const
{
    if (iterations < 1)
        throw ContractViolation("RunConfig: iterations must be >= 1");
    if (samples < 1)
        throw ContractViolation("RunConfig: samples must be >= 1");
    if (reeval_every < 1)
        throw ContractViolation("RunConfig: reeval_every must be >= 1");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ContractViolation("RunConfig: lambda outside (0,1]");
    if (gamma < 0.0 || gamma > 1.0)
        throw ContractViolation("RunConfig: gamma outside [0,1]");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw ContractViolation("RunConfig: epsilon outside [0,1]");
}

std::vector<double> normalized_stage1_trace(const RunReport& report)
{
    const auto& raw = report.stage1_value_trace;
    std::vector<double> out(raw.size(), 0.0);
    if (raw.empty())
        return out;
    double lo = raw.front(), hi = raw.front();
    for (double v : raw) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo)
        return out;
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = (raw[i] - lo) / (hi - lo);
    return out;
}

RunResult run(const ProblemContract& problem, const RunConfig& config)
{
    config.validate();
    const int horizon = problem.horizon();
    if (horizon < 1)
        throw ContractViolation("run: problem horizon must be >= 1");
    const int num_samples = config.samples;

    const auto run_start = Clock::now();
    Rng rng(config.seed);

    FeatureSpec spec = FeatureSpec::for_problem(problem);
    std::vector<QApprox> q;
    std::vector<QisBounds> bounds;
    q.reserve(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
        q.push_back(QApprox::zeros(t, spec));
        bounds.push_back({t, 0.0, 1.0});
    }

    SampleArchive archive(horizon);
    RunReport report;
    report.stage1_value_trace.reserve(static_cast<std::size_t>(config.iterations));

    const bool qis_family = config.sampler == SamplerKind::Qis || config.sampler == SamplerKind::QisRe;
    const int reeval_period = config.sampler == SamplerKind::Qis ? 1 : config.reeval_every;
    EpsilonSchedule decay{config.epsilon_initial, config.epsilon_final, config.iterations};

    const StateVector s0 = problem.initial_state();

    // states[t-1][m], actions[t-1][m], rewards[t-1][m] for the current iteration
    std::vector<std::vector<StateVector>> states(static_cast<std::size_t>(horizon));
    std::vector<std::vector<ActionShares>> actions(static_cast<std::size_t>(horizon));
    std::vector<std::vector<double>> rewards(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        states[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(num_samples));
        actions[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(num_samples));
        rewards[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(num_samples), 0.0);
    }

    double sampling_seconds = 0.0;
    double evaluation_seconds = 0.0;

    for (int k = 1; k <= config.iterations; ++k) {
        std::int64_t proposals_this_iteration = 0;

        // Forward pass: states first, then the per-stage action loop.
        for (int t = 1; t <= horizon; ++t) {
            auto& st = states[static_cast<std::size_t>(t - 1)];
            if (t == 1) {
                for (int m = 0; m < num_samples; ++m)
                    st[static_cast<std::size_t>(m)] = s0;
            } else {
                for (int m = 0; m < num_samples; ++m) {
                    const ExogenousDraw draw = problem.sample_exogenous(t, rng);
                    st[static_cast<std::size_t>(m)] =
                        problem.transition(t - 1, states[static_cast<std::size_t>(t - 2)][static_cast<std::size_t>(m)],
                                           actions[static_cast<std::size_t>(t - 2)][static_cast<std::size_t>(m)], draw);
                }
            }

            QApprox& qt = q[static_cast<std::size_t>(t - 1)];
            QisBounds& bt = bounds[static_cast<std::size_t>(t - 1)];
            for (int m = 0; m < num_samples; ++m) {
                const StateVector& state = st[static_cast<std::size_t>(m)];
                ActionShares action;
                const auto sample_start = Clock::now();
                try {
                    switch (config.sampler) {
                    case SamplerKind::Qis:
                    case SamplerKind::QisRe: {
                        QisSampleResult r = qis_sample_action(qt, state, bt, rng, config.proposal_budget);
                        bt = r.bounds;
                        proposals_this_iteration += r.proposals;
                        action = std::move(r.action);
                        break;
                    }
                    case SamplerKind::EpsGreedy:
                        action = epsilon_greedy_action(qt, state, config.epsilon, config.argmin, rng);
                        ++proposals_this_iteration;
                        break;
                    case SamplerKind::EpsDecay:
                        action = epsilon_greedy_action(qt, state, epsilon_at(decay, k), config.argmin, rng);
                        ++proposals_this_iteration;
                        break;
                    }
                } catch (const ProposalBudgetExceeded& e) {
                    throw ProposalBudgetExceeded(std::string(e.what()) + " (iteration " + std::to_string(k) + ")");
                }
                sampling_seconds += seconds_since(sample_start);

                const double reward = problem.stage_cost(t, state, action);
                actions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(m)] = action;
                rewards[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(m)] = reward;
                archive.append({t, state, std::move(action), reward, k});
            }
        }

        // Backward pass, stage T down to 1; stage t targets bootstrap from
        // the just-updated stage t+1 surrogate.
        for (int t = horizon; t >= 1; --t) {
            std::vector<TdSample> batch;
            batch.reserve(static_cast<std::size_t>(num_samples));
            for (int m = 0; m < num_samples; ++m) {
                double target = rewards[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(m)];
                if (t < horizon) {
                    const ArgminResult next = argmin_action(
                        q[static_cast<std::size_t>(t)], states[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)],
                        config.argmin);
                    target += config.gamma * next.value;
                }
                if (!std::isfinite(target))
                    throw std::runtime_error("run: non-finite TD target at stage " + std::to_string(t) +
                                             ", iteration " + std::to_string(k));
                batch.push_back({states[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(m)],
                                 actions[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(m)], target});
            }
            q[static_cast<std::size_t>(t - 1)] = td_batch_update(q[static_cast<std::size_t>(t - 1)], batch, config.lambda);

            if (qis_family && k % reeval_period == 0) {
                const auto eval_start = Clock::now();
                bounds[static_cast<std::size_t>(t - 1)] =
                    reevaluate_bounds(q[static_cast<std::size_t>(t - 1)], archive, t, bounds[static_cast<std::size_t>(t - 1)]);
                evaluation_seconds += seconds_since(eval_start);
            }
        }

        report.stage1_value_trace.push_back(argmin_action(q.front(), s0, config.argmin).value);
        report.qmin1_trace.push_back(bounds.front().q_min);
        report.qmax1_trace.push_back(bounds.front().q_max);
        report.proposals_trace.push_back(proposals_this_iteration);
    }

    report.sampling_seconds = sampling_seconds;
    report.evaluation_seconds = evaluation_seconds;
    report.total_seconds = seconds_since(run_start);
    report.other_seconds = std::max(0.0, report.total_seconds - sampling_seconds - evaluation_seconds);
    report.final_theta.reserve(q.size());
    for (const QApprox& qt : q)
        report.final_theta.push_back(qt.theta);

    return {std::move(q), std::move(archive), std::move(report)};
}

GreedyPolicy::GreedyPolicy(std::vector<QApprox> q, ArgminParams params)
    : q_(std::move(q)), params_(params)
{
    if (q_.empty())
        throw ContractViolation("GreedyPolicy: no stage approximations");
}

ActionShares GreedyPolicy::operator()(int stage, const StateVector& state) const
{
    if (stage < 1 || stage > static_cast<int>(q_.size()))
        throw ContractViolation("GreedyPolicy: stage out of range");
    return argmin_action(q_[static_cast<std::size_t>(stage - 1)], state, params_).action;
}

GreedyPolicy extract_policy(std::vector<QApprox> q, const ArgminParams& params)
{
    return GreedyPolicy(std::move(q), params);
}

} // namespace adpqis
