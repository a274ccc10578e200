#include "adpqis/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adpqis/lattice.hpp"

namespace adpqis {

FeatureSpec FeatureSpec::for_problem(const ProblemContract& problem)
{
    FeatureSpec spec;
    spec.inputs = problem.state_bounds();
    for (int g = 0; g < problem.action_dim(); ++g)
        spec.inputs.push_back({0.0, 1.0});
    return spec;
}

QApprox QApprox::zeros(int stage, FeatureSpec spec)
{
    QApprox q;
    q.stage = stage;
    q.theta.assign(spec.feature_count(), 0.0);
    q.spec = std::move(spec);
    return q;
}

namespace {

double normalize_input(double x, const InputBounds& b)
{
    if (!(b.hi > b.lo))
        return 0.0; // degenerate range carries no signal
    const double xn = (x - b.lo) / (b.hi - b.lo);
    return std::clamp(xn, -2.0, 2.0);
}

void fill_features(const FeatureSpec& spec, std::span<const double> inputs, std::vector<double>& out)
{
    const std::size_t d = spec.input_dim();
    if (inputs.size() != d)
        throw ContractViolation("features: input dimension mismatch");
    out.clear();
    out.reserve(spec.feature_count());
    out.push_back(1.0);
    for (std::size_t i = 0; i < d; ++i)
        out.push_back(normalize_input(inputs[i], spec.inputs[i]));
    for (std::size_t i = 0; i < d; ++i)
        out.push_back(out[1 + i] * out[1 + i]);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            out.push_back(out[1 + i] * out[1 + j]);
}

std::vector<double> joined_inputs(const StateVector& state, const ActionShares& action)
{
    std::vector<double> inputs;
    inputs.reserve(state.values.size() + action.shares.size());
    inputs.insert(inputs.end(), state.values.begin(), state.values.end());
    inputs.insert(inputs.end(), action.shares.begin(), action.shares.end());
    return inputs;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<double> features(const FeatureSpec& spec, std::span<const double> inputs)
{
    std::vector<double> out;
    fill_features(spec, inputs, out);
    return out;
}

std::vector<double> features(const FeatureSpec& spec, const StateVector& state, const ActionShares& action)
{
    return features(spec, joined_inputs(state, action));
}

double evaluate_inputs(const FeatureSpec& spec, std::span<const double> theta, std::span<const double> inputs)
{
    if (theta.size() != spec.feature_count())
        throw ContractViolation("evaluate: coefficient length mismatch");
    thread_local std::vector<double> phi;
    fill_features(spec, inputs, phi);
    const double v = dot(theta, phi);
    if (!std::isfinite(v))
        throw ContractViolation("evaluate: non-finite value");
    return v;
}

double evaluate(const QApprox& q, const StateVector& state, const ActionShares& action)
{
    return evaluate_inputs(q.spec, q.theta, joined_inputs(state, action));
}

QApprox td_batch_update(const QApprox& q, std::span<const TdSample> batch, double lambda)
{
    if (batch.empty())
        throw ContractViolation("td_batch_update: empty batch");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ContractViolation("td_batch_update: lambda outside (0,1]");

    const std::size_t f = q.spec.feature_count();
    std::vector<double> step(f, 0.0);
    std::vector<double> phi;
    for (const TdSample& sample : batch) {
        if (!std::isfinite(sample.target))
            throw ContractViolation("td_batch_update: non-finite target");
        fill_features(q.spec, joined_inputs(sample.state, sample.action), phi);
        const double norm2 = dot(phi, phi); // >= 1 from the constant term
        const double coef = (sample.target - dot(q.theta, phi)) / norm2;
        for (std::size_t i = 0; i < f; ++i)
            step[i] += coef * phi[i];
    }

    QApprox out = q;
    const double scale = lambda / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < f; ++i) {
        out.theta[i] += scale * step[i];
        if (!std::isfinite(out.theta[i]))
            throw ContractViolation("td_batch_update: non-finite coefficient");
    }
    return out;
}

ArgminResult argmin_action(const QApprox& q, const StateVector& state, const ArgminParams& params)
{
    const int n = lattice_refinement(params.resolution);
    const auto dims = q.spec.input_dim();
    if (state.values.size() >= dims)
        throw ContractViolation("argmin_action: state dimension exceeds feature inputs");
    const int g = static_cast<int>(dims - state.values.size());

    std::vector<double> inputs(dims);
    std::copy(state.values.begin(), state.values.end(), inputs.begin());
    auto value_of = [&](const std::vector<double>& shares) {
        std::copy(shares.begin(), shares.end(), inputs.begin() + static_cast<std::ptrdiff_t>(state.values.size()));
        return evaluate_inputs(q.spec, q.theta, inputs);
    };

    std::vector<double> best_shares;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> shares(static_cast<std::size_t>(g));
    for_each_composition(n, g, [&](const std::vector<int>& c) {
        for (int i = 0; i < g; ++i)
            shares[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)]) / n;
        const double v = value_of(shares);
        if (v < best) { // strict: ties keep the earlier canonical point
            best = v;
            best_shares = shares;
        }
    });

    // Pairwise-transfer refinement with a halving step. At most one transfer
    // per round is applied, the best strictly improving one.
    double delta = params.resolution / 2.0;
    std::vector<double> cand = best_shares;
    for (int round = 0; round < params.refine_steps; ++round) {
        double round_best = best;
        int from = -1, to = -1;
        for (int i = 0; i < g; ++i) {
            if (best_shares[static_cast<std::size_t>(i)] < delta)
                continue;
            for (int j = 0; j < g; ++j) {
                if (j == i)
                    continue;
                cand = best_shares;
                cand[static_cast<std::size_t>(i)] -= delta;
                cand[static_cast<std::size_t>(j)] += delta;
                const double v = value_of(cand);
                if (v < round_best) {
                    round_best = v;
                    from = i;
                    to = j;
                }
            }
        }
        if (from >= 0) {
            best_shares[static_cast<std::size_t>(from)] -= delta;
            best_shares[static_cast<std::size_t>(to)] += delta;
            best = round_best;
        }
        delta /= 2.0;
    }

    return {ActionShares{std::move(best_shares)}, best};
}

} // namespace adpqis
