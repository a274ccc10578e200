#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adpqis/mdp.hpp"

namespace adpqis {

// Quadratic feature map over normalized inputs: constant term, linears,
// squares, and all pairwise products. Inputs are the state entries followed
// by the action shares.
struct FeatureSpec {
    std::vector<InputBounds> inputs;

    std::size_t input_dim() const { return inputs.size(); }
    std::size_t feature_count() const
    {
        const std::size_t d = inputs.size();
        return 1 + d + d + d * (d - 1) / 2;
    }

    static FeatureSpec for_problem(const ProblemContract& problem);
};

// Per-stage linear-in-coefficients value surrogate.
struct QApprox {
    int stage = 0;
    FeatureSpec spec;
    std::vector<double> theta; // length == spec.feature_count()

    static QApprox zeros(int stage, FeatureSpec spec);
};

// Normalized to (x-lo)/(hi-lo), clipped to [-2,2]; degenerate ranges map
// to 0. Output order: [1, x1..xd, x1^2..xd^2, x1x2, x1x3, ..., x(d-1)xd].
std::vector<double> features(const FeatureSpec& spec, std::span<const double> inputs);
std::vector<double> features(const FeatureSpec& spec, const StateVector& state, const ActionShares& action);

double evaluate_inputs(const FeatureSpec& spec, std::span<const double> theta, std::span<const double> inputs);
double evaluate(const QApprox& q, const StateVector& state, const ActionShares& action);

struct TdSample {
    StateVector state;
    ActionShares action;
    double target = 0.0;
};

// One averaged semi-gradient step over the batch. The per-sample step is
// normalized by the squared feature norm so that a single-sample update
// moves the value at that point to exactly (1-lambda)*old + lambda*target.
QApprox td_batch_update(const QApprox& q, std::span<const TdSample> batch, double lambda);

struct ArgminParams {
    double resolution = 0.05; // simplex lattice step, must be 1/n
    int refine_steps = 20;    // local pairwise-transfer rounds after the scan
};

struct ArgminResult {
    ActionShares action;
    double value = 0.0;
};

// Scans the full simplex lattice, then hill-climbs by moving mass between
// coordinate pairs with a halving step. Deterministic; lattice ties keep
// the earlier point in canonical enumeration order.
ArgminResult argmin_action(const QApprox& q, const StateVector& state, const ArgminParams& params);

} // namespace adpqis
