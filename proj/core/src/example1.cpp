#include "adpqis/example1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adpqis/approx.hpp"
#include "adpqis/mdp.hpp"
#include "adpqis/rng.hpp"
#include "adpqis/samplers.hpp"

namespace adpqis::demo {

Example1Result run_example1(const Example1Config& config)
{
    if (config.iterations < 1 || config.samples < 1 || config.bins < 1)
        throw ContractViolation("example1: iterations, samples and bins must be >= 1");
    if (!(config.domain_hi > config.domain_lo))
        throw ContractViolation("example1: empty domain");

    const auto objective =
        config.objective ? config.objective : [](double x) { return 25.0 + (x - 5.0) * (x - 5.0); };

    Rng rng(config.seed);
    FeatureSpec spec{{InputBounds{config.domain_lo, config.domain_hi}}};
    std::vector<double> theta(spec.feature_count(), 0.0);

    const auto surrogate = [&](double x) {
        if (!config.learn)
            return objective(x);
        const double inputs[1] = {x};
        return evaluate_inputs(spec, theta, inputs);
    };

    QisBounds bounds{1, config.qmin0, config.qmax0};
    std::vector<double> archive_x;
    Example1Result result;

    for (int k = 1; k <= config.iterations; ++k) {
        std::vector<double> accepted;
        accepted.reserve(static_cast<std::size_t>(config.samples));
        std::int64_t budget = kDefaultProposalBudget;
        while (static_cast<int>(accepted.size()) < config.samples) {
            if (--budget < 0)
                throw ProposalBudgetExceeded("example1: proposal budget exhausted");
            const double x = uniform_in(rng, config.domain_lo, config.domain_hi);
            const double v = surrogate(x);
            if (v > bounds.q_max)
                bounds.q_max = v;
            if (v < bounds.q_min)
                bounds.q_min = v;
            if (qratio(v, bounds) > next_unit(rng))
                accepted.push_back(x);
        }
        archive_x.insert(archive_x.end(), accepted.begin(), accepted.end());

        if (config.learn) {
            // Batch TD step toward the observed costs, then fresh bounds
            // from every archived sample under the updated surrogate.
            std::vector<double> step(theta.size(), 0.0);
            for (double x : accepted) {
                const double inputs[1] = {x};
                const std::vector<double> phi = features(spec, inputs);
                double norm2 = 0.0, value = 0.0;
                for (std::size_t i = 0; i < phi.size(); ++i) {
                    norm2 += phi[i] * phi[i];
                    value += theta[i] * phi[i];
                }
                const double coef = (objective(x) - value) / norm2;
                for (std::size_t i = 0; i < phi.size(); ++i)
                    step[i] += coef * phi[i];
            }
            for (std::size_t i = 0; i < theta.size(); ++i)
                theta[i] += config.lambda * step[i] / static_cast<double>(accepted.size());
        }

        double lo = surrogate(archive_x.front());
        double hi = lo;
        for (double x : archive_x) {
            const double v = surrogate(x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        bounds.q_min = lo;
        bounds.q_max = hi;

        if (k == 1)
            result.first_iteration = accepted;
        if (k == config.iterations)
            result.last_iteration = std::move(accepted);
    }

    const double width = (config.domain_hi - config.domain_lo) / config.bins;
    result.bin_edges.resize(static_cast<std::size_t>(config.bins) + 1);
    for (int b = 0; b <= config.bins; ++b)
        result.bin_edges[static_cast<std::size_t>(b)] = config.domain_lo + b * width;
    const auto histogram = [&](const std::vector<double>& xs) {
        std::vector<long> counts(static_cast<std::size_t>(config.bins), 0);
        for (double x : xs) {
            int b = static_cast<int>((x - config.domain_lo) / width);
            b = std::clamp(b, 0, config.bins - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
        return counts;
    };
    result.first_histogram = histogram(result.first_iteration);
    result.last_histogram = histogram(result.last_iteration);
    return result;
}

double mass_near(const std::vector<double>& xs, double center, double width)
{
    if (xs.empty())
        return 0.0;
    long hits = 0;
    for (double x : xs)
        if (std::abs(x - center) <= width)
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(xs.size());
}

} // namespace adpqis::demo
