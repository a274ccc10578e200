#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace adpqis::demo {

// One-dimensional accept-reject demonstration: minimize a scalar function
// over an interval, either against the function itself or against a
// surrogate learned from the sampled costs.
struct Example1Config {
    std::function<double(double)> objective; // defaults to 25 + (x-5)^2
    double domain_lo = 0.0;
    double domain_hi = 10.0;
    double qmin0 = 35.0;
    double qmax0 = 40.0;
    int iterations = 5;   // K
    int samples = 1000;   // M accepted per iteration
    bool learn = false;   // sample against a learned quadratic surrogate
    double lambda = 0.1;  // TD rate in learn mode
    int bins = 20;
    std::uint64_t seed = 1;
};

struct Example1Result {
    std::vector<double> first_iteration; // accepted x, iteration 1
    std::vector<double> last_iteration;  // accepted x, iteration K
    std::vector<long> first_histogram;
    std::vector<long> last_histogram;
    std::vector<double> bin_edges; // bins + 1 entries
};

Example1Result run_example1(const Example1Config& config);

// Fraction of samples with |x - center| <= width.
double mass_near(const std::vector<double>& xs, double center, double width);

} // namespace adpqis::demo
