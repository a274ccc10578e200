#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace adpqis::stats {

// Linear-interpolation quantile on the sorted sample, h = q*(n-1).
inline double quantile(std::vector<double> xs, double q)
{
    if (xs.empty())
        throw std::invalid_argument("quantile of empty sample");
    if (q < 0.0 || q > 1.0)
        throw std::invalid_argument("quantile level outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const auto hi = std::min(lo + 1, xs.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

// Even-sized samples take the mean of the middle two.
inline double median(const std::vector<double>& xs)
{
    return quantile(xs, 0.5);
}

inline double interquartile_range(const std::vector<double>& xs)
{
    return quantile(xs, 0.75) - quantile(xs, 0.25);
}

} // namespace adpqis::stats
