#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace adpqis {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of the generator,
// so sequences do not depend on the standard library's distribution
// implementation.
inline double next_unit(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi)
{
    return lo + next_unit(rng) * (hi - lo);
}

// Unit-rate exponential; -log(1-u) keeps the argument strictly positive.
inline double next_exponential(Rng& rng)
{
    return -std::log1p(-next_unit(rng));
}

} // namespace adpqis
