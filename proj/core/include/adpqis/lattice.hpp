#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace adpqis {

// Integer compositions of n into parts non-negative counts, emitted in
// canonical order: first coordinate descending, then recursively the rest.
// (n,0,...,0) comes first, (0,...,0,n) last.
inline void for_each_composition(int n, int parts, const std::function<void(const std::vector<int>&)>& fn)
{
    if (n < 0 || parts < 1)
        throw std::invalid_argument("for_each_composition: bad arguments");
    std::vector<int> c(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == parts - 1) {
            c[static_cast<std::size_t>(pos)] = remaining;
            fn(c);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            c[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, n);
}

inline std::vector<std::vector<int>> simplex_compositions(int n, int parts)
{
    std::vector<std::vector<int>> out;
    for_each_composition(n, parts, [&](const std::vector<int>& c) { out.push_back(c); });
    return out;
}

// C(n + parts - 1, parts - 1) without enumerating.
inline std::uint64_t composition_count(int n, int parts)
{
    std::uint64_t num = 1;
    for (int i = 1; i <= parts - 1; ++i)
        num = num * static_cast<std::uint64_t>(n + i) / static_cast<std::uint64_t>(i);
    return num;
}

// Converts a step like 0.25 into the lattice refinement n = 1/step,
// rejecting steps that are not of the form 1/n.
inline int lattice_refinement(double step)
{
    if (!(step > 0.0 && step <= 0.5))
        throw std::invalid_argument("lattice step must be in (0, 0.5]");
    int n = static_cast<int>(std::lround(1.0 / step));
    if (n < 2 || std::abs(n * step - 1.0) > 1e-9)
        throw std::invalid_argument("lattice step must equal 1/n for integer n >= 2");
    return n;
}

} // namespace adpqis
