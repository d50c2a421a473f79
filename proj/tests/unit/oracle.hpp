#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "amptree/tree.hpp"

// Independent reference computations used across the unit suites.
namespace oracle {

// Pr[tree outputs 1] by summing over all 2^n leaf assignments.
inline double brute_force(const amptree::AndOrTree& tree, double p) {
    const auto n = static_cast<int>(tree.leaf_count());
    std::vector<std::uint8_t> bits(n);
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int ones = 0;
        for (int i = 0; i < n; ++i) {
            bits[i] = (mask >> i) & 1u;
            ones += bits[i];
        }
        if (amptree::eval_tree(tree, bits)) total += std::pow(p, ones) * std::pow(1.0 - p, n - ones);
    }
    return total;
}

inline double catalan(int n) {
    double c = 1.0;
    for (int i = 0; i < n; ++i) c = c * 2.0 * (2.0 * i + 1.0) / (i + 2.0);
    return c;
}

} // namespace oracle
