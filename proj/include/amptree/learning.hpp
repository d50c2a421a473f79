#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "amptree/rng.hpp"

namespace amptree {

enum class Block : std::uint8_t {
    T1,  // (A or B) and C
    T2,  // (A and B) or C
};

struct LearnedItem {
    Block block;
    std::array<std::uint32_t, 3> leaves;  // indices into the previous level
};

struct LearnedTree {
    std::size_t n = 0;  // input arity
    std::vector<std::vector<LearnedItem>> levels;
    std::uint64_t seed = 0;
    std::size_t example_ones = 0;  // |X|_1 of the training example

    std::size_t width(std::size_t level) const { return levels[level].size(); }
    std::size_t t1_blocks() const;
    void validate() const;
};

// Each item picks a random input index i of X, takes T1 if X_i = 1 and T2
// otherwise, then wires its three leaves to uniformly random items of the
// previous level (inputs for level 1), with replacement. Level j draws from
// make_rng(seed, 0, j).
LearnedTree learn_threshold(std::size_t levels, std::size_t width, const std::vector<std::uint8_t>& x,
                            std::uint64_t seed);

// Firing fractions of every level, index 0 being the input.
std::vector<double> learned_trace(const LearnedTree& tree, const std::vector<std::uint8_t>& input);

// Fraction of the first `sample` top-level items that fire; 0 means all.
double evaluate_learned(const LearnedTree& tree, const std::vector<std::uint8_t>& input, std::size_t sample = 0);

// Bits of every item of the top level.
std::vector<std::uint8_t> learned_outputs(const LearnedTree& tree, const std::vector<std::uint8_t>& input);

// n bits with round(n * fraction) ones at uniformly random positions.
std::vector<std::uint8_t> random_input(std::size_t n, double fraction, Rng& rng);

} // namespace amptree
