#include "amptree/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amptree/errors.hpp"

namespace amptree {

std::size_t LearnedTree::t1_blocks() const {
    std::size_t c = 0;
    for (const auto& level : levels)
        for (const auto& item : level) c += item.block == Block::T1;
    return c;
}

void LearnedTree::validate() const {
    if (n == 0) throw InputShapeError("learned tree has zero input arity");
    std::size_t prev = n;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].empty()) throw InputShapeError("learned tree level " + std::to_string(j + 1) + " is empty");
        for (const auto& item : levels[j])
            for (auto leaf : item.leaves)
                if (leaf >= prev)
                    throw InputShapeError("leaf reference " + std::to_string(leaf) + " out of range at level " +
                                          std::to_string(j + 1));
        prev = levels[j].size();
    }
}

LearnedTree learn_threshold(std::size_t levels, std::size_t width, const std::vector<std::uint8_t>& x,
                            std::uint64_t seed) {
    if (x.empty()) throw InputShapeError("training example is empty");
    if (levels == 0 || width == 0) throw InputShapeError("learning needs at least one level of positive width");
    LearnedTree tree;
    tree.n = x.size();
    tree.seed = seed;
    tree.example_ones = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](auto b) { return b != 0; }));
    tree.levels.resize(levels);
    std::uniform_int_distribution<std::size_t> pick_example(0, x.size() - 1);
    std::size_t prev = x.size();
    for (std::size_t j = 0; j < levels; ++j) {
        Rng rng = make_rng(seed, 0, j + 1);
        std::uniform_int_distribution<std::uint32_t> pick_leaf(0, static_cast<std::uint32_t>(prev - 1));
        auto& level = tree.levels[j];
        level.resize(width);
        for (auto& item : level) {
            item.block = x[pick_example(rng)] ? Block::T1 : Block::T2;
            for (auto& leaf : item.leaves) leaf = pick_leaf(rng);
        }
        prev = width;
    }
    return tree;
}

namespace {

void check_arity(const LearnedTree& tree, const std::vector<std::uint8_t>& input) {
    if (input.size() != tree.n)
        throw InputShapeError("input has " + std::to_string(input.size()) + " bits, learned tree expects " +
                              std::to_string(tree.n));
}

void step(const std::vector<LearnedItem>& level, const std::vector<std::uint8_t>& prev, std::vector<std::uint8_t>& cur) {
    cur.resize(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
        const auto& it = level[i];
        std::uint8_t a = prev[it.leaves[0]], b = prev[it.leaves[1]], c = prev[it.leaves[2]];
        cur[i] = it.block == Block::T1 ? ((a | b) & c) : ((a & b) | c);
    }
}

double fraction(const std::vector<std::uint8_t>& bits) {
    if (bits.empty()) return 0.0;
    return static_cast<double>(std::accumulate(bits.begin(), bits.end(), std::size_t{0})) /
           static_cast<double>(bits.size());
}

} // namespace

std::vector<std::uint8_t> learned_outputs(const LearnedTree& tree, const std::vector<std::uint8_t>& input) {
    check_arity(tree, input);
    std::vector<std::uint8_t> prev(input.begin(), input.end()), cur;
    for (auto& b : prev) b = b ? 1 : 0;
    for (const auto& level : tree.levels) {
        step(level, prev, cur);
        prev.swap(cur);
    }
    return prev;
}

std::vector<double> learned_trace(const LearnedTree& tree, const std::vector<std::uint8_t>& input) {
    check_arity(tree, input);
    std::vector<std::uint8_t> prev(input.begin(), input.end()), cur;
    for (auto& b : prev) b = b ? 1 : 0;
    std::vector<double> out{fraction(prev)};
    for (const auto& level : tree.levels) {
        step(level, prev, cur);
        prev.swap(cur);
        out.push_back(fraction(prev));
    }
    return out;
}

double evaluate_learned(const LearnedTree& tree, const std::vector<std::uint8_t>& input, std::size_t sample) {
    auto top = learned_outputs(tree, input);
    if (sample == 0 || sample > top.size()) sample = top.size();
    std::size_t fired = 0;
    for (std::size_t i = 0; i < sample; ++i) fired += top[i];
    return static_cast<double>(fired) / static_cast<double>(sample);
}

std::vector<std::uint8_t> random_input(std::size_t n, double fraction, Rng& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw RangeError("input fraction must lie in [0, 1]");
    auto ones = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
    std::vector<std::uint8_t> bits(n, 0);
    std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(ones), 1);
    std::shuffle(bits.begin(), bits.end(), rng);
    return bits;
}

} // namespace amptree
