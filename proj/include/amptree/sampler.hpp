#pragma once

#include <cstdint>
#include <vector>

#include "amptree/catalog.hpp"
#include "amptree/rng.hpp"

namespace amptree {

// Trees of a distribution flattened to postfix form for evaluation on
// sampled leaf bits, plus the cumulative weights for drawing a tree.
class TreeSampler {
public:
    static constexpr std::uint64_t kMaxLeaves = 1u << 16;

    explicit TreeSampler(const TreeDistribution& dist);

    std::size_t pick(Rng& rng) const;

    // Evaluates tree `idx`, drawing each leaf bit from leaf().
    template <class LeafFn>
    bool eval(std::size_t idx, LeafFn&& leaf) const {
        const auto& ops = programs_[idx];
        if (ops.size() == 1) return leaf();
        thread_local std::vector<std::uint8_t> stack_;
        stack_.clear();
        for (std::uint8_t op : ops) {
            if (op == kLeaf) {
                stack_.push_back(leaf() ? 1 : 0);
                continue;
            }
            std::uint8_t r = stack_.back();
            stack_.pop_back();
            std::uint8_t& l = stack_.back();
            l = op == kAnd ? (l & r) : (l | r);
        }
        return stack_.back() != 0;
    }

    std::size_t size() const { return programs_.size(); }

private:
    static constexpr std::uint8_t kLeaf = 0, kAnd = 1, kOr = 2;
    std::vector<std::vector<std::uint8_t>> programs_;
    std::vector<double> cumulative_;
};

} // namespace amptree
