#include "amptree/sampler.hpp"

#include <algorithm>

namespace amptree {

TreeSampler::TreeSampler(const TreeDistribution& dist) {
    double acc = 0.0;
    for (const auto& e : dist.entries()) {
        if (e.tree.leaf_count() > kMaxLeaves)
            throw CapacityError("tree with " + std::to_string(e.tree.leaf_count()) +
                                " leaves is too large to simulate item by item");
        std::vector<std::uint8_t> ops;
        auto rec = [&](auto&& self, const AndOrTree& t) -> void {
            if (t.is_leaf()) {
                ops.push_back(kLeaf);
                return;
            }
            self(self, t.left());
            self(self, t.right());
            ops.push_back(t.gate() == Gate::And ? kAnd : kOr);
        };
        rec(rec, e.tree);
        programs_.push_back(std::move(ops));
        acc += e.weight;
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

std::size_t TreeSampler::pick(Rng& rng) const {
    if (cumulative_.size() == 1) return 0;
    double u = uniform01(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
}

} // namespace amptree
