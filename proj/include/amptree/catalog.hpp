#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amptree/polynomial.hpp"
#include "amptree/tree.hpp"

namespace amptree {

struct WeightedTree {
    AndOrTree tree;
    double weight;
};

// Finite weighted set of trees. The expanded mixture polynomial is kept only
// when every tree is small enough for exact extraction; value() and slope()
// always go through the tree DAGs.
class TreeDistribution {
public:
    TreeDistribution(std::string label, std::vector<WeightedTree> entries);

    const std::string& label() const { return label_; }
    const std::vector<WeightedTree>& entries() const { return entries_; }
    const std::optional<Polynomial>& mixture() const { return mixture_; }

    double value(double p) const;
    double slope(double p) const;
    std::pair<double, double> value_and_slope(double p) const;

    TreeDistribution complement() const;
    std::uint64_t max_leaves() const;

private:
    std::string label_;
    std::vector<WeightedTree> entries_;
    std::optional<Polynomial> mixture_;
    std::vector<std::shared_ptr<const TreeProgram>> programs_;
};

inline constexpr double kGoldenConjugate = 0.6180339887498949;  // phi - 1
inline constexpr double kValiantThreshold = 0.3819660112501051;  // 2 - phi
inline constexpr std::uint64_t kDefaultLeafCap = 1'000'000;

TreeDistribution valiant();
TreeDistribution linear_threshold(double t);
AndOrTree linear_block_t1();  // (A or B) and C
AndOrTree linear_block_t2();  // (A and B) or C

// Two-tree mixtures solved linearly at t.
struct PairMixture {
    AndOrTree first;   // carries weight alpha
    AndOrTree second;  // carries weight 1 - alpha
    double alpha;
};

// alpha with alpha*f1(t) + (1-alpha)*f2(t) = t.
double solve_alpha(const AndOrTree& first, const AndOrTree& second, double t);

// The n-leaf analogues of the 4-leaf pair: (OR_a and OR_b) and (AND_a or AND_b)
// with a = ceil(n/2), b = floor(n/2).
AndOrTree balanced_or_and(int leaves);
AndOrTree balanced_and_or(int leaves);

struct AdmissibleRange {
    double lo;
    double hi;
};
// Range of t where the weight of the n-leaf mixture lies in [0, 1].
AdmissibleRange quad_range(int leaves);

TreeDistribution quad4(double t);
TreeDistribution quad5(double t);
TreeDistribution quad6(double t);
TreeDistribution quad7(double t);

enum class QuadFamily { A, B, Middle };

struct QuadKPlan {
    QuadFamily family;
    int k;         // mixes family_k and family_{k+1}
    double alpha;  // weight of the k tree
};

QuadKPlan quad_k_plan(double t);
TreeDistribution quad_k(double t);

// Fixed point of A_k or B_k by bisection.
double ak_fixed_point(int k);
double bk_fixed_point(int k);

TreeDistribution one_step(double alpha);
TreeDistribution soft_threshold(int k);

struct AmplifiedTree {
    AndOrTree tree;
    int k;
    double low;   // f^(k)(t - eps)
    double high;  // f^(k)(t + eps)
};

// Smallest k with f^(k) < delta on [0, t-eps] and > 1-delta on [t+eps, 1].
// Throws CapacityError when base_leaves^k would exceed leaf_cap.
AmplifiedTree amplifier(const AndOrTree& tree, double t_anchor, double delta, double epsilon,
                        std::uint64_t leaf_cap = kDefaultLeafCap);

struct DenseResult {
    AndOrTree tree;
    double fixed_point;
    int steps;  // upward composition steps after the anchor
};

// Small trees (up to 7 leaves) with a unique interior fixed point, sorted by it.
struct Anchor {
    AndOrTree tree;
    double fixed_point;
};
const std::vector<Anchor>& anchor_trees();

double interior_fixed_point(const AndOrTree& tree);

DenseResult dense_fixed_point(double target, double epsilon, std::uint64_t leaf_cap = kDefaultLeafCap);

struct StaircaseSpec {
    std::vector<double> breakpoints;  // a_1 < ... < a_k
    std::vector<double> heights;      // p_1 < ... < p_{k-1}
    double epsilon;
    double delta;
};

void validate(const StaircaseSpec& spec);
TreeDistribution staircase(const StaircaseSpec& spec, std::uint64_t leaf_cap = kDefaultLeafCap);

} // namespace amptree
