#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amptree {

enum class Gate : std::uint8_t { Leaf, And, Or };

// Immutable binary AND/OR tree. Subtrees are shared, so composed trees with
// astronomically many leaves stay small in memory; leaf_count saturates at
// UINT64_MAX.
class AndOrTree {
public:
    AndOrTree();  // single leaf

    static AndOrTree leaf() { return AndOrTree(); }
    static AndOrTree make(Gate gate, const AndOrTree& left, const AndOrTree& right);
    static AndOrTree conj(const AndOrTree& left, const AndOrTree& right) {
        return make(Gate::And, left, right);
    }
    static AndOrTree disj(const AndOrTree& left, const AndOrTree& right) {
        return make(Gate::Or, left, right);
    }

    Gate gate() const;
    bool is_leaf() const { return gate() == Gate::Leaf; }
    AndOrTree left() const;
    AndOrTree right() const;
    std::uint64_t leaf_count() const;
    std::uint32_t depth() const;

    // Identity of the underlying node, stable for the tree's lifetime.
    const void* id() const { return node_.get(); }

    friend bool operator==(const AndOrTree& a, const AndOrTree& b);

    struct Node;  // opaque

private:
    explicit AndOrTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Exact integer coefficients, index i holds the coefficient of p^i.
struct IntegerPolynomial {
    std::vector<std::int64_t> coeffs;

    int degree() const;
    double eval(double p) const;

    friend bool operator==(const IntegerPolynomial&, const IntegerPolynomial&) = default;
    friend auto operator<=>(const IntegerPolynomial& a, const IntegerPolynomial& b) {
        return a.coeffs <=> b.coeffs;
    }
};

IntegerPolynomial integer_identity();
IntegerPolynomial poly_and(const IntegerPolynomial& g, const IntegerPolynomial& h);
IntegerPolynomial poly_or(const IntegerPolynomial& g, const IntegerPolynomial& h);

// Leaves consume bits left to right.
bool eval_tree(const AndOrTree& tree, std::span<const std::uint8_t> assignment);

// Throws CapacityError on coefficient overflow or more than kMaxPolynomialLeaves leaves.
inline constexpr std::uint64_t kMaxPolynomialLeaves = 512;
IntegerPolynomial tree_polynomial(const AndOrTree& tree);

AndOrTree complement_tree(const AndOrTree& tree);
bool has_and_path(const AndOrTree& tree);
bool has_or_path(const AndOrTree& tree);

// Cascades of binary gates.
AndOrTree or_cascade(int k);
AndOrTree and_cascade(int k);
AndOrTree build_ak(int k);
AndOrTree build_bk(int k);

// Replace every leaf of outer with inner.
AndOrTree substitute(const AndOrTree& outer, const AndOrTree& inner);
// k-fold self composition; power(t, 1) == t.
AndOrTree power(const AndOrTree& tree, int k);

std::string to_sexpr(const AndOrTree& tree);
AndOrTree parse_sexpr(std::string_view text);

struct AchievableEntry {
    IntegerPolynomial poly;
    AndOrTree witness;  // arbitrary, not canonical
};

inline constexpr int kMaxEnumerationDegree = 7;

// All distinct achievable polynomials of degree 1..max_degree, ordered by
// degree then coefficients.
std::vector<AchievableEntry> enumerate_achievable(int max_degree);

// Every labelled tree shape with exactly `leaves` leaves (no dedup).
std::vector<AndOrTree> enumerate_trees(int leaves);

// Flattened DAG for fast float evaluation of f_T(p) and f_T'(p).
class TreeProgram {
public:
    explicit TreeProgram(const AndOrTree& tree);

    double value(double p) const;
    double slope(double p) const;
    // value and derivative in one pass
    std::pair<double, double> value_and_slope(double p) const;
    std::size_t node_count() const { return ops_.size(); }

private:
    struct Op {
        Gate gate;
        std::uint32_t left;
        std::uint32_t right;
    };
    std::vector<Op> ops_;
};

double tree_probability(const AndOrTree& tree, double p);

} // namespace amptree
