#include "amptree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <unordered_map>

#include "amptree/errors.hpp"

namespace amptree {

struct AndOrTree::Node {
    Gate gate = Gate::Leaf;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::uint64_t leaves = 1;
    std::uint32_t depth = 0;
};

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw CapacityError("polynomial coefficient overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("polynomial coefficient overflow");
    return r;
}

void trim(std::vector<std::int64_t>& c) {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
}

const std::shared_ptr<const AndOrTree::Node>& leaf_node() {
    static const auto node = std::make_shared<const AndOrTree::Node>();
    return node;
}

} // namespace

AndOrTree::AndOrTree() : node_(leaf_node()) {}

AndOrTree AndOrTree::make(Gate gate, const AndOrTree& left, const AndOrTree& right) {
    if (gate == Gate::Leaf) throw InputShapeError("internal node needs an AND or OR gate");
    auto n = std::make_shared<Node>();
    n->gate = gate;
    n->left = left.node_;
    n->right = right.node_;
    n->leaves = saturating_add(left.node_->leaves, right.node_->leaves);
    n->depth = 1 + std::max(left.node_->depth, right.node_->depth);
    return AndOrTree(std::move(n));
}

Gate AndOrTree::gate() const { return node_->gate; }

AndOrTree AndOrTree::left() const {
    if (is_leaf()) throw InputShapeError("leaf has no children");
    return AndOrTree(node_->left);
}

AndOrTree AndOrTree::right() const {
    if (is_leaf()) throw InputShapeError("leaf has no children");
    return AndOrTree(node_->right);
}

std::uint64_t AndOrTree::leaf_count() const { return node_->leaves; }
std::uint32_t AndOrTree::depth() const { return node_->depth; }

bool operator==(const AndOrTree& a, const AndOrTree& b) {
    if (a.node_ == b.node_) return true;
    if (a.gate() != b.gate() || a.leaf_count() != b.leaf_count()) return false;
    if (a.is_leaf()) return true;
    return a.left() == b.left() && a.right() == b.right();
}

int IntegerPolynomial::degree() const {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        if (coeffs[i] != 0) return i;
    return 0;
}

double IntegerPolynomial::eval(double p) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * p + static_cast<double>(*it);
    return acc;
}

IntegerPolynomial integer_identity() { return IntegerPolynomial{{0, 1}}; }

IntegerPolynomial poly_and(const IntegerPolynomial& g, const IntegerPolynomial& h) {
    std::vector<std::int64_t> r(g.coeffs.size() + h.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) {
        if (g.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < h.coeffs.size(); ++j)
            r[i + j] = checked_add(r[i + j], checked_mul(g.coeffs[i], h.coeffs[j]));
    }
    trim(r);
    return {std::move(r)};
}

IntegerPolynomial poly_or(const IntegerPolynomial& g, const IntegerPolynomial& h) {
    IntegerPolynomial prod = poly_and(g, h);
    std::vector<std::int64_t> r(std::max({g.coeffs.size(), h.coeffs.size(), prod.coeffs.size()}), 0);
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) r[i] = checked_add(r[i], g.coeffs[i]);
    for (std::size_t i = 0; i < h.coeffs.size(); ++i) r[i] = checked_add(r[i], h.coeffs[i]);
    for (std::size_t i = 0; i < prod.coeffs.size(); ++i) r[i] = checked_add(r[i], -prod.coeffs[i]);
    trim(r);
    return {std::move(r)};
}

namespace {

bool eval_rec(const AndOrTree& t, std::span<const std::uint8_t> bits, std::size_t& pos) {
    if (t.is_leaf()) return bits[pos++] != 0;
    // no short circuit: both subtrees must consume their bits
    bool l = eval_rec(t.left(), bits, pos);
    bool r = eval_rec(t.right(), bits, pos);
    return t.gate() == Gate::And ? (l && r) : (l || r);
}

} // namespace

bool eval_tree(const AndOrTree& tree, std::span<const std::uint8_t> assignment) {
    if (assignment.size() != tree.leaf_count())
        throw InputShapeError("assignment has " + std::to_string(assignment.size()) +
                              " bits, tree has " + std::to_string(tree.leaf_count()) + " leaves");
    std::size_t pos = 0;
    return eval_rec(tree, assignment, pos);
}

IntegerPolynomial tree_polynomial(const AndOrTree& tree) {
    if (tree.leaf_count() > kMaxPolynomialLeaves)
        throw CapacityError("tree with " + std::to_string(tree.leaf_count()) +
                            " leaves is too large for exact polynomial extraction");
    std::unordered_map<const void*, IntegerPolynomial> memo;
    auto rec = [&](auto&& self, const AndOrTree& t) -> IntegerPolynomial {
        if (t.is_leaf()) return integer_identity();
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        IntegerPolynomial l = self(self, t.left());
        IntegerPolynomial r = self(self, t.right());
        IntegerPolynomial out = t.gate() == Gate::And ? poly_and(l, r) : poly_or(l, r);
        memo.emplace(t.id(), out);
        return out;
    };
    return rec(rec, tree);
}

AndOrTree complement_tree(const AndOrTree& tree) {
    std::unordered_map<const void*, AndOrTree> memo;
    auto rec = [&](auto&& self, const AndOrTree& t) -> AndOrTree {
        if (t.is_leaf()) return t;
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        Gate g = t.gate() == Gate::And ? Gate::Or : Gate::And;
        AndOrTree out = AndOrTree::make(g, self(self, t.left()), self(self, t.right()));
        memo.emplace(t.id(), out);
        return out;
    };
    return rec(rec, tree);
}

namespace {

bool has_path(const AndOrTree& t, Gate g, std::unordered_map<const void*, bool>& memo) {
    if (t.is_leaf()) return true;
    if (t.gate() != g) return false;
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    bool r = has_path(t.left(), g, memo) || has_path(t.right(), g, memo);
    memo.emplace(t.id(), r);
    return r;
}

AndOrTree cascade(Gate g, int k) {
    if (k < 1) throw RangeError("cascade needs at least one leaf");
    if (k == 1) return AndOrTree::leaf();
    int half = k / 2;
    return AndOrTree::make(g, cascade(g, k - half), cascade(g, half));
}

} // namespace

bool has_and_path(const AndOrTree& tree) {
    std::unordered_map<const void*, bool> memo;
    return has_path(tree, Gate::And, memo);
}

bool has_or_path(const AndOrTree& tree) {
    std::unordered_map<const void*, bool> memo;
    return has_path(tree, Gate::Or, memo);
}

AndOrTree or_cascade(int k) { return cascade(Gate::Or, k); }
AndOrTree and_cascade(int k) { return cascade(Gate::And, k); }

AndOrTree build_ak(int k) {
    if (k < 1) throw RangeError("A_k needs k >= 1");
    auto half = or_cascade(k);
    return AndOrTree::conj(half, half);
}

AndOrTree build_bk(int k) {
    if (k < 1) throw RangeError("B_k needs k >= 1");
    auto half = and_cascade(k);
    return AndOrTree::disj(half, half);
}

AndOrTree substitute(const AndOrTree& outer, const AndOrTree& inner) {
    std::unordered_map<const void*, AndOrTree> memo;
    auto rec = [&](auto&& self, const AndOrTree& t) -> AndOrTree {
        if (t.is_leaf()) return inner;
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        AndOrTree out = AndOrTree::make(t.gate(), self(self, t.left()), self(self, t.right()));
        memo.emplace(t.id(), out);
        return out;
    };
    return rec(rec, outer);
}

AndOrTree power(const AndOrTree& tree, int k) {
    if (k < 1) throw RangeError("power needs k >= 1");
    AndOrTree out = tree;
    for (int i = 1; i < k; ++i) out = substitute(tree, out);
    return out;
}

std::string to_sexpr(const AndOrTree& tree) {
    constexpr std::uint64_t kMaxPrintLeaves = 1u << 22;
    if (tree.leaf_count() > kMaxPrintLeaves)
        throw CapacityError("tree with " + std::to_string(tree.leaf_count()) + " leaves is too large to print");
    std::string out;
    auto rec = [&](auto&& self, const AndOrTree& t) -> void {
        if (t.is_leaf()) {
            out += 'x';
            return;
        }
        out += t.gate() == Gate::And ? "(AND " : "(OR ";
        self(self, t.left());
        out += ' ';
        self(self, t.right());
        out += ')';
    };
    rec(rec, tree);
    return out;
}

namespace {

class SexprParser {
public:
    explicit SexprParser(std::string_view s) : s_(s) {}

    AndOrTree parse_all() {
        AndOrTree t = parse();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return t;
    }

private:
    bool keyword(std::string_view word) const {
        if (s_.size() - pos_ < word.size()) return false;
        for (std::size_t i = 0; i < word.size(); ++i)
            if (std::toupper(static_cast<unsigned char>(s_[pos_ + i])) != word[i]) return false;
        return true;
    }

    AndOrTree parse() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (s_[pos_] == 'x') {
            ++pos_;
            return AndOrTree::leaf();
        }
        if (s_[pos_] != '(') fail("expected 'x' or '('");
        ++pos_;
        skip_ws();
        Gate g;
        if (keyword("AND")) {
            g = Gate::And;
            pos_ += 3;
        } else if (keyword("OR")) {
            g = Gate::Or;
            pos_ += 2;
        } else {
            fail("expected AND or OR");
        }
        AndOrTree l = parse();
        AndOrTree r = parse();
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
        ++pos_;
        return AndOrTree::make(g, l, r);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const char* what) const {
        throw InputShapeError(std::string("s-expression: ") + what + " at offset " + std::to_string(pos_));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

AndOrTree parse_sexpr(std::string_view text) { return SexprParser(text).parse_all(); }

std::vector<AchievableEntry> enumerate_achievable(int max_degree) {
    if (max_degree < 1) throw RangeError("max_degree must be positive");
    if (max_degree > kMaxEnumerationDegree)
        throw CapacityError("enumeration is capped at degree " + std::to_string(kMaxEnumerationDegree));
    // by_leaves[d]: distinct polynomials of trees on d leaves (degree d)
    std::vector<std::map<IntegerPolynomial, AndOrTree>> by_leaves(max_degree + 1);
    by_leaves[1].emplace(integer_identity(), AndOrTree::leaf());
    for (int d = 2; d <= max_degree; ++d) {
        for (int k = 1; k <= d / 2; ++k) {
            for (const auto& [pa, ta] : by_leaves[k]) {
                for (const auto& [pb, tb] : by_leaves[d - k]) {
                    by_leaves[d].try_emplace(poly_and(pa, pb), AndOrTree::conj(ta, tb));
                    by_leaves[d].try_emplace(poly_or(pa, pb), AndOrTree::disj(ta, tb));
                }
            }
        }
    }
    std::vector<AchievableEntry> out;
    for (int d = 1; d <= max_degree; ++d)
        for (const auto& [p, t] : by_leaves[d]) out.push_back({p, t});
    return out;
}

std::vector<AndOrTree> enumerate_trees(int leaves) {
    if (leaves < 1) throw RangeError("tree needs at least one leaf");
    if (leaves > 8) throw CapacityError("tree shape enumeration is capped at 8 leaves");
    std::vector<std::vector<AndOrTree>> all(leaves + 1);
    all[1].push_back(AndOrTree::leaf());
    for (int d = 2; d <= leaves; ++d)
        for (int k = 1; k < d; ++k)
            for (const auto& a : all[k])
                for (const auto& b : all[d - k]) {
                    all[d].push_back(AndOrTree::conj(a, b));
                    all[d].push_back(AndOrTree::disj(a, b));
                }
    return all[leaves];
}

TreeProgram::TreeProgram(const AndOrTree& tree) {
    std::unordered_map<const void*, std::uint32_t> index;
    auto rec = [&](auto&& self, const AndOrTree& t) -> std::uint32_t {
        if (auto it = index.find(t.id()); it != index.end()) return it->second;
        Op op{t.gate(), 0, 0};
        if (!t.is_leaf()) {
            op.left = self(self, t.left());
            op.right = self(self, t.right());
        }
        auto id = static_cast<std::uint32_t>(ops_.size());
        ops_.push_back(op);
        index.emplace(t.id(), id);
        return id;
    };
    rec(rec, tree);
}

double TreeProgram::value(double p) const {
    thread_local std::vector<double> v;
    v.resize(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const Op& op = ops_[i];
        switch (op.gate) {
        case Gate::Leaf: v[i] = p; break;
        case Gate::And: v[i] = v[op.left] * v[op.right]; break;
        case Gate::Or: {
            double a = v[op.left], b = v[op.right];
            v[i] = a + b - a * b;
            break;
        }
        }
    }
    return v.back();
}

std::pair<double, double> TreeProgram::value_and_slope(double p) const {
    thread_local std::vector<double> v, d;
    v.resize(ops_.size());
    d.resize(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const Op& op = ops_[i];
        switch (op.gate) {
        case Gate::Leaf:
            v[i] = p;
            d[i] = 1.0;
            break;
        case Gate::And:
            v[i] = v[op.left] * v[op.right];
            d[i] = d[op.left] * v[op.right] + v[op.left] * d[op.right];
            break;
        case Gate::Or: {
            double a = v[op.left], b = v[op.right];
            v[i] = a + b - a * b;
            d[i] = d[op.left] * (1.0 - b) + d[op.right] * (1.0 - a);
            break;
        }
        }
    }
    return {v.back(), d.back()};
}

double TreeProgram::slope(double p) const { return value_and_slope(p).second; }

double tree_probability(const AndOrTree& tree, double p) { return TreeProgram(tree).value(p); }

} // namespace amptree
