#include "amptree/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace amptree {

namespace {

constexpr std::uint64_t kMixtureLeafLimit = 64;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::uint64_t saturating_pow(std::uint64_t base, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = saturating_mul(r, base);
    return r;
}

// Minimum leaves for a quadratically convergent t-threshold: t > 1/(2d^2).
int min_leaves_for(double t) {
    double s = std::min(t, 1.0 - t);
    if (s <= 0.0) return std::numeric_limits<int>::max();
    return static_cast<int>(std::floor(1.0 / std::sqrt(2.0 * s))) + 1;
}

double bisect_fixed_point(const std::function<double(double)>& f, double lo, double hi) {
    double hlo = f(lo) - lo;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        double hm = f(mid) - mid;
        if (hm == 0.0) return mid;
        if ((hm < 0) == (hlo < 0)) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct ProgramMap {
    const TreeProgram* program;
    double value(double p) const { return program->value(p); }
    double slope(double p) const { return program->slope(p); }
};

} // namespace

TreeDistribution::TreeDistribution(std::string label, std::vector<WeightedTree> entries)
    : label_(std::move(label)), entries_(std::move(entries)) {
    if (entries_.empty()) throw WeightError("distribution has no trees");
    std::vector<double> w;
    for (const auto& e : entries_) w.push_back(e.weight);
    check_weights(w);
    for (const auto& e : entries_) programs_.push_back(std::make_shared<const TreeProgram>(e.tree));
    if (max_leaves() <= kMixtureLeafLimit) {
        try {
            std::vector<Polynomial> polys;
            for (const auto& e : entries_) polys.push_back(Polynomial::from_integer(tree_polynomial(e.tree)));
            mixture_ = mix(w, polys);
        } catch (const CapacityError&) {
            mixture_.reset();
        }
    }
}

double TreeDistribution::value(double p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) acc += entries_[i].weight * programs_[i]->value(p);
    return acc;
}

double TreeDistribution::slope(double p) const { return value_and_slope(p).second; }

std::pair<double, double> TreeDistribution::value_and_slope(double p) const {
    double v = 0.0, d = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto [a, b] = programs_[i]->value_and_slope(p);
        v += entries_[i].weight * a;
        d += entries_[i].weight * b;
    }
    return {v, d};
}

TreeDistribution TreeDistribution::complement() const {
    std::vector<WeightedTree> out;
    for (const auto& e : entries_) out.push_back({complement_tree(e.tree), e.weight});
    return TreeDistribution("complement of " + label_, std::move(out));
}

std::uint64_t TreeDistribution::max_leaves() const {
    std::uint64_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.tree.leaf_count());
    return m;
}

TreeDistribution valiant() { return TreeDistribution("valiant", {{build_ak(2), 1.0}}); }

AndOrTree linear_block_t1() {
    return AndOrTree::conj(AndOrTree::disj(AndOrTree::leaf(), AndOrTree::leaf()), AndOrTree::leaf());
}

AndOrTree linear_block_t2() {
    return AndOrTree::disj(AndOrTree::conj(AndOrTree::leaf(), AndOrTree::leaf()), AndOrTree::leaf());
}

TreeDistribution linear_threshold(double t) {
    if (!(t > 0.0 && t < 1.0)) throw RangeError("linear_threshold needs 0 < t < 1, got " + fmt(t));
    return TreeDistribution("linear_threshold(t=" + fmt(t) + ")",
                            {{linear_block_t1(), t}, {linear_block_t2(), 1.0 - t}});
}

double solve_alpha(const AndOrTree& first, const AndOrTree& second, double t) {
    TreeProgram a(first), b(second);
    double fa = a.value(t), fb = b.value(t);
    if (fa == fb) throw DegenerateInputError("both trees agree at t=" + fmt(t));
    return (t - fb) / (fa - fb);
}

AndOrTree balanced_or_and(int leaves) {
    if (leaves < 2) throw RangeError("need at least two leaves");
    return AndOrTree::conj(or_cascade((leaves + 1) / 2), or_cascade(leaves / 2));
}

AndOrTree balanced_and_or(int leaves) {
    if (leaves < 2) throw RangeError("need at least two leaves");
    return AndOrTree::disj(and_cascade((leaves + 1) / 2), and_cascade(leaves / 2));
}

AdmissibleRange quad_range(int leaves) {
    if (leaves < 4) throw RangeError("quadratic pair constructions need at least four leaves");
    return {interior_fixed_point(balanced_or_and(leaves)), interior_fixed_point(balanced_and_or(leaves))};
}

namespace {

constexpr double kRangeSlack = 1e-12;

TreeDistribution pair_distribution(const std::string& name, int leaves, bool alpha_on_or_and, double t) {
    if (!(t > 0.0 && t < 1.0)) throw RangeError(name + " needs 0 < t < 1, got " + fmt(t));
    AndOrTree oa = balanced_or_and(leaves), ao = balanced_and_or(leaves);
    const AndOrTree& first = alpha_on_or_and ? oa : ao;
    const AndOrTree& second = alpha_on_or_and ? ao : oa;
    double alpha = solve_alpha(first, second, t);
    if (alpha < -kRangeSlack || alpha > 1.0 + kRangeSlack) {
        AdmissibleRange r = quad_range(leaves);
        std::string pair = "none of quad4..quad7 covers it";
        for (int n = 5; n <= 7; ++n) {
            AdmissibleRange rn = quad_range(n);
            if (t >= rn.lo && t <= rn.hi) {
                pair = "quad" + std::to_string(n) + " covers it";
                break;
            }
        }
        throw UnsupportedThresholdError(name + ": t=" + fmt(t) + " is outside [" + fmt(r.lo) + ", " + fmt(r.hi) +
                                        "]; a quadratically convergent construction for this t needs trees with "
                                        "at least " + std::to_string(min_leaves_for(t)) + " leaves, " + pair +
                                        " (try quad_k)");
    }
    alpha = std::clamp(alpha, 0.0, 1.0);
    std::vector<WeightedTree> e;
    if (alpha > 0.0) e.push_back({first, alpha});
    if (alpha < 1.0) e.push_back({second, 1.0 - alpha});
    return TreeDistribution(name + "(t=" + fmt(t) + ")", std::move(e));
}

} // namespace

TreeDistribution quad4(double t) {
    if (t >= kValiantThreshold - kRangeSlack && t <= kValiantThreshold) t = kValiantThreshold;
    if (t <= kGoldenConjugate + kRangeSlack && t >= kGoldenConjugate) t = kGoldenConjugate;
    return pair_distribution("quad4", 4, true, t);
}

TreeDistribution quad5(double t) { return pair_distribution("quad5", 5, false, t); }
TreeDistribution quad6(double t) { return pair_distribution("quad6", 6, true, t); }
TreeDistribution quad7(double t) { return pair_distribution("quad7", 7, true, t); }

double bk_fixed_point(int k) {
    if (k < 2) throw RangeError("B_k has an interior fixed point only for k >= 2");
    if (k == 2) return kGoldenConjugate;
    auto f = [k](double p) { return 2.0 * std::pow(p, k) - std::pow(p, 2 * k); };
    return bisect_fixed_point(f, 0.5, 1.0 - 1e-15);
}

double ak_fixed_point(int k) {
    if (k < 2) throw RangeError("A_k has an interior fixed point only for k >= 2");
    if (k == 2) return kValiantThreshold;
    return 1.0 - bk_fixed_point(k);
}

QuadKPlan quad_k_plan(double t) {
    if (!(t > 0.0 && t < 1.0)) throw RangeError("quad_k needs 0 < t < 1, got " + fmt(t));
    if (t > kValiantThreshold && t < kGoldenConjugate)
        return {QuadFamily::Middle, 2, std::clamp(solve_alpha(build_ak(2), build_bk(2), t), 0.0, 1.0)};
    bool a_family = t <= kValiantThreshold;
    double s = a_family ? 1.0 - t : t;  // work in the B family
    constexpr int kMaxK = 4096;
    int k = 2;
    while (bk_fixed_point(k + 1) <= s) {
        if (++k > kMaxK) throw CapacityError("quad_k: t=" + fmt(t) + " needs k beyond " + std::to_string(kMaxK));
    }
    double alpha = solve_alpha(build_bk(k), build_bk(k + 1), s);
    alpha = std::clamp(alpha, 0.0, 1.0);
    return {a_family ? QuadFamily::A : QuadFamily::B, k, alpha};
}

TreeDistribution quad_k(double t) {
    QuadKPlan plan = quad_k_plan(t);
    if (plan.family == QuadFamily::Middle) return quad4(t);
    auto build = plan.family == QuadFamily::A ? build_ak : build_bk;
    std::string fam = plan.family == QuadFamily::A ? "A" : "B";
    std::vector<WeightedTree> e;
    if (plan.alpha > 0.0) e.push_back({build(plan.k), plan.alpha});
    if (plan.alpha < 1.0) e.push_back({build(plan.k + 1), 1.0 - plan.alpha});
    return TreeDistribution("quad_k(t=" + fmt(t) + ", " + fam + "_" + std::to_string(plan.k) + "/" + fam + "_" +
                                std::to_string(plan.k + 1) + ")",
                            std::move(e));
}

TreeDistribution one_step(double alpha) {
    if (!(alpha > 1.0 / 3.0 && alpha < 2.0 / 3.0))
        throw RangeError("one_step needs 1/3 < alpha < 2/3 for an interior fixed point, got " + fmt(alpha));
    // the OR tree carries alpha: alpha(1-(1-p)^3) + (1-alpha)p^3 has fixed point 3alpha-1
    return TreeDistribution("one_step(alpha=" + fmt(alpha) + ")",
                            {{or_cascade(3), alpha}, {and_cascade(3), 1.0 - alpha}});
}

TreeDistribution soft_threshold(int k) {
    if (k < 4) throw RangeError("soft_threshold needs k >= 4 so that 1/2 is attractive");
    return TreeDistribution("soft_threshold(k=" + std::to_string(k) + ")", {{build_ak(k), 0.5}, {build_bk(k), 0.5}});
}

AmplifiedTree amplifier(const AndOrTree& tree, double t_anchor, double delta, double epsilon,
                        std::uint64_t leaf_cap) {
    if (!(delta > 0.0 && delta < 1.0)) throw RangeError("delta must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw RangeError("epsilon must be positive");
    TreeProgram prog(tree);
    const bool low_empty = t_anchor - epsilon < 0.0;
    const bool high_empty = t_anchor + epsilon > 1.0;
    double lo = std::max(0.0, t_anchor - epsilon);
    double hi = std::min(1.0, t_anchor + epsilon);
    constexpr int kMaxK = 4096;
    for (int k = 1; k <= kMaxK; ++k) {
        lo = prog.value(lo);
        hi = prog.value(hi);
        bool ok = (low_empty || lo < delta) && (high_empty || hi > 1.0 - delta);
        if (saturating_pow(tree.leaf_count(), k) > leaf_cap) {
            double achieved = std::max(low_empty ? 0.0 : lo, high_empty ? 0.0 : 1.0 - hi);
            throw CapacityError("amplifier: k=" + std::to_string(k) + " exceeds the leaf cap of " +
                                std::to_string(leaf_cap) + "; achieved delta " + fmt(achieved) + " at k=" +
                                std::to_string(k - 1));
        }
        if (ok) return {power(tree, k), k, lo, hi};
    }
    throw CapacityError("amplifier: no k up to " + std::to_string(kMaxK) + " reaches delta " + fmt(delta));
}

double interior_fixed_point(const AndOrTree& tree) {
    TreeProgram prog(tree);
    FixedPointReport rep = fixed_points(ProgramMap{&prog});
    auto in = rep.interior();
    if (in.size() != 1)
        throw InconsistentFixedPointError("tree " + (tree.leaf_count() <= 64 ? to_sexpr(tree) : std::string("")) +
                                          " has " + std::to_string(in.size()) + " interior fixed points");
    return in.front().location;
}

const std::vector<Anchor>& anchor_trees() {
    static const std::vector<Anchor> anchors = [] {
        std::vector<Anchor> out;
        for (const auto& e : enumerate_achievable(kMaxEnumerationDegree)) {
            if (has_and_path(e.witness) || has_or_path(e.witness)) continue;
            out.push_back({e.witness, interior_fixed_point(e.witness)});
        }
        std::sort(out.begin(), out.end(), [](const Anchor& a, const Anchor& b) {
            if (a.fixed_point != b.fixed_point) return a.fixed_point < b.fixed_point;
            return a.tree.leaf_count() < b.tree.leaf_count();
        });
        return out;
    }();
    return anchors;
}

namespace {

// Fixed point of f^(k)(g_j(x)) strictly above p and below p + eps, if any.
std::optional<double> step_fixed_point(const TreeProgram& f, int k, int j, double p, double eps) {
    auto composite = [&](double x) {
        double y = x * (1.0 - std::pow(1.0 - x, j));
        for (int i = 0; i < k; ++i) y = f.value(y);
        return y - x;
    };
    constexpr int kScan = 64;
    double prev = p;
    double hprev = composite(p);
    if (hprev >= 0.0) return std::nullopt;
    for (int i = 1; i <= kScan; ++i) {
        double x = std::min(p + eps * i / kScan, 1.0);
        double h = composite(x);
        if (h >= 0.0) {
            double lo = prev, hi = x;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                (composite(mid) < 0.0 ? lo : hi) = mid;
            }
            double root = 0.5 * (lo + hi);
            if (root > p && root < p + eps) return root;
            return std::nullopt;
        }
        prev = x;
    }
    return std::nullopt;
}

DenseResult dense_upper(double target, double epsilon, std::uint64_t leaf_cap) {
    const auto& anchors = anchor_trees();
    const Anchor* best = nullptr;
    for (const auto& a : anchors) {
        if (std::abs(a.fixed_point - target) >= epsilon) continue;
        if (!best || a.tree.leaf_count() < best->tree.leaf_count() ||
            (a.tree.leaf_count() == best->tree.leaf_count() &&
             std::abs(a.fixed_point - target) < std::abs(best->fixed_point - target)))
            best = &a;
    }
    if (best) return {best->tree, best->fixed_point, 0};

    const Anchor* start = nullptr;
    for (const auto& a : anchors)
        if (a.fixed_point < target) start = &a;
    if (!start) throw InconsistentFixedPointError("no anchor below target " + fmt(target));

    AndOrTree tree = start->tree;
    double p = start->fixed_point;
    int steps = 0;
    constexpr int kMaxJ = 1 << 16;
    while (std::abs(p - target) >= epsilon) {
        TreeProgram prog(tree);
        bool found = false;
        for (int j = 1; j <= kMaxJ && !found; j = j < 16 ? j + 1 : j * 2) {
            for (int k = 1; k <= 3; ++k) {
                auto q = step_fixed_point(prog, k, j, p, epsilon);
                if (!q) continue;
                std::uint64_t leaves = saturating_mul(saturating_pow(tree.leaf_count(), k),
                                                      static_cast<std::uint64_t>(j) + 1);
                if (leaves > leaf_cap)
                    throw CapacityError("dense_fixed_point: next step needs " + std::to_string(leaves) +
                                        " leaves (cap " + std::to_string(leaf_cap) +
                                        "); closest achieved fixed point " + fmt(p) + " for target " + fmt(target));
                AndOrTree g = AndOrTree::conj(or_cascade(j), AndOrTree::leaf());
                tree = substitute(power(tree, k), g);
                p = *q;
                found = true;
                break;
            }
        }
        if (!found)
            throw CapacityError("dense_fixed_point: no admissible step; closest achieved fixed point " + fmt(p));
        ++steps;
    }
    return {tree, p, steps};
}

} // namespace

DenseResult dense_fixed_point(double target, double epsilon, std::uint64_t leaf_cap) {
    if (!(target > 0.0 && target < 1.0)) throw RangeError("dense_fixed_point target must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw RangeError("epsilon must be positive");
    if (target >= 0.5) return dense_upper(target, epsilon, leaf_cap);
    DenseResult r = dense_upper(1.0 - target, epsilon, leaf_cap);
    return {complement_tree(r.tree), 1.0 - r.fixed_point, r.steps};
}

void validate(const StaircaseSpec& spec) {
    const auto& a = spec.breakpoints;
    const auto& p = spec.heights;
    if (a.empty()) throw InvalidStaircaseError("staircase needs at least one breakpoint");
    if (p.size() + 1 != a.size())
        throw InvalidStaircaseError("staircase with " + std::to_string(a.size()) + " breakpoints needs " +
                                    std::to_string(a.size() - 1) + " heights");
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw InvalidStaircaseError("delta must lie in (0, 1)");
    if (!(spec.epsilon > 0.0)) throw InvalidStaircaseError("epsilon must be positive");
    double prev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0 && a[i] < 1.0)) throw InvalidStaircaseError("breakpoints must lie in (0, 1)");
        if (!(spec.epsilon < a[i] - prev))
            throw InvalidStaircaseError("epsilon must be below every breakpoint gap");
        prev = a[i];
    }
    if (!(spec.epsilon < 1.0 - prev)) throw InvalidStaircaseError("epsilon must be below every breakpoint gap");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0 && p[i] < 1.0)) throw InvalidStaircaseError("heights must lie in (0, 1)");
        if (i > 0 && !(p[i] > p[i - 1])) throw InvalidStaircaseError("heights must increase");
        if (!(a[i] <= p[i] && p[i] <= a[i + 1]))
            throw InvalidStaircaseError("height p_" + std::to_string(i + 1) + "=" + fmt(p[i]) +
                                        " does not meet y=x between its breakpoints");
    }
}

TreeDistribution staircase(const StaircaseSpec& spec, std::uint64_t leaf_cap) {
    validate(spec);
    const double half = spec.epsilon / 2.0;
    std::vector<WeightedTree> entries;
    double prev_height = 0.0;
    for (std::size_t i = 0; i < spec.breakpoints.size(); ++i) {
        DenseResult d = dense_fixed_point(spec.breakpoints[i], half, leaf_cap);
        AmplifiedTree amp = amplifier(d.tree, d.fixed_point, spec.delta, half, leaf_cap);
        double height = i < spec.heights.size() ? spec.heights[i] : 1.0;
        entries.push_back({amp.tree, height - prev_height});
        prev_height = height;
    }
    std::string label = "staircase(a=";
    for (std::size_t i = 0; i < spec.breakpoints.size(); ++i) label += (i ? "," : "") + fmt(spec.breakpoints[i]);
    label += ")";
    return TreeDistribution(std::move(label), std::move(entries));
}

} // namespace amptree
