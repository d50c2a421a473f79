// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [N ...]   (no arguments runs all twelve)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "amptree/catalog.hpp"
#include "amptree/dynamics.hpp"
#include "amptree/parallel.hpp"
#include "amptree/io.hpp"
#include "amptree/learning.hpp"
#include "amptree/leveled.hpp"
#include "amptree/stream.hpp"
#include "fixtures.hpp"

using namespace amptree;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

// Achievable polynomials up to degree five, coefficients from p^0.
const std::vector<std::vector<std::int64_t>> kLowDegree = {
    {0, 1},
    {0, 0, 1}, {0, 2, -1},
    {0, 0, 0, 1}, {0, 1, 1, -1}, {0, 0, 2, -1}, {0, 3, -3, 1},
    {0, 0, 0, 0, 1}, {0, 1, 0, 1, -1}, {0, 0, 1, 1, -1}, {0, 2, 0, -2, 1}, {0, 0, 0, 2, -1},
    {0, 1, 2, -3, 1}, {0, 0, 3, -3, 1}, {0, 4, -6, 4, -1}, {0, 0, 2, 0, -1}, {0, 0, 4, -4, 1},
    {0, 0, 0, 0, 0, 1}, {0, 1, 0, 0, 1, -1}, {0, 0, 1, 0, 1, -1}, {0, 2, -1, 1, -2, 1},
    {0, 0, 0, 1, 1, -1}, {0, 1, 1, 0, -2, 1}, {0, 0, 2, 0, -2, 1}, {0, 3, -2, -2, 3, -1},
    {0, 0, 0, 0, 2, -1}, {0, 1, 0, 2, -3, 1}, {0, 0, 1, 2, -3, 1}, {0, 2, 1, -5, 4, -1},
    {0, 0, 0, 3, -3, 1}, {0, 1, 3, -6, 4, -1}, {0, 0, 4, -6, 4, -1}, {0, 5, -10, 10, -5, 1},
    {0, 0, 0, 2, 0, -1}, {0, 1, 2, -2, -1, 1}, {0, 0, 0, 4, -4, 1}, {0, 1, 4, -8, 5, -1},
    {0, 0, 1, 1, 0, -1}, {0, 0, 3, -1, -2, 1}, {0, 0, 2, 1, -3, 1}, {0, 0, 6, -9, 5, -1},
};

Outcome criterion1() {
    Outcome o;
    auto rows = enumerate_achievable(5);
    std::map<int, int> by_degree;
    std::set<std::vector<std::int64_t>> got;
    for (const auto& r : rows) {
        ++by_degree[r.poly.degree()];
        got.insert(r.poly.coeffs);
    }
    const int want[] = {1, 2, 4, 10, 24};
    std::string counts;
    for (int d = 1; d <= 5; ++d) {
        counts += (d > 1 ? "," : "") + std::to_string(by_degree[d]);
        o.require(by_degree[d] == want[d - 1], "degree " + std::to_string(d) + " count " +
                                                   std::to_string(by_degree[d]));
    }
    std::set<std::vector<std::int64_t>> table(kLowDegree.begin(), kLowDegree.end());
    o.require(table.size() == 41, "table rows are not distinct");
    o.require(got == table, "polynomial set differs from the table");
    o.note("counts " + counts);
    return o;
}

// Exhaustive sum over all 2^n leaf assignments.
double brute_force(const AndOrTree& tree, double p) {
    const auto n = static_cast<int>(tree.leaf_count());
    std::vector<std::uint8_t> bits(n);
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int ones = 0;
        for (int i = 0; i < n; ++i) {
            bits[i] = (mask >> i) & 1u;
            ones += bits[i];
        }
        if (eval_tree(tree, bits)) total += std::pow(p, ones) * std::pow(1.0 - p, n - ones);
    }
    return total;
}

Outcome criterion2() {
    Outcome o;
    double worst = 0.0;
    std::size_t trees = 0;
    for (int n = 1; n <= 5; ++n) {
        for (const auto& tree : enumerate_trees(n)) {
            ++trees;
            auto poly = tree_polynomial(tree);
            for (int i = 1; i <= 9; ++i) {
                double p = i / 10.0;
                worst = std::max(worst, std::abs(poly.eval(p) - brute_force(tree, p)));
            }
        }
    }
    o.require(worst <= 1e-12, "max deviation " + fmt(worst));
    o.note(std::to_string(trees) + " trees, max |delta| " + fmt(worst, 3));
    return o;
}

double single_interior(const TreeDistribution& d, Outcome& o, const std::string& name) {
    auto interior = fixed_points(d).interior();
    if (interior.size() != 1) {
        o.require(false, name + " has " + std::to_string(interior.size()) + " interior fixed points");
        return std::numeric_limits<double>::quiet_NaN();
    }
    return interior[0].location;
}

Outcome criterion3() {
    Outcome o;
    double worst = 0.0;
    const double golden = 2.0 - (1.0 + std::sqrt(5.0)) / 2.0;
    double v = single_interior(valiant(), o, "valiant");
    o.require(std::abs(v - 0.3819660113) <= 1e-9 && std::abs(v - golden) <= 1e-9, "valiant at " + fmt(v, 12));
    for (int i = 1; i <= 9; ++i) {
        double t = i / 10.0;
        double x = single_interior(linear_threshold(t), o, "linear " + fmt(t));
        worst = std::max(worst, std::abs(x - t));
        o.require(std::abs(x - t) <= 1e-9, "linear(" + fmt(t) + ") at " + fmt(x, 12));
    }
    for (double t : {0.05, 0.1, 0.9, 0.95}) {
        double x = single_interior(quad_k(t), o, "quad_k " + fmt(t));
        worst = std::max(worst, std::abs(x - t));
        o.require(std::abs(x - t) <= 1e-9, "quad_k(" + fmt(t) + ") at " + fmt(x, 12));
    }
    o.note("valiant " + fmt(v, 12) + ", max |x-t| " + fmt(worst, 3));
    return o;
}

Outcome criterion4() {
    Outcome o;
    struct Case {
        std::string name;
        TreeDistribution dist;
        double t;
        ConvergenceOrder want;
    };
    std::vector<Case> cases = {
        {"linear(0.5)", linear_threshold(0.5), 0.5, ConvergenceOrder::Linear},
        {"quad4(0.5)", quad4(0.5), 0.5, ConvergenceOrder::Quadratic},
        {"quad5(0.5)", quad5(0.5), 0.5, ConvergenceOrder::Quadratic},
        {"quad_k(0.1)", quad_k(0.1), 0.1, ConvergenceOrder::Quadratic},
        {"quad_k(0.9)", quad_k(0.9), 0.9, ConvergenceOrder::Quadratic},
    };
    for (const auto& c : cases) {
        for (double side : {-0.01, 0.01}) {
            double p = c.t + side;
            auto prof = profile(c.dist, p, 400);
            OrderFit fit = prof.order_fit();
            std::string tag = c.name + "@" + fmt(p) + "->" + fmt(prof.limit) + ":" + to_string(fit.order) +
                              "(slope " + (fit.points ? fmt(fit.slope, 3) : std::string("n/a")) + ", " +
                              std::to_string(fit.points) + " pts)";
            o.note(tag);
            if (fit.order != c.want) o.pass = false;
        }
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    auto r4 = verify_conditions(quad4(0.5), 0.5, 1.0 / 5.0, 4.0 / 5.0);
    o.require(r4.passed(), "quad4 conditions violated");
    o.require(r4.c3 <= 4.0, "quad4 c3 " + fmt(r4.c3));
    o.require(r4.c1 > 1.0 && r4.c2 > 1.0, "quad4 divergence constants");
    auto r5 = verify_conditions(quad5(0.5), 0.5, 1.0 / 7.0, 6.0 / 7.0);
    o.require(r5.passed(), "quad5 conditions violated");
    o.require(r5.c3 <= 6.0, "quad5 c3 " + fmt(r5.c3));
    o.require(r5.c1 > 1.0 && r5.c2 > 1.0, "quad5 divergence constants");
    o.note("quad4 c1=" + fmt(r4.c1, 4) + " c3=" + fmt(r4.c3, 4) + ", quad5 c1=" + fmt(r5.c1, 4) +
           " c3=" + fmt(r5.c3, 4));
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::size_t checked = 0;
    double tightest = std::numeric_limits<double>::infinity();
    for (const auto& e : enumerate_achievable(7)) {
        if (e.poly.coeffs.size() < 2 || e.poly.coeffs[1] != 0) continue;
        Polynomial f = Polynomial::from_integer(e.poly);
        for (const auto& fp : fixed_points(f).interior()) {
            double t = fp.location;
            int d = e.poly.degree();
            double lhs = std::min(t, 1.0 - t), rhs = 1.0 / (2.0 * d * d);
            ++checked;
            tightest = std::min(tightest, lhs / rhs);
            o.require(lhs > rhs, "degree " + std::to_string(d) + " fixed point " + fmt(t));
        }
    }
    o.require(checked > 0, "no polynomial checked");
    o.note(std::to_string(checked) + " fixed points, min ratio " + fmt(tightest, 4));
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto dist = quad4(0.5);
    const std::size_t m = 200, trials = 10000;
    const int levels = 20;
    const double p = 0.45;
    auto exact = exact_level_distribution(dist, m, p, levels);
    double mean = 0.0, second = 0.0;
    for (std::size_t c = 0; c <= m; ++c) {
        double x = static_cast<double>(c) / static_cast<double>(m);
        mean += exact.count_mass[c] * x;
        second += exact.count_mass[c] * x * x;
    }
    const double var = std::max(0.0, second - mean * mean);
    const double p_zero = exact.count_mass[0];

    LevelConfig cfg;
    cfg.widths = LevelConfig::constant_width(m, levels);
    cfg.input = InputSpec::with_fraction(m, p);
    cfg.seed = fixtures::kExactVsMonteCarloSeed;
    cfg.trials = trials;
    cfg.threads = workers();
    auto trace = simulate_leveled(dist, cfg);
    double sim_mean = trace.final_fraction_mean();
    double sim_zero = 0.0;
    for (const auto& fr : trace.fractions) sim_zero += fr.back() == 0.0;
    sim_zero /= static_cast<double>(trials);

    const double se_mean = std::sqrt(var / trials);
    const double se_zero = std::sqrt(p_zero * (1 - p_zero) / trials);
    o.require(std::abs(sim_mean - mean) <= 3 * se_mean, "mean " + fmt(sim_mean) + " vs " + fmt(mean));
    o.require(std::abs(sim_zero - p_zero) <= 3 * se_zero, "P(0) " + fmt(sim_zero) + " vs " + fmt(p_zero));
    o.note("mean sim " + fmt(sim_mean, 5) + " exact " + fmt(mean, 5) + " (se " + fmt(se_mean, 3) + "), P(0) sim " +
           fmt(sim_zero, 5) + " exact " + fmt(p_zero, 5) + " (se " + fmt(se_zero, 3) + ")");
    return o;
}

Outcome criterion8() {
    Outcome o;
    WidthScalingOptions opts;
    opts.trials = fixtures::kWidthScalingTrials;
    opts.levels = fixtures::kWidthScalingLevels;
    opts.threads = workers();
    auto table = width_scaling_experiment(quad4(0.5), 0.5, {0.01, 0.03, 0.1}, {0.01, 0.02, 0.04},
                                          fixtures::kWidthScalingSeed, opts);
    o.require(table.passed, "slope " + fmt(table.slope, 4) + " outside [0.8, 1.2]");
    std::string widths;
    for (const auto& r : table.rows) widths += (widths.empty() ? "" : ",") + std::to_string(r.min_width);
    o.note("slope " + fmt(table.slope, 4) + ", widths " + widths);
    return o;
}

double stream_accuracy(const TreeDistribution& dist, const StreamConfig& base, double fraction, bool want_one,
                       std::size_t n) {
    StreamConfig c = base;
    c.input = InputSpec::with_fraction(n, fraction);
    return simulate_stream(dist, c).final_accuracy(want_one);
}

Outcome criterion9() {
    Outcome o;
    const double eps = 0.1, delta = 0.1;
    const std::size_t trials = 500;
    const double floor = 1.0 - delta - 3.0 * std::sqrt(delta * (1 - delta) / trials);
    const auto lin = linear_threshold(0.5);

    StreamConfig wild;
    wild.k = fixtures::kWildItems;
    wild.alpha = 0.0;
    wild.seed = fixtures::kStreamSeed;
    wild.trials = trials;
    wild.threads = workers();
    double w_lo = stream_accuracy(lin, wild, 0.5 - eps, false, fixtures::kWildInputs);
    double w_hi = stream_accuracy(lin, wild, 0.5 + eps, true, fixtures::kWildInputs);
    o.require(w_lo >= floor && w_hi >= floor, "wild accuracy below " + fmt(floor, 4));

    StreamConfig expo = wild;
    expo.alpha = exponential_alpha(eps, delta, fixtures::kExponentialConstant);
    expo.k = fixtures::kExponentialItems;
    double e_lo = stream_accuracy(lin, expo, 0.5 - eps, false, fixtures::kExponentialInputs);
    double e_hi = stream_accuracy(lin, expo, 0.5 + eps, true, fixtures::kExponentialInputs);
    o.require(e_lo >= floor && e_hi >= floor, "exponential accuracy below " + fmt(floor, 4));

    // order of the wild quad4 trace, on the trial mean at each pool doubling
    StreamConfig q = wild;
    q.trials = fixtures::kStreamOrderTrials;
    q.input = InputSpec::with_fraction(fixtures::kWildInputs, 0.5 - eps);
    auto trace = simulate_stream(quad4(0.5), q);
    std::vector<double> mean;
    for (const auto& pts : trace.points) {
        std::size_t i = 0;
        for (const auto& p : pts) {
            if (!(p.kind & (kStart | kDoubling))) continue;
            if (mean.size() <= i) mean.push_back(0.0);
            mean[i++] += p.x / static_cast<double>(trace.points.size());
        }
    }
    OrderFit fit = fit_order(mean);
    o.require(fit.order == ConvergenceOrder::Linear, "quad4 stream order " + to_string(fit.order));
    o.note("floor " + fmt(floor, 4) + ", wild " + fmt(w_lo, 4) + "/" + fmt(w_hi, 4) + ", exponential(alpha=" +
           fmt(expo.alpha, 3) + ") " + fmt(e_lo, 4) + "/" + fmt(e_hi, 4) + ", quad4 stream " + to_string(fit.order) +
           " slope " + fmt(fit.slope, 3) + " over " + std::to_string(fit.points) + " phases");
    return o;
}

Outcome criterion10() {
    Outcome o;
    StaircaseSpec spec{{0.3, 0.7}, {0.5}, 0.1, 0.1};
    auto dist = staircase(spec);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        if (std::abs(x - 0.3) <= spec.epsilon || std::abs(x - 0.7) <= spec.epsilon) continue;
        double want = x < 0.3 ? 0.0 : (x < 0.7 ? 0.5 : 1.0);
        worst = std::max(worst, std::abs(dist.value(x) - want));
    }
    o.require(worst <= spec.delta, "staircase deviation " + fmt(worst));

    auto soft = soft_threshold(6);
    auto fps = fixed_points(soft);
    std::vector<double> sinks, sources;
    for (const auto& fp : fps.points) (fp.cls == FixedPointClass::Attractive ? sinks : sources).push_back(fp.location);
    o.require(sinks.size() == 3, std::to_string(sinks.size()) + " attractive fixed points");
    std::vector<int> hits(sinks.size(), 0);
    int stray = 0, used = 0;
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        bool near_source = false;
        for (double s : sources) near_source |= std::abs(x - s) < 0.01;
        if (near_source) continue;
        ++used;
        double y = iterate_point(soft, x, 30).back();
        std::size_t best = 0;
        for (std::size_t j = 1; j < sinks.size(); ++j)
            if (std::abs(y - sinks[j]) < std::abs(y - sinks[best])) best = j;
        if (!sinks.empty() && std::abs(y - sinks[best]) < 1e-6)
            ++hits[best];
        else
            ++stray;
    }
    o.require(stray == 0, std::to_string(stray) + " grid inputs off every plateau");
    for (std::size_t j = 0; j < hits.size(); ++j)
        o.require(hits[j] > 0, "plateau " + fmt(sinks[j]) + " never reached");
    std::string plateaus;
    for (std::size_t j = 0; j < sinks.size(); ++j)
        plateaus += (j ? "," : "") + fmt(sinks[j], 4) + "x" + std::to_string(hits[j]);
    o.note("staircase worst " + fmt(worst, 3) + " with " + std::to_string(dist.max_leaves()) +
           " leaves; soft_threshold(6) plateaus " + plateaus + " of " + std::to_string(used));
    return o;
}

Outcome criterion11() {
    Outcome o;
    const std::size_t n = 200, m = 20000, levels = 40, trials = 200;
    Rng rng = make_rng(fixtures::kLearningSeed, 0, 0);
    auto x = random_input(n, 0.5, rng);
    auto tree = learn_threshold(levels, m, x, fixtures::kLearningSeed);
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng fresh = make_rng(fixtures::kLearningSeed, i + 1, 1);
        auto lo = random_input(n, 0.45, fresh);
        auto hi = random_input(n, 0.55, fresh);
        correct += evaluate_learned(tree, lo, 1) == 0.0;
        correct += evaluate_learned(tree, hi, 1) == 1.0;
        total += 2;
    }
    double rate = static_cast<double>(correct) / static_cast<double>(total);
    o.require(rate >= 0.95, "classification rate " + fmt(rate));

    // per-trial relearning against leveled simulation of the linear mixture
    const std::size_t trace_trials = fixtures::kLearningTraceTrials;
    std::vector<std::vector<double>> learned(trace_trials);
    parallel_for(trace_trials, workers(), [&](std::size_t i) {
        Rng r = make_rng(fixtures::kLearningSeed, i, 2);
        auto xi = random_input(n, 0.5, r);
        auto ti = learn_threshold(levels, m, xi, derive_seed(fixtures::kLearningSeed, i, 3));
        learned[i] = learned_trace(ti, random_input(n, 0.45, r));
    });
    LevelConfig cfg;
    cfg.widths = LevelConfig::constant_width(m, levels);
    cfg.input = InputSpec::with_fraction(n, 0.45);
    cfg.seed = fixtures::kLearningSeed;
    cfg.trials = trace_trials;
    cfg.threads = workers();
    auto sim = simulate_leveled(linear_threshold(0.5), cfg);
    int off = 0;
    double worst_z = 0.0;
    for (std::size_t l = 0; l <= levels; ++l) {
        double ma = 0, va = 0, mb = 0, vb = 0;
        for (std::size_t i = 0; i < trace_trials; ++i) {
            ma += learned[i][l];
            mb += sim.fractions[i][l];
        }
        ma /= trace_trials;
        mb /= trace_trials;
        for (std::size_t i = 0; i < trace_trials; ++i) {
            va += (learned[i][l] - ma) * (learned[i][l] - ma);
            vb += (sim.fractions[i][l] - mb) * (sim.fractions[i][l] - mb);
        }
        double se = std::sqrt((va + vb) / (trace_trials - 1.0) / trace_trials);
        double diff = std::abs(ma - mb);
        if (se > 0) worst_z = std::max(worst_z, diff / se);
        if (diff > 3 * se) ++off;
    }
    o.require(off == 0, std::to_string(off) + " levels outside 3 sigma");
    o.note("rate " + fmt(rate, 4) + " over " + std::to_string(total) + " inputs, trace max z " + fmt(worst_z, 3));
    return o;
}

std::string leveled_bytes(bool counts, unsigned threads) {
    LevelConfig cfg;
    cfg.widths = {64, 64, 64, 64, 64, 64};
    cfg.input = InputSpec::bernoulli_p(50, 0.45);
    cfg.seed = 12345;
    cfg.trials = 40;
    cfg.threads = threads;
    auto dist = quad4(0.5);
    std::ostringstream os;
    write_trace_csv(os, counts ? simulate_leveled_counts(dist, cfg) : simulate_leveled(dist, cfg));
    return os.str();
}

std::string stream_bytes(double alpha, unsigned threads) {
    StreamConfig cfg;
    cfg.input = InputSpec::bernoulli_p(100, 0.42);
    cfg.k = 5000;
    cfg.alpha = alpha;
    cfg.seed = 777;
    cfg.trials = 12;
    cfg.threads = threads;
    cfg.stride = 97;
    std::ostringstream os;
    write_stream_csv(os, simulate_stream(linear_threshold(0.5), cfg));
    return os.str();
}

std::string learning_bytes() {
    std::vector<std::uint8_t> x(60);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 3 == 0;
    auto tree = learn_threshold(5, 300, x, 99);
    Rng rng = make_rng(99, 1, 1);
    auto input = random_input(60, 0.3, rng);
    Json j = to_json(tree);
    j["trace"] = learned_trace(tree, input);
    return j.dump();
}

std::string width_bytes(unsigned threads) {
    return fmt(width_accuracy(quad4(0.5), 0.5, 0.05, 128, 30, 500, 4242, threads), 17);
}

Outcome criterion12() {
    Outcome o;
    struct Run {
        std::string name;
        std::function<std::string(unsigned)> fn;
    };
    std::vector<Run> runs = {
        {"leveled", [](unsigned t) { return leveled_bytes(false, t); }},
        {"counts", [](unsigned t) { return leveled_bytes(true, t); }},
        {"wild", [](unsigned t) { return stream_bytes(0.0, t); }},
        {"exponential", [](unsigned t) { return stream_bytes(0.01, t); }},
        {"learning", [](unsigned) { return learning_bytes(); }},
        {"width", [](unsigned t) { return width_bytes(t); }},
    };
    for (const auto& r : runs) {
        std::string a = r.fn(1), b = r.fn(1), c = r.fn(4);
        o.require(a == b, r.name + " rerun differs");
        o.require(a == c, r.name + " differs across thread counts");
        o.require(!a.empty(), r.name + " produced no output");
    }
    o.note(std::to_string(runs.size()) + " engines, reruns and 1 vs 4 threads");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "achievable polynomial sets", 1.0, criterion1},
    {2, "brute-force polynomial oracle", 10.0, criterion2},
    {3, "fixed-point values", 60.0, criterion3},
    {4, "convergence order", 1.0, criterion4},
    {5, "condition certificates", 60.0, criterion5},
    {6, "degree lower bound", 60.0, criterion6},
    {7, "exact vs Monte Carlo", 30.0, criterion7},
    {8, "width scaling", 300.0, criterion8},
    {9, "streaming convergence", 300.0, criterion9},
    {10, "staircase and soft threshold", 60.0, criterion10},
    {11, "threshold learning", 300.0, criterion11},
    {12, "determinism", 120.0, criterion12},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : kCriteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            out.pass = false;
            out.note("runtime " + fmt(secs, 3) + " s over budget " + fmt(c.budget_seconds, 3) + " s");
        }
        std::printf("%s %2d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs, out.detail.c_str());
        std::fflush(stdout);
        failed += !out.pass;
    }
    return failed == 0 ? 0 : 1;
}
