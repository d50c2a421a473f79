#include "amptree/stream.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>

#include "amptree/parallel.hpp"
#include "amptree/sampler.hpp"

namespace amptree {

PrefixSumTree::PrefixSumTree(std::size_t capacity) { reset(capacity); }

void PrefixSumTree::reset(std::size_t capacity) {
    tree_.assign(capacity + 1, 0.0);
    top_bit_ = capacity == 0 ? 0 : std::bit_floor(capacity);
    total_ = 0.0;
}

void PrefixSumTree::add(std::size_t index, double delta) {
    total_ += delta;
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

double PrefixSumTree::prefix(std::size_t count) const {
    double s = 0.0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
}

std::size_t PrefixSumTree::find(double u, std::size_t live) const {
    std::size_t pos = 0;
    for (std::size_t bit = top_bit_; bit > 0; bit >>= 1) {
        std::size_t next = pos + bit;
        if (next < tree_.size() && tree_[next] <= u) {
            pos = next;
            u -= tree_[next];
        }
    }
    return std::min(pos, live - 1);
}

void PrefixSumTree::assign(const std::vector<double>& weights) {
    reset(tree_.size() - 1);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        tree_[i + 1] += weights[i];
        total_ += weights[i];
        std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
        if (parent < tree_.size()) tree_[parent] += tree_[i + 1];
    }
}

void StreamConfig::validate() const {
    input.validate();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be a finite value >= 0");
    if (trials == 0) throw InputShapeError("trials must be positive");
}

double StreamTrace::final_accuracy(bool want_one) const {
    if (final_bit.empty()) return 0.0;
    std::size_t ok = 0;
    for (auto b : final_bit) ok += (b != 0) == want_one;
    return static_cast<double>(ok) / static_cast<double>(final_bit.size());
}

namespace {

constexpr double kRenormalizeExponent = 500.0;
constexpr std::size_t kLedgerEvery = 10000;

struct TrialResult {
    std::vector<StreamPoint> points;
    std::uint8_t final_bit = 0;
    double ledger_error = 0.0;
    std::size_t renormalizations = 0;
};

TrialResult run_trial(const TreeSampler& sampler, const StreamConfig& cfg, std::size_t trial) {
    TrialResult out;
    Rng rng = make_rng(cfg.seed, trial, 0);
    std::vector<std::uint8_t> bits;
    cfg.input.realize(rng, bits);
    const std::size_t n = bits.size();
    const std::size_t capacity = n + cfg.k;
    bits.resize(capacity, 0);
    const bool wild = cfg.alpha == 0.0;
    const std::size_t decay_period =
        wild ? 0 : static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / cfg.alpha)));

    std::vector<double> w;
    PrefixSumTree tree;
    double total = static_cast<double>(n), fired = 0.0;
    for (std::size_t i = 0; i < n; ++i) fired += bits[i];
    if (!wild) {
        w.assign(capacity, 0.0);
        std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n), 1.0);
        tree.reset(capacity);
        tree.assign(w);
    }
    double shift = 0.0;  // weights are stored as exp(alpha * step - shift)
    std::size_t next_doubling = 2 * n;

    out.points.push_back({0, fired / total, kStart});
    std::size_t live = n;
    for (std::size_t step = 1; step <= cfg.k; ++step) {
        std::size_t tree_idx = sampler.pick(rng);
        bool bit;
        if (wild) {
            std::uniform_int_distribution<std::size_t> pick(0, live - 1);
            bit = sampler.eval(tree_idx, [&] { return bits[pick(rng)] != 0; });
        } else {
            bit = sampler.eval(tree_idx, [&] { return bits[tree.find(uniform01(rng) * tree.total(), live)] != 0; });
        }
        // new item carries relative weight exp(alpha * (step - 1)), per the decay after each creation
        double weight = 1.0;
        if (!wild) {
            double expo = cfg.alpha * static_cast<double>(step - 1) - shift;
            if (expo > kRenormalizeExponent) {
                double factor = std::exp(-expo);
                for (std::size_t i = 0; i < live; ++i) w[i] *= factor;
                shift += expo;
                expo = 0.0;
                tree.assign(w);
                total = 0.0;
                fired = 0.0;
                for (std::size_t i = 0; i < live; ++i) {
                    total += w[i];
                    if (bits[i]) fired += w[i];
                }
                ++out.renormalizations;
            }
            weight = std::exp(expo);
            w[live] = weight;
            tree.add(live, weight);
        }
        bits[live] = bit ? 1 : 0;
        ++live;
        total += weight;
        if (bit) fired += weight;

        const double x = std::clamp(fired / total, 0.0, 1.0);
        std::uint8_t kind = 0;
        if (live == next_doubling) {
            kind |= kDoubling;
            next_doubling *= 2;
        }
        if (decay_period && step % decay_period == 0) kind |= kDecay;
        if (cfg.stride && step % cfg.stride == 0) kind |= kStride;
        if (step == cfg.k) kind |= kFinal;
        if (kind) out.points.push_back({step, x, kind});

        if (cfg.check_ledger && step % kLedgerEvery == 0) {
            double t_full = 0.0, f_full = 0.0;
            for (std::size_t i = 0; i < live; ++i) {
                double wi = wild ? 1.0 : w[i];
                t_full += wi;
                if (bits[i]) f_full += wi;
            }
            out.ledger_error = std::max(out.ledger_error, std::abs(f_full / t_full - fired / total));
        }
    }
    out.final_bit = cfg.k > 0 ? bits[live - 1] : 0;
    return out;
}

} // namespace

StreamTrace simulate_stream(const TreeDistribution& dist, const StreamConfig& config) {
    config.validate();
    const TreeSampler sampler(dist);
    std::vector<TrialResult> results(config.trials);
    parallel_for(config.trials, config.threads,
                 [&](std::size_t trial) { results[trial] = run_trial(sampler, config, trial); });
    StreamTrace trace;
    trace.config = config;
    for (auto& r : results) {
        trace.points.push_back(std::move(r.points));
        trace.final_bit.push_back(r.final_bit);
        trace.ledger_max_error = std::max(trace.ledger_max_error, r.ledger_error);
        trace.renormalizations += r.renormalizations;
    }
    return trace;
}

void write_stream_csv(std::ostream& os, const StreamTrace& trace) {
    os << "trial,step,x\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < trace.points.size(); ++i)
        for (const auto& p : trace.points[i]) os << i << ',' << p.step << ',' << p.x << '\n';
}

std::vector<PhaseRow> phase_progress_report(const StreamTrace& trace, double t) {
    std::vector<PhaseRow> rows;
    if (trace.points.empty()) return rows;
    const std::uint8_t boundary = trace.config.alpha == 0.0 ? kDoubling : kDecay;
    // boundaries are at identical steps in every trial
    std::vector<std::vector<double>> xs;  // [trial][boundary]
    std::vector<std::size_t> steps;
    for (std::size_t trial = 0; trial < trace.points.size(); ++trial) {
        std::vector<double> row;
        std::vector<std::size_t> st;
        for (const auto& p : trace.points[trial])
            if ((p.kind & (boundary | kStart)) != 0) {
                row.push_back(p.x);
                st.push_back(p.step);
            }
        if (trial == 0) steps = st;
        xs.push_back(std::move(row));
    }
    const bool mirror = !xs.empty() && !xs[0].empty() && xs[0][0] > t;
    const double tt = mirror ? 1.0 - t : t;
    const double trials = static_cast<double>(xs.size());
    for (std::size_t b = 0; b + 1 < steps.size(); ++b) {
        double xs_sum = 0, xe_sum = 0, f_sum = 0, f_sq = 0;
        std::size_t used = 0;
        for (const auto& row : xs) {
            double a = mirror ? 1.0 - row[b] : row[b];
            double e = mirror ? 1.0 - row[b + 1] : row[b + 1];
            xs_sum += a;
            xe_sum += e;
            if (a > 0.0) {
                double f = e / a;
                f_sum += f;
                f_sq += f * f;
                ++used;
            }
        }
        PhaseRow r{};
        r.phase = b;
        r.step_start = steps[b];
        r.step_end = steps[b + 1];
        r.x_start = xs_sum / trials;
        r.x_end = xe_sum / trials;
        r.eps_start = tt - r.x_start;
        double nu = static_cast<double>(std::max<std::size_t>(used, 1));
        r.factor = f_sum / nu;
        double var = std::max(0.0, f_sq / nu - r.factor * r.factor);
        r.factor_sigma = std::sqrt(var / nu);
        r.bound = 1.0 - std::max(0.0, r.eps_start) * (1.0 - tt) / 8.0;
        r.consistent = r.factor <= r.bound + 3.0 * r.factor_sigma;
        rows.push_back(r);
    }
    return rows;
}

double exponential_alpha(double epsilon, double delta, double c) {
    if (!(epsilon > 0 && delta > 0 && c > 0)) throw RangeError("exponential_alpha needs positive arguments");
    return std::min(epsilon * epsilon, delta * delta) / (c * std::log(4.0 / (epsilon * delta)));
}

} // namespace amptree
