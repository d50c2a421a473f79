#include "amptree/leveled.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "amptree/parallel.hpp"
#include "amptree/sampler.hpp"

namespace amptree {

InputSpec InputSpec::explicit_bits(std::vector<std::uint8_t> bits) {
    InputSpec s;
    s.n = bits.size();
    s.bits = std::move(bits);
    return s;
}

InputSpec InputSpec::with_fraction(std::size_t n, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw RangeError("input fraction must lie in [0, 1]");
    auto ones = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<std::uint8_t> bits(n, 0);
    std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(std::min(ones, n)), 1);
    return explicit_bits(std::move(bits));
}

InputSpec InputSpec::bernoulli_p(std::size_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("Bernoulli input needs p in [0, 1]");
    InputSpec s;
    s.n = n;
    s.bernoulli = p;
    return s;
}

void InputSpec::validate() const {
    if (size() == 0) throw InputShapeError("input needs at least one item");
}

void InputSpec::realize(Rng& rng, std::vector<std::uint8_t>& out) const {
    if (!bernoulli) {
        out = bits;
        return;
    }
    out.resize(n);
    std::bernoulli_distribution coin(*bernoulli);
    for (auto& b : out) b = coin(rng) ? 1 : 0;
}

void LevelConfig::validate() const {
    if (widths.empty()) throw InputShapeError("level config needs at least one level");
    for (auto m : widths)
        if (m == 0) throw InputShapeError("level width must be positive");
    if (trials == 0) throw InputShapeError("trials must be positive");
    input.validate();
}

double SimulationTrace::final_fraction_mean() const {
    double acc = 0.0;
    for (const auto& f : fractions) acc += f.back();
    return fractions.empty() ? 0.0 : acc / static_cast<double>(fractions.size());
}

double SimulationTrace::final_firing_rate() const {
    double acc = std::accumulate(final_fired.begin(), final_fired.end(), 0.0);
    return final_fired.empty() ? 0.0 : acc / static_cast<double>(final_fired.size());
}

namespace {

double fraction_of(const std::vector<std::uint8_t>& bits) {
    std::size_t c = 0;
    for (auto b : bits) c += b;
    return static_cast<double>(c) / static_cast<double>(bits.size());
}

} // namespace

SimulationTrace simulate_leveled(const TreeDistribution& dist, const LevelConfig& config) {
    config.validate();
    const TreeSampler sampler(dist);
    SimulationTrace trace;
    trace.config = config;
    trace.fractions.assign(config.trials, {});
    trace.final_fired.assign(config.trials, 0);
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
        std::vector<std::uint8_t> prev, cur;
        Rng input_rng = make_rng(config.seed, trial, 0);
        config.input.realize(input_rng, prev);
        auto& fr = trace.fractions[trial];
        fr.reserve(config.widths.size() + 1);
        fr.push_back(fraction_of(prev));
        for (std::size_t level = 0; level < config.widths.size(); ++level) {
            Rng rng = make_rng(config.seed, trial, level + 1);
            std::uniform_int_distribution<std::size_t> pick_leaf(0, prev.size() - 1);
            auto leaf = [&]() { return prev[pick_leaf(rng)] != 0; };
            cur.resize(config.widths[level]);
            std::size_t count = 0;
            for (auto& item : cur) {
                item = sampler.eval(sampler.pick(rng), leaf) ? 1 : 0;
                count += item;
            }
            fr.push_back(static_cast<double>(count) / static_cast<double>(cur.size()));
            std::swap(prev, cur);
        }
        trace.final_fired[trial] = prev[0];
    });
    return trace;
}

SimulationTrace simulate_leveled_counts(const TreeDistribution& dist, const LevelConfig& config) {
    config.validate();
    SimulationTrace trace;
    trace.config = config;
    trace.fractions.assign(config.trials, {});
    trace.final_fired.assign(config.trials, 0);
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
        Rng rng = make_rng(config.seed, trial, 0);
        std::vector<std::uint8_t> input;
        config.input.realize(rng, input);
        auto& fr = trace.fractions[trial];
        fr.reserve(config.widths.size() + 1);
        double x = fraction_of(input);
        fr.push_back(x);
        std::size_t count = 0;
        for (std::size_t m : config.widths) {
            double q = std::clamp(dist.value(x), 0.0, 1.0);
            std::binomial_distribution<std::size_t> draw(m, q);
            count = draw(rng);
            x = static_cast<double>(count) / static_cast<double>(m);
            fr.push_back(x);
        }
        // items are exchangeable, so item 0 fires with probability count/m
        std::bernoulli_distribution first(x);
        trace.final_fired[trial] = first(rng) ? 1 : 0;
    });
    return trace;
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
    os << "trial,level,fraction\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < trace.fractions.size(); ++i)
        for (std::size_t l = 0; l < trace.fractions[i].size(); ++l)
            os << i << ',' << l << ',' << trace.fractions[i][l] << '\n';
}

std::vector<double> binomial_row(std::size_t m, double q) {
    std::vector<double> row(m + 1, 0.0);
    if (q <= 0.0) {
        row[0] = 1.0;
        return row;
    }
    if (q >= 1.0) {
        row[m] = 1.0;
        return row;
    }
    const double lq = std::log(q), l1q = std::log1p(-q);
    const double lm = std::lgamma(static_cast<double>(m) + 1.0);
    for (std::size_t j = 0; j <= m; ++j) {
        double lc = lm - std::lgamma(static_cast<double>(j) + 1.0) - std::lgamma(static_cast<double>(m - j) + 1.0);
        row[j] = std::exp(lc + static_cast<double>(j) * lq + static_cast<double>(m - j) * l1q);
    }
    return row;
}

LevelDistribution exact_level_distribution(const TreeDistribution& dist, std::size_t m, double p, int levels) {
    if (m == 0) throw InputShapeError("width must be positive");
    if (m > kMaxExactWidth)
        throw CapacityError("exact transition matrix is limited to width " + std::to_string(kMaxExactWidth) +
                            "; use simulate_leveled for m=" + std::to_string(m));
    if (levels < 1) throw RangeError("levels must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("p must lie in [0, 1]");
    std::vector<double> v = binomial_row(m, dist.value(p));
    if (levels > 1) {
        std::vector<std::vector<double>> a(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
            a[i] = binomial_row(m, std::clamp(dist.value(static_cast<double>(i) / static_cast<double>(m)), 0.0, 1.0));
        std::vector<double> next(m + 1);
        for (int step = 1; step < levels; ++step) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i <= m; ++i) {
                if (v[i] == 0.0) continue;
                const double vi = v[i];
                const auto& row = a[i];
                for (std::size_t j = 0; j <= m; ++j) next[j] += vi * row[j];
            }
            std::swap(v, next);
        }
    }
    double expected = 0.0;
    for (std::size_t c = 0; c <= m; ++c) expected += v[c] * static_cast<double>(c);
    return {expected / static_cast<double>(m), v};
}

double width_accuracy(const TreeDistribution& dist, double t, double epsilon, std::size_t width, int levels,
                      std::size_t trials, std::uint64_t seed, unsigned threads) {
    const double p0 = t - epsilon;
    std::vector<std::uint8_t> correct(trials, 0);
    parallel_for(trials, threads, [&](std::size_t trial) {
        Rng rng = make_rng(seed, trial, 0);
        double x = p0;
        for (int l = 0; l < levels; ++l) {
            std::binomial_distribution<std::size_t> draw(width, std::clamp(dist.value(x), 0.0, 1.0));
            x = static_cast<double>(draw(rng)) / static_cast<double>(width);
            if (x == 0.0) break;  // absorbing
        }
        correct[trial] = x < t ? 1 : 0;
    });
    return std::accumulate(correct.begin(), correct.end(), 0.0) / static_cast<double>(trials);
}

WidthScalingTable width_scaling_experiment(const TreeDistribution& dist, double t, const std::vector<double>& gammas,
                                           const std::vector<double>& epsilons, std::uint64_t seed,
                                           const WidthScalingOptions& options) {
    WidthScalingTable table;
    std::uint64_t cell = 0;
    for (double gamma : gammas) {
        for (double eps : epsilons) {
            // every width in a cell reuses the same seeds (common random numbers)
            std::uint64_t cell_seed = derive_seed(seed, cell++, 0x5ca1e);
            auto acc = [&](std::size_t m) {
                return width_accuracy(dist, t, eps, m, options.levels, options.trials, cell_seed, options.threads);
            };
            const double goal = 1.0 - gamma;
            std::size_t hi = std::max<std::size_t>(1, options.start_width);
            double acc_hi = acc(hi);
            while (acc_hi < goal && hi < options.max_width) {
                hi *= 2;
                acc_hi = acc(hi);
            }
            std::size_t lo = hi / 2;
            // refine between the last failing and first passing width
            while (lo + 1 < hi && hi - lo > std::max<std::size_t>(1, lo / 64)) {
                std::size_t mid = lo + (hi - lo) / 2;
                double a = acc(mid);
                if (a >= goal) {
                    hi = mid;
                    acc_hi = a;
                } else {
                    lo = mid;
                }
            }
            table.rows.push_back({gamma, eps, hi, acc_hi, std::log(1.0 / gamma) / (eps * eps)});
        }
    }
    double mx = 0, my = 0;
    for (const auto& r : table.rows) {
        mx += std::log(r.predictor);
        my += std::log(static_cast<double>(r.min_width));
    }
    const double n = static_cast<double>(table.rows.size());
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& r : table.rows) {
        double dx = std::log(r.predictor) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(static_cast<double>(r.min_width)) - my);
    }
    table.slope = sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
    table.intercept = my - table.slope * mx;
    table.passed = table.slope >= 0.8 && table.slope <= 1.2;
    table.verdict = table.passed ? "PASS" : "UNDETERMINED";
    return table;
}

namespace {

double min_divergence_ratio(const TreeDistribution& dist, double t) {
    if (dist.mixture()) {
        Polynomial g = divergence_ratio(*dist.mixture(), t);
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10000; ++i) d = std::min(d, g.value(i / 10000.0));
        return d;
    }
    double d = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 10000; ++i) {
        double p = i / 10000.0;
        if (std::abs(p - t) < 1e-3) continue;
        d = std::min(d, (dist.value(p) - p) / (p * (1 - p) * (p - t)));
    }
    return d;
}

} // namespace

HalfProgressReport half_progress_check(const SimulationTrace& trace, const TreeDistribution& dist, double t,
                                       double u, double epsilon) {
    HalfProgressReport rep;
    const double d = min_divergence_ratio(dist, t);
    const double alpha = u * (1 - t) * (1 - t) * d * d / 8.0;
    double bound_sum = 0.0;
    for (const auto& fr : trace.fractions) {
        for (std::size_t i = 0; i + 1 < fr.size(); ++i) {
            double x = fr[i];
            if (x < u || x > t - epsilon) continue;
            double m = static_cast<double>(trace.config.widths[i]);  // width of level i+1
            ++rep.samples;
            if (fr[i + 1] > (x + dist.value(x)) / 2.0) ++rep.violations;
            bound_sum += std::exp(-alpha * m * (t - x) * (t - x));
        }
    }
    if (rep.samples == 0) return rep;
    const double n = static_cast<double>(rep.samples);
    rep.observed_rate = static_cast<double>(rep.violations) / n;
    rep.bound = bound_sum / n;
    rep.sigma = std::sqrt(std::max(rep.bound * (1 - rep.bound), 1.0 / n) / n);
    rep.passed = rep.observed_rate <= rep.bound + 3.0 * rep.sigma;
    return rep;
}

} // namespace amptree
