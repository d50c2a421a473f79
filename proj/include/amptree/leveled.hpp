#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "amptree/catalog.hpp"
#include "amptree/rng.hpp"

namespace amptree {

// Level-0 items: an explicit bit vector, or n fresh Bernoulli(p) bits per trial.
struct InputSpec {
    std::vector<std::uint8_t> bits;
    std::optional<double> bernoulli;
    std::size_t n = 0;

    static InputSpec explicit_bits(std::vector<std::uint8_t> bits);
    // n bits of which round(n * fraction) are set
    static InputSpec with_fraction(std::size_t n, double fraction);
    static InputSpec bernoulli_p(std::size_t n, double p);

    std::size_t size() const { return bernoulli ? n : bits.size(); }
    void validate() const;
    // Fills out with this trial's input bits.
    void realize(Rng& rng, std::vector<std::uint8_t>& out) const;
};

struct LevelConfig {
    std::vector<std::size_t> widths;  // m_1..m_L
    InputSpec input;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    unsigned threads = 1;

    static std::vector<std::size_t> constant_width(std::size_t m, std::size_t levels) {
        return std::vector<std::size_t>(levels, m);
    }
    void validate() const;
};

struct SimulationTrace {
    LevelConfig config;
    // fractions[trial][level], level 0 is the input
    std::vector<std::vector<double>> fractions;
    std::vector<std::uint8_t> final_fired;  // item 0 of the top level

    double final_fraction_mean() const;
    double final_firing_rate() const;
};

// Builds every item explicitly: draw a tree, draw its leaves uniformly with
// replacement from the previous level, evaluate. Level j of trial i uses the
// generator seeded by derive_seed(seed, i, j).
SimulationTrace simulate_leveled(const TreeDistribution& dist, const LevelConfig& config);

// Same law as simulate_leveled, sampled per level: with leaves drawn with
// replacement each item fires independently with probability f(X_{j-1}), so the
// level count is Binomial(m_j, f(X_{j-1})). Trial i uses derive_seed(seed, i, 0).
SimulationTrace simulate_leveled_counts(const TreeDistribution& dist, const LevelConfig& config);

void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

struct LevelDistribution {
    double firing_probability;        // expected fraction firing at level L
    std::vector<double> count_mass;   // P(count = c), c = 0..m
};

inline constexpr std::size_t kMaxExactWidth = 2000;

// Exact law of the top-level count for width m over L levels.
LevelDistribution exact_level_distribution(const TreeDistribution& dist, std::size_t m, double p, int levels);

// One row of Binomial(m, q) masses.
std::vector<double> binomial_row(std::size_t m, double q);

struct WidthScalingRow {
    double gamma;
    double epsilon;
    std::size_t min_width;
    double accuracy;   // at min_width
    double predictor;  // ln(1/gamma) / epsilon^2
};

struct WidthScalingOptions {
    std::size_t trials = 4000;
    int levels = 60;
    std::size_t start_width = 4;
    std::size_t max_width = std::size_t(1) << 24;
    unsigned threads = 1;
};

struct WidthScalingTable {
    std::vector<WidthScalingRow> rows;
    double slope = 0.0;
    double intercept = 0.0;
    bool passed = false;  // slope within [0.8, 1.2]
    std::string verdict;  // PASS or UNDETERMINED
};

// Fraction of trials whose top level lands on the correct side of t when the
// input fraction is t - epsilon.
double width_accuracy(const TreeDistribution& dist, double t, double epsilon, std::size_t width, int levels,
                      std::size_t trials, std::uint64_t seed, unsigned threads = 1);

WidthScalingTable width_scaling_experiment(const TreeDistribution& dist, double t, const std::vector<double>& gammas,
                                           const std::vector<double>& epsilons, std::uint64_t seed,
                                           const WidthScalingOptions& options = {});

struct HalfProgressReport {
    std::size_t samples = 0;     // transitions with u <= X_i <= t - eps
    std::size_t violations = 0;  // X_{i+1} > (X_i + f(X_i)) / 2
    double observed_rate = 0.0;
    double bound = 0.0;  // mean of exp(-alpha m eps_i^2) over the samples
    double sigma = 0.0;
    bool passed = false;
};

// Half-progress falsification rate of a leveled trace against the Chernoff bound
// with alpha = u (1-t)^2 d^2 / 8 and d = min of the divergence ratio.
HalfProgressReport half_progress_check(const SimulationTrace& trace, const TreeDistribution& dist, double t,
                                       double u, double epsilon);

} // namespace amptree
