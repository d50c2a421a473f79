#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "amptree/catalog.hpp"
#include "amptree/leveled.hpp"

namespace amptree {

// Fenwick tree over nonnegative doubles; sampling is a top-down descent.
class PrefixSumTree {
public:
    explicit PrefixSumTree(std::size_t capacity = 0);

    void reset(std::size_t capacity);
    void add(std::size_t index, double delta);
    double prefix(std::size_t count) const;  // sum of the first `count` slots
    double total() const { return total_; }
    // Smallest index i with prefix(i + 1) > u; u is clamped into range.
    std::size_t find(double u, std::size_t live) const;
    // Rebuild from explicit slot weights in O(n).
    void assign(const std::vector<double>& weights);

private:
    std::vector<double> tree_;
    std::size_t top_bit_ = 0;
    double total_ = 0.0;
};

struct StreamConfig {
    InputSpec input;
    std::size_t k = 0;   // items to create
    double alpha = 0.0;  // decay per step; 0 is the wild construction
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    unsigned threads = 1;
    std::size_t stride = 0;     // extra recording stride, 0 for none
    bool check_ledger = false;  // recompute X from scratch every 10^4 steps

    void validate() const;
};

enum StreamPointKind : std::uint8_t {
    kStart = 1,
    kDoubling = 2,  // pool size reached n * 2^r
    kDecay = 4,     // multiple of ceil(1/alpha) steps
    kStride = 8,
    kFinal = 16,
};

struct StreamPoint {
    std::size_t step;
    double x;
    std::uint8_t kind;
};

struct StreamTrace {
    StreamConfig config;
    std::vector<std::vector<StreamPoint>> points;  // per trial
    std::vector<std::uint8_t> final_bit;           // output of the k-th item
    double ledger_max_error = 0.0;                 // only with check_ledger
    std::size_t renormalizations = 0;

    double final_accuracy(bool want_one) const;
};

StreamTrace simulate_stream(const TreeDistribution& dist, const StreamConfig& config);

void write_stream_csv(std::ostream& os, const StreamTrace& trace);

struct PhaseRow {
    std::size_t phase;
    std::size_t step_start;
    std::size_t step_end;
    double x_start;  // means over trials
    double x_end;
    double eps_start;
    double factor;  // mean of x_end / x_start
    double factor_sigma;
    double bound;  // 1 - eps (1 - t) / 8
    bool consistent;  // factor <= bound + 3 sigma
};

// Phases are the doubling segments of a wild trace, or the 1/alpha segments of an
// exponential one. Traces starting above t are mirrored so that x measures the
// distance from the far attractor.
std::vector<PhaseRow> phase_progress_report(const StreamTrace& trace, double t);

// Decay rate from the exponential construction with the constant left open:
// min(eps^2, delta^2) / (c log(4 / (eps delta))).
double exponential_alpha(double epsilon, double delta, double c);

} // namespace amptree
