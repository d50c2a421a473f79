#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "amptree/catalog.hpp"

namespace amptree {

enum class ConvergenceOrder { Linear, Quadratic, Undetermined };
std::string to_string(ConvergenceOrder o);

inline constexpr double kDefaultCorridor = 0.2;

struct OrderFit {
    ConvergenceOrder order = ConvergenceOrder::Undetermined;
    double slope = std::numeric_limits<double>::quiet_NaN();
    int points = 0;
};

// Slope of log e_{l+1} against log e_l over entries with 1e-12 < e_l < u.
OrderFit fit_order(const std::vector<double>& errors, double u = kDefaultCorridor);
ConvergenceOrder order_estimate(const std::vector<double>& errors, double u = kDefaultCorridor);

struct ConvergenceProfile {
    double p = 0.0;
    double t = std::numeric_limits<double>::quiet_NaN();  // nearest repelling fixed point
    double limit = 0.0;
    std::vector<double> iterates;
    std::vector<double> errors;
    double corridor = kDefaultCorridor;  // burn-in bound used for order fitting

    // First level with error below target, or -1.
    int levels_to(double target_error) const;
    OrderFit order_fit() const { return fit_order(errors, corridor); }
    ConvergenceOrder order() const { return order_fit().order; }
};

inline constexpr double kProfileStop = 1e-15;

ConvergenceProfile profile(const TreeDistribution& dist, double p, int max_levels);

void write_profile_csv(std::ostream& os, const ConvergenceProfile& prof);

struct ConditionViolation {
    std::string condition;
    double lo;
    double hi;
    double witness;
    double value;
};

struct ConditionReport {
    double t = 0.0, u = 0.0, v = 0.0, margin = 0.0;
    double c1 = 0.0;  // min (t - f(p)) / (t - p) on [u, t - margin]
    double c2 = 0.0;  // min (f(p) - t) / (p - t) on [t + margin, v]
    double c3 = 0.0;  // sup f(p) / p^2 on (0, u]
    double c4 = 0.0;  // sup (1 - f(p)) / (1 - p)^2 on [v, 1)
    std::vector<double> fixed_points;
    std::vector<ConditionViolation> violations;

    bool passed() const { return violations.empty(); }
};

ConditionReport verify_conditions(const TreeDistribution& dist, double t, double u, double v,
                                  double margin = 1e-4, int grid = 10000);

} // namespace amptree
