#include "amptree/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace amptree {

std::string to_string(ConvergenceOrder o) {
    switch (o) {
    case ConvergenceOrder::Linear: return "LINEAR";
    case ConvergenceOrder::Quadratic: return "QUADRATIC";
    case ConvergenceOrder::Undetermined: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

OrderFit fit_order(const std::vector<double>& errors, double u) {
    constexpr double kFloor = 1e-12;
    OrderFit fit;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > kFloor && errors[i] < u)) continue;
        ++fit.points;
        if (i + 1 < errors.size() && errors[i + 1] > 0.0) {
            xs.push_back(std::log(errors[i]));
            ys.push_back(std::log(errors[i + 1]));
        }
    }
    if (fit.points < 4 || xs.size() < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    if (fit.slope >= 0.8 && fit.slope <= 1.2)
        fit.order = ConvergenceOrder::Linear;
    else if (fit.slope >= 1.7 && fit.slope <= 2.3)
        fit.order = ConvergenceOrder::Quadratic;
    return fit;
}

ConvergenceOrder order_estimate(const std::vector<double>& errors, double u) { return fit_order(errors, u).order; }

int ConvergenceProfile::levels_to(double target_error) const {
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (errors[i] < target_error) return static_cast<int>(i);
    return -1;
}

ConvergenceProfile profile(const TreeDistribution& dist, double p, int max_levels) {
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("profile needs p in [0, 1]");
    if (max_levels < 0) throw RangeError("max_levels must be nonnegative");
    constexpr double kAtFixed = 1e-12;
    FixedPointReport rep = fixed_points(dist);
    ConvergenceProfile prof;
    prof.p = p;

    // Basin of p: bounded by the nearest repelling fixed points on each side.
    double left = -1.0, right = 2.0;
    bool at_attractive = false;
    for (const auto& fp : rep.points) {
        bool repelling = fp.cls != FixedPointClass::Attractive;
        if (std::abs(fp.location - p) <= kAtFixed) {
            if (repelling && fp.location > 0.0 && fp.location < 1.0)
                throw DegenerateInputError("p=" + std::to_string(p) + " is an interior repelling fixed point");
            at_attractive = true;
            prof.limit = fp.location;
        }
        if (!repelling) continue;
        if (fp.location < p) left = std::max(left, fp.location);
        if (fp.location > p) right = std::min(right, fp.location);
    }
    if (left >= 0.0 && right <= 1.0)
        prof.t = (p - left <= right - p) ? left : right;
    else if (left >= 0.0)
        prof.t = left;
    else if (right <= 1.0)
        prof.t = right;

    if (!at_attractive) {
        std::vector<double> sinks;
        for (const auto& fp : rep.points)
            if (fp.cls == FixedPointClass::Attractive && fp.location > left && fp.location < right)
                sinks.push_back(fp.location);
        if (sinks.size() == 1) {
            prof.limit = sinks.front();
        } else {
            // no unique sink in the basin: take the fixed point nearest the final iterate
            double x = iterate_point(dist, p, std::max(max_levels, 1)).back();
            double best = 2.0;
            for (const auto& fp : rep.points)
                if (std::abs(fp.location - x) < best) {
                    best = std::abs(fp.location - x);
                    prof.limit = fp.location;
                }
        }
    }
    if (!std::isnan(prof.t)) prof.corridor = std::min(kDefaultCorridor, std::abs(prof.t - prof.limit) / 2.0);

    double x = p;
    for (int level = 0; level <= max_levels; ++level) {
        double e = std::abs(x - prof.limit);
        prof.iterates.push_back(x);
        prof.errors.push_back(e);
        if (e < kProfileStop) break;
        x = dist.value(x);
    }
    return prof;
}

void write_profile_csv(std::ostream& os, const ConvergenceProfile& prof) {
    os << "level,iterate,error\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < prof.errors.size(); ++i)
        os << i << ',' << prof.iterates[i] << ',' << prof.errors[i] << '\n';
}

ConditionReport verify_conditions(const TreeDistribution& dist, double t, double u, double v, double margin,
                                  int grid) {
    if (!(0.0 < u && u < t && t < v && v < 1.0)) throw RangeError("verify_conditions needs 0 < u < t < v < 1");
    if (!(margin > 0.0)) throw RangeError("margin must be positive");
    if (grid < 2) throw RangeError("grid too small");
    ConditionReport rep;
    rep.t = t;
    rep.u = u;
    rep.v = v;
    rep.margin = margin;

    auto sweep = [&](double lo, double hi, auto&& ratio, bool take_min, double& out, double& witness) {
        out = take_min ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        witness = lo;
        for (int i = 0; i <= grid; ++i) {
            double p = lo + (hi - lo) * i / grid;
            double r = ratio(p);
            if (take_min ? r < out : r > out) {
                out = r;
                witness = p;
            }
        }
    };

    double w;
    if (t - margin > u) {
        sweep(u, t - margin, [&](double p) { return (t - dist.value(p)) / (t - p); }, true, rep.c1, w);
        if (!(rep.c1 > 1.0)) rep.violations.push_back({"linear divergence below t", u, t - margin, w, rep.c1});
    } else {
        rep.c1 = std::numeric_limits<double>::infinity();
    }
    if (t + margin < v) {
        sweep(t + margin, v, [&](double p) { return (dist.value(p) - t) / (p - t); }, true, rep.c2, w);
        if (!(rep.c2 > 1.0)) rep.violations.push_back({"linear divergence above t", t + margin, v, w, rep.c2});
    } else {
        rep.c2 = std::numeric_limits<double>::infinity();
    }
    // open ends: start one grid step inside
    double h3 = u / grid;
    sweep(h3, u, [&](double p) { return dist.value(p) / (p * p); }, false, rep.c3, w);
    if (!(rep.c3 * u < 1.0)) rep.violations.push_back({"quadratic convergence to 0", 0.0, u, w, rep.c3});
    double h4 = (1.0 - v) / grid;
    sweep(v, 1.0 - h4, [&](double p) { return (1.0 - dist.value(p)) / ((1.0 - p) * (1.0 - p)); }, false, rep.c4, w);
    if (!(rep.c4 * (1.0 - v) < 1.0)) rep.violations.push_back({"quadratic convergence to 1", v, 1.0, w, rep.c4});

    FixedPointReport fps = fixed_points(dist);
    for (const auto& fp : fps.points) rep.fixed_points.push_back(fp.location);
    bool shape = fps.points.size() == 3 && fps.points[0].location == 0.0 && fps.points[2].location == 1.0 &&
                 std::abs(fps.points[1].location - t) <= 1e-9;
    if (!shape) {
        double witness = fps.points.empty() ? t : fps.points.front().location;
        for (const auto& fp : fps.points)
            if (fp.location != 0.0 && fp.location != 1.0 && std::abs(fp.location - t) > 1e-9) witness = fp.location;
        rep.violations.push_back({"fixed points are exactly 0, t, 1", 0.0, 1.0, witness,
                                  static_cast<double>(fps.points.size())});
    }
    return rep;
}

} // namespace amptree
