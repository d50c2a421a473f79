#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "amptree/errors.hpp"
#include "amptree/tree.hpp"

namespace amptree {

// Anything with a value and a derivative on [0, 1].
template <class F>
concept UnitMap = requires(const F& f, double p) {
    { f.value(p) } -> std::convertible_to<double>;
    { f.slope(p) } -> std::convertible_to<double>;
};

class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    static Polynomial from_integer(const IntegerPolynomial& p);
    static Polynomial identity() { return Polynomial({0.0, 1.0}); }

    const std::vector<double>& coefficients() const { return coeffs_; }
    double coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double value(double p) const;
    double slope(double p) const;
    // Running error bound for value(p) under Horner evaluation.
    double value_error(double p) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;  // trailing zeros trimmed
};

// Horner evaluation.
inline double eval(const Polynomial& f, double p) { return f.value(p); }

// Weights must be >= 0 and sum to 1 within 1e-12.
Polynomial mix(std::span<const double> weights, std::span<const Polynomial> polys);
void check_weights(std::span<const double> weights);

Polynomial derivative(const Polynomial& f);
Polynomial compose(const Polynomial& f, const Polynomial& g);
Polynomial operator-(const Polynomial& a, const Polynomial& b);

// (p, f(p), ..., f^(k)(p)) by pointwise evaluation.
template <UnitMap F>
std::vector<double> iterate_point(const F& f, double p, int k) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    out.push_back(p);
    for (int i = 0; i < k; ++i) {
        p = f.value(p);
        out.push_back(p);
    }
    return out;
}

enum class FixedPointClass { Attractive, NonAttractive, Marginal };
std::string to_string(FixedPointClass c);

struct FixedPoint {
    double location;
    double derivative;
    FixedPointClass cls;
};

struct FixedPointReport {
    std::vector<FixedPoint> points;

    std::vector<FixedPoint> interior() const;
    std::size_t size() const { return points.size(); }
};

inline constexpr double kClassTolerance = 1e-7;
FixedPointClass classify_derivative(double derivative, double tol = kClassTolerance);

namespace detail {
// noise[i] bounds the rounding error of h[i]; |h| at or below it counts as zero.
std::vector<double> scan_roots(const std::vector<double>& xs, const std::vector<double>& h,
                               const std::vector<double>& noise, const std::function<double(double)>& residual,
                               const std::function<double(double)>& residual_noise, double tol);

template <class F>
double eval_noise(const F& f, double p) {
    if constexpr (requires { f.value_error(p); })
        return f.value_error(p) + 0x1p-53 * std::abs(p);
    else
        return 0.0;
}
}

// Sign scan of f(p)-p on a uniform grid followed by bisection.
template <UnitMap F>
FixedPointReport fixed_points(const F& f, int grid = 10000, double tol = 1e-12) {
    if (grid < 1) throw RangeError("grid must be positive");
    std::vector<double> xs(grid + 1), h(grid + 1), noise(grid + 1);
    bool all_fixed = true;
    for (int i = 0; i <= grid; ++i) {
        xs[i] = static_cast<double>(i) / grid;
        h[i] = f.value(xs[i]) - xs[i];
        noise[i] = detail::eval_noise(f, xs[i]);
        if (std::abs(h[i]) > std::max(1e-14, noise[i])) all_fixed = false;
    }
    if (all_fixed) throw DegenerateInputError("every point fixed");
    auto residual = [&f](double x) { return f.value(x) - x; };
    auto residual_noise = [&f](double x) { return detail::eval_noise(f, x); };
    FixedPointReport report;
    for (double x : detail::scan_roots(xs, h, noise, residual, residual_noise, tol)) {
        double d = f.slope(x);
        report.points.push_back({x, d, classify_derivative(d)});
    }
    return report;
}

// g with f(p) - p = p(1-p)(p-t) g(p), by synthetic division.
Polynomial divergence_ratio(const Polynomial& f, double t);

} // namespace amptree
