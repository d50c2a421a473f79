#include "amptree/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace amptree {

namespace {

void trim(std::vector<double>& c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.empty()) c.push_back(0.0);
}

} // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(coeffs_); }

Polynomial Polynomial::from_integer(const IntegerPolynomial& p) {
    std::vector<double> c(p.coeffs.begin(), p.coeffs.end());
    return Polynomial(std::move(c));
}

double Polynomial::value(double p) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * p + *it;
    return acc;
}

double Polynomial::value_error(double p) const {
    double abs_sum = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) abs_sum = abs_sum * std::abs(p) + std::abs(*it);
    return 2.0 * static_cast<double>(coeffs_.size()) * 0x1p-53 * abs_sum;
}

double Polynomial::slope(double p) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * p + static_cast<double>(i) * coeffs_[i];
    return acc;
}

void check_weights(std::span<const double> weights) {
    if (weights.empty()) throw WeightError("no weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw WeightError("negative or NaN weight " + std::to_string(w));
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw WeightError("weights sum to " + std::to_string(sum));
}

Polynomial mix(std::span<const double> weights, std::span<const Polynomial> polys) {
    if (weights.size() != polys.size()) throw WeightError("weight count differs from polynomial count");
    check_weights(weights);
    std::size_t n = 0;
    for (const auto& f : polys) n = std::max(n, f.coefficients().size());
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < polys.size(); ++k)
        for (std::size_t i = 0; i < polys[k].coefficients().size(); ++i)
            c[i] += weights[k] * polys[k].coefficients()[i];
    return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& f) {
    const auto& a = f.coefficients();
    if (a.size() <= 1) return Polynomial();
    std::vector<double> c(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) c[i - 1] = static_cast<double>(i) * a[i];
    return Polynomial(std::move(c));
}

namespace {

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

} // namespace

// Degree of the result is deg f * deg g.
Polynomial compose(const Polynomial& f, const Polynomial& g) {
    const auto& a = f.coefficients();
    std::vector<double> acc{a.back()};
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        acc = multiply(acc, g.coefficients());
        acc[0] += a[i];
    }
    return Polynomial(std::move(acc));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coefficients().size(), b.coefficients().size()), 0.0);
    for (std::size_t i = 0; i < a.coefficients().size(); ++i) c[i] += a.coefficients()[i];
    for (std::size_t i = 0; i < b.coefficients().size(); ++i) c[i] -= b.coefficients()[i];
    return Polynomial(std::move(c));
}

std::string to_string(FixedPointClass c) {
    switch (c) {
    case FixedPointClass::Attractive: return "ATTRACTIVE";
    case FixedPointClass::NonAttractive: return "NON_ATTRACTIVE";
    case FixedPointClass::Marginal: return "MARGINAL";
    }
    return "MARGINAL";
}

FixedPointClass classify_derivative(double derivative, double tol) {
    if (derivative < 1.0 - tol) return FixedPointClass::Attractive;
    if (derivative > 1.0 + tol) return FixedPointClass::NonAttractive;
    return FixedPointClass::Marginal;
}

std::vector<FixedPoint> FixedPointReport::interior() const {
    std::vector<FixedPoint> out;
    for (const auto& fp : points)
        if (fp.location > 0.0 && fp.location < 1.0) out.push_back(fp);
    return out;
}

namespace detail {

std::vector<double> scan_roots(const std::vector<double>& xs, const std::vector<double>& h,
                               const std::vector<double>& noise, const std::function<double(double)>& residual,
                               const std::function<double(double)>& residual_noise, double tol) {
    constexpr double kZero = 1e-15;
    constexpr double kEndpoint = 1e-12;
    auto sign_at = [&](double v, double err) { return std::abs(v) <= std::max(kZero, err) ? 0 : (v > 0 ? 1 : -1); };
    auto sign_grid = [&](std::size_t i) { return sign_at(h[i], noise[i]); };
    const std::size_t n = xs.size() - 1;
    // Grid zeros touching an endpoint belong to a high-order endpoint root
    // (e.g. f(p) - p = -(1-p)^6 p), not to separate interior fixed points.
    std::size_t first = 0, last = n;
    while (first < n && sign_grid(first) == 0) ++first;
    while (last > first && sign_grid(last) == 0) --last;
    std::vector<double> roots;
    if (std::abs(h[0]) <= kEndpoint) roots.push_back(0.0);
    for (std::size_t i = first; i < last; ++i) {
        if (sign_grid(i) == 0) {
            // collapse a run of grid zeros to its smallest residual
            std::size_t j = i, best = i;
            while (j < last && sign_grid(j) == 0) {
                if (std::abs(h[j]) < std::abs(h[best])) best = j;
                ++j;
            }
            roots.push_back(xs[best]);
            i = j - 1;
            continue;
        }
        int sl = sign_grid(i), sr = sign_grid(i + 1);
        if (sr == 0 || sl == sr) continue;
        double lo = xs[i], hi = xs[i + 1];
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            int sm = sign_at(residual(mid), residual_noise(mid));
            if (sm == 0) {
                lo = hi = mid;
                break;
            }
            (sm == sl ? lo : hi) = mid;
        }
        roots.push_back(0.5 * (lo + hi));
    }
    if (std::abs(h[n]) <= kEndpoint) roots.push_back(1.0);
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > tol) out.push_back(r);
    return out;
}

} // namespace detail

Polynomial divergence_ratio(const Polynomial& f, double t) {
    constexpr double kRemainder = 1e-8;
    auto q = (f - Polynomial::identity()).coefficients();
    auto fail = [&](const char* factor, double rem) {
        throw InconsistentFixedPointError(std::string("f(p)-p is not divisible by ") + factor +
                                          " (remainder " + std::to_string(rem) + ")");
    };
    // divide by p
    if (std::abs(q[0]) > kRemainder) fail("p", q[0]);
    q.erase(q.begin());
    if (q.empty()) q.push_back(0.0);
    // synthetic division by (p - r); returns quotient, checks remainder
    auto divide = [&](std::vector<double> c, double r, const char* factor) {
        std::size_t n = c.size();
        if (n < 2) fail(factor, c.empty() ? 0.0 : c[0]);
        std::vector<double> out(n - 1);
        double carry = c[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            out[i] = carry;
            carry = c[i] + carry * r;
        }
        if (std::abs(carry) > kRemainder) fail(factor, carry);
        return out;
    };
    q = divide(q, t, "(p - t)");
    q = divide(q, 1.0, "(1 - p)");
    for (double& c : q) c = -c;
    return Polynomial(std::move(q));
}

} // namespace amptree
