// Empirical constants for the streaming constructions.
//
// wild: for each margin eps, the smallest k/n (over powers of two) whose final
// item is correct with rate >= 1 - delta; the slope of log(k/n) against
// log(1/eps) estimates the exponent c.
// exponential: final-item accuracy at alpha = exponential_alpha(eps, delta, c)
// for a range of c.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>

#include "amptree/io.hpp"

using namespace amptree;

namespace {

std::size_t wild_inputs(double eps, double delta) {
    double need = std::log(1.0 / (8.0 * eps * delta)) * std::max(1.0 / (eps * eps), 1.0 / (delta * delta));
    return static_cast<std::size_t>(std::ceil(need)) + 1;
}

double accuracy(const TreeDistribution& dist, double t, double eps, std::size_t n, std::size_t k, double alpha,
                std::size_t trials, std::uint64_t seed, unsigned threads) {
    StreamConfig cfg;
    cfg.input = InputSpec::with_fraction(n, t - eps);
    cfg.k = k;
    cfg.alpha = alpha;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.threads = threads;
    return simulate_stream(dist, cfg).final_accuracy(false);
}

// least-squares slope and intercept
std::pair<double, double> fit(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calibrate streaming constants"};
    std::vector<double> epsilons{0.2, 0.1, 0.05};
    std::vector<double> cs{0.5, 1, 2, 4, 8};
    double delta = 0.1, t = 0.5;
    std::size_t trials = 100, max_ratio = 1 << 14, exp_inputs = 1500, exp_items = 20000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    app.add_option("--epsilons", epsilons, "input margins");
    app.add_option("--delta", delta, "target error");
    app.add_option("--trials", trials, "trials per point");
    app.add_option("--max-ratio", max_ratio, "largest k/n tried");
    app.add_option("--c", cs, "exponential constants to scan");
    app.add_option("--exp-inputs", exp_inputs, "inputs for the exponential scan");
    app.add_option("--exp-items", exp_items, "items for the exponential scan");
    app.add_option("--seed", seed, "root seed");
    app.add_option("--threads", threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    try {
        const TreeDistribution dist = linear_threshold(t);
        Json wild = Json::array();
        std::vector<double> lx, ly;
        for (double eps : epsilons) {
            std::size_t n = wild_inputs(eps, delta);
            std::size_t found = 0;
            double acc = 0.0;
            for (std::size_t ratio = 1; ratio <= max_ratio; ratio *= 2) {
                acc = accuracy(dist, t, eps, n, n * ratio, 0.0, trials, seed, threads);
                if (acc >= 1.0 - delta) {
                    found = ratio;
                    break;
                }
            }
            wild.push_back({{"epsilon", eps}, {"n", n}, {"k_over_n", found ? Json(found) : Json(nullptr)},
                            {"accuracy", acc}});
            if (found) {
                lx.push_back(std::log(1.0 / eps));
                ly.push_back(std::log(static_cast<double>(found)));
            }
        }
        Json out{{"delta", delta}, {"trials", trials}, {"wild", wild}};
        if (lx.size() >= 2) {
            auto [c, logC] = fit(lx, ly);
            out["wild_c"] = c;
            out["wild_C"] = std::exp(logC);
        } else {
            out["wild_c"] = nullptr;
        }

        Json ex = Json::array();
        const double eps = 0.1;
        for (double c : cs) {
            double alpha = exponential_alpha(eps, delta, c);
            ex.push_back({{"c", c},
                          {"alpha", alpha},
                          {"accuracy", accuracy(dist, t, eps, exp_inputs, exp_items, alpha, trials, seed, threads)}});
        }
        out["exponential"] = ex;
        std::cout << std::setw(2) << out << '\n';
    } catch (const std::exception& e) {
        std::cerr << Json{{"status", "error"}, {"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    }
    return 0;
}
