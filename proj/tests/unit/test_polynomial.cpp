#include <doctest.h>

#include "amptree/catalog.hpp"
#include "amptree/polynomial.hpp"

using namespace amptree;

namespace {

Polynomial from_tree(const AndOrTree& t) { return Polynomial::from_integer(tree_polynomial(t)); }

} // namespace

TEST_CASE("Horner evaluation") {
    CHECK(Polynomial::identity().value(0.3) == 0.3);
    Polynomial v({0, 0, 4, -4, 1});
    CHECK(v.value(0.5) == doctest::Approx(0.5625));
    Polynomial c({0.25, 3, 1});
    CHECK(c.value(0.0) == 0.25);
    CHECK(eval(c, 1.0) == doctest::Approx(4.25));
    CHECK(Polynomial({1, 2, 0, 0}).degree() == 1);
}

TEST_CASE("mix follows coefficient-wise weighting") {
    Polynomial t1 = from_tree(linear_block_t1()), t2 = from_tree(linear_block_t2());
    std::vector<double> w{0.3, 0.7};
    std::vector<Polynomial> ps{t1, t2};
    Polynomial m = mix(w, ps);
    REQUIRE(m.degree() == 3);
    CHECK(m.coefficient(0) == doctest::Approx(0.0));
    CHECK(m.coefficient(1) == doctest::Approx(0.7));
    CHECK(m.coefficient(2) == doctest::Approx(1.3));
    CHECK(m.coefficient(3) == doctest::Approx(-1.0));

    std::vector<double> one{1.0};
    std::vector<Polynomial> single{t1};
    CHECK(mix(one, single) == t1);
}

TEST_CASE("soft threshold mixture is the average of A_6 and B_6") {
    auto a = tree_polynomial(build_ak(6)), b = tree_polynomial(build_bk(6));
    auto dist = soft_threshold(6);
    REQUIRE(dist.mixture().has_value());
    const auto& m = *dist.mixture();
    for (std::size_t i = 0; i <= 12; ++i) {
        double want = 0.5 * (i < a.coeffs.size() ? a.coeffs[i] : 0) + 0.5 * (i < b.coeffs.size() ? b.coeffs[i] : 0);
        CHECK(m.coefficient(i) == doctest::Approx(want));
    }
}

TEST_CASE("weight validation") {
    std::vector<Polynomial> ps{Polynomial::identity(), Polynomial::identity()};
    std::vector<double> bad_sum{0.5, 0.6}, negative{1.2, -0.2}, ok{0.5, 0.5 + 5e-13};
    CHECK_THROWS_AS(mix(bad_sum, ps), WeightError);
    CHECK_THROWS_AS(mix(negative, ps), WeightError);
    CHECK_NOTHROW(mix(ok, ps));
    std::vector<double> short_w{1.0};
    CHECK_THROWS(mix(short_w, ps));
}

TEST_CASE("derivative and compose") {
    Polynomial sq({0, 0, 1});
    CHECK(compose(sq, sq) == Polynomial({0, 0, 0, 0, 1}));
    CHECK(derivative(Polynomial({1, 2, 3})) == Polynomial({2, 6}));
    Polynomial f({0, 0, 4, -4, 1});
    for (double p : {0.1, 0.5, 0.9}) CHECK(derivative(f).value(p) == doctest::Approx(f.slope(p)));
    auto g = Polynomial({0, 2, -1});
    for (double p : {0.1, 0.5, 0.9}) CHECK(compose(f, g).value(p) == doctest::Approx(f.value(g.value(p))));
}

TEST_CASE("iterate_point") {
    auto seq = iterate_point(Polynomial::identity(), 0.4, 5);
    CHECK(seq.size() == 6);
    for (double x : seq) CHECK(x == 0.4);
    auto v = iterate_point(Polynomial({0, 0, 4, -4, 1}), 0.5, 6);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
    CHECK(v.back() > 0.99);
}

TEST_CASE("fixed points of the Valiant polynomial") {
    auto rep = fixed_points(Polynomial({0, 0, 4, -4, 1}));
    REQUIRE(rep.size() == 3);
    CHECK(rep.points[0].location == 0.0);
    CHECK(rep.points[0].cls == FixedPointClass::Attractive);
    CHECK(rep.points[1].location == doctest::Approx(2.0 - (1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-10));
    CHECK(rep.points[1].cls == FixedPointClass::NonAttractive);
    CHECK(rep.points[2].location == 1.0);
    CHECK(rep.points[2].cls == FixedPointClass::Attractive);
}

TEST_CASE("fixed points of the linear mixture and one_step") {
    auto rep = fixed_points(linear_threshold(0.3));
    REQUIRE(rep.size() == 3);
    CHECK(rep.points[1].location == doctest::Approx(0.3).epsilon(1e-10));

    auto os = fixed_points(one_step(0.5));
    auto in = os.interior();
    REQUIRE(in.size() == 1);
    CHECK(in[0].location == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(in[0].derivative == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(in[0].cls == FixedPointClass::Attractive);
    CHECK(os.points.front().cls == FixedPointClass::NonAttractive);
}

TEST_CASE("fixed points are strictly increasing and classified by derivative") {
    for (const auto& d : {valiant(), quad4(0.45), soft_threshold(6), quad_k(0.2), linear_threshold(0.8)}) {
        auto rep = fixed_points(d);
        for (std::size_t i = 1; i < rep.size(); ++i) CHECK(rep.points[i].location > rep.points[i - 1].location);
        for (const auto& fp : rep.points) CHECK(fp.cls == classify_derivative(fp.derivative));
    }
    CHECK(classify_derivative(1.0 + 5e-8) == FixedPointClass::Marginal);
    CHECK(classify_derivative(1.0 + 2e-7) == FixedPointClass::NonAttractive);
    CHECK(classify_derivative(1.0 - 2e-7) == FixedPointClass::Attractive);
}

TEST_CASE("identity is rejected") {
    CHECK_THROWS_AS(fixed_points(Polynomial::identity()), DegenerateInputError);
}

TEST_CASE("high-order endpoint contact yields no spurious interior roots") {
    // p (1 - (1-p)^6): f(p) - p = -p (1-p)^6
    auto x = AndOrTree::leaf();
    auto f = from_tree(AndOrTree::conj(x, or_cascade(6)));
    auto rep = fixed_points(f);
    CHECK(rep.interior().empty());
    CHECK(rep.size() == 2);
}

TEST_CASE("divergence ratio") {
    auto lin = *linear_threshold(0.3).mixture();
    auto g = divergence_ratio(lin, 0.3);
    for (double p : {0.0, 0.3, 0.6, 1.0}) CHECK(g.value(p) == doctest::Approx(1.0));

    auto q4 = *quad4(0.5).mixture();
    auto g4 = divergence_ratio(q4, 0.5);
    CHECK(g4.value(0.0) == doctest::Approx(2.0));
    for (double p : {0.1, 0.5, 0.9}) CHECK(g4.value(p) == doctest::Approx(2.0));

    for (double t : {0.4, 0.45, 0.6}) {
        auto q = *quad4(t).mixture();
        auto gt = divergence_ratio(q, t);
        for (double p : {0.05, 0.4, 0.85}) CHECK(gt.value(p) == doctest::Approx(1.0 / t + p * (2 * t - 1) / ((1 - t) * t)));
    }
    CHECK_THROWS_AS(divergence_ratio(lin, 0.4), InconsistentFixedPointError);
}

TEST_CASE("B_k, B_{k+1} mixtures satisfy g >= 1/t") {
    for (int k = 2; k <= 5; ++k) {
        for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
            std::vector<double> w{alpha, 1.0 - alpha};
            std::vector<Polynomial> ps{from_tree(build_bk(k)), from_tree(build_bk(k + 1))};
            Polynomial f = mix(w, ps);
            auto in = fixed_points(f).interior();
            REQUIRE(in.size() == 1);
            double t = in[0].location;
            auto g = divergence_ratio(f, t);
            double lo = 1e9;
            for (int i = 0; i <= 1000; ++i) lo = std::min(lo, g.value(i / 1000.0));
            CAPTURE(k);
            CAPTURE(alpha);
            CHECK(lo >= 1.0 / t - 1e-9);
        }
    }
}
