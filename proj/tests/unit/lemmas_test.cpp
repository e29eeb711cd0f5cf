#include <cmath>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/lemmas.hpp"
#include "fraclab/operators.hpp"

using namespace fraclab;

namespace {

FunctionSpec iv(double lo, double hi) { return IndicatorBox{Point{lo}, Point{hi - lo}}; }

// Brute-force double midpoint sum of (int |I_j(x)|^q dx)^{1/q} over x in [a, b].
double riemann_lebesgue(const FunctionSpec& f, const FunctionSpec& g, double theta, int j, double q, double a,
                        double b, int nx, int ny) {
    const double R = std::ldexp(1.0, j);
    const double hx = (b - a) / nx, hy = 2.0 * R / ny;
    double total = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const double x = a + (ix + 0.5) * hx;
        double inner = 0.0;
        for (int iy = 0; iy < ny; ++iy) {
            const double y = -R + (iy + 0.5) * hy;
            inner += evaluate(f, Point{x + (theta - 1.0) * y}) * evaluate(g, Point{x + theta * y});
        }
        total += std::pow(inner * hy, q);
    }
    return std::pow(total * hx, 1.0 / q);
}

}  // namespace

TEST_CASE("dyadic profile matches quadrature of the dyadic piece") {
    const FunctionSpec f = iv(-1.0, 0.5), g = iv(0.0, 0.25);
    for (double theta : {0.0, 0.3, 0.5, 1.0}) {
        for (int j : {-1, 0, 2}) {
            const DyadicProfile P(f, g, theta, j);
            OperatorParams op;
            op.theta = theta;
            op.j = j;
            for (double x : {-0.7, -0.2, 0.1, 0.4, 1.3}) {
                CAPTURE(theta);
                CAPTURE(j);
                CAPTURE(x);
                const Estimate e = eval_dyadic(f, g, op, Point{x}, QuadratureConfig{});
                CHECK(P(x) == doctest::Approx(e.value).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("exact profile norms agree with a two-dimensional Riemann sum") {
    const FunctionSpec f = iv(0.0, 1.0), g = iv(2.0, 2.5);
    const double theta = 0.25;
    const int j = 2;
    const DyadicProfile P(f, g, theta, j);
    for (double q : {1.0, 0.5, 0.6}) {
        CAPTURE(q);
        const double exact = P.lebesgue(q);
        const double approx = riemann_lebesgue(f, g, theta, j, q, -6.0, 8.0, 1400, 4000);
        CHECK(exact == doctest::Approx(approx).epsilon(5e-3));
    }
    CHECK(P.lebesgue_on(1.0, {{0.0, 100.0}}) + P.lebesgue_on(1.0, {{-100.0, 0.0}}) ==
          doctest::Approx(P.lebesgue(1.0)));
    CHECK(P.integral_on({{-100.0, 100.0}}) == doctest::Approx(P.lebesgue(1.0)));
}

TEST_CASE("L1 of the dyadic piece never exceeds the product of L1 norms") {
    const LemmaReport r = lemma_suite("aux0", default_suite());
    REQUIRE(r.items.size() == 1);
    CHECK(r.pass);
    CHECK(r.items[0].best_constant <= 1.0 + 1e-9);
    CHECK(r.items[0].constant_by_theta.size() == 5);
}

TEST_CASE("every group has finite constants on the default suite") {
    const auto suite = default_suite();
    CHECK(suite.size() == 375);
    const LemmaReport r = lemma_suite("all", suite);
    CHECK(r.items.size() == 10);
    CHECK(r.pass);
    for (const auto& item : r.items) {
        CAPTURE(inequality_name(item.which));
        CHECK(std::isfinite(item.best_constant));
        CHECK(item.best_constant > 0.0);
    }
}

TEST_CASE("zero suite gives zero left-hand sides") {
    const LemmaReport r = lemma_suite("dyadic_basic", suite_by_name("zero"));
    CHECK(r.pass);
    for (const auto& item : r.items)
        for (const auto& row : item.rows) CHECK(row.lhs == 0.0);
}

TEST_CASE("names round trip and unknown names fail") {
    for (const auto k : inequalities_for("all")) CHECK(inequality_from_name(inequality_name(k)) == k);
    CHECK(inequalities_for("dyadic_lorentz").size() == 2);
    CHECK_THROWS_AS(inequalities_for("nope"), ValidationError);
    CHECK_THROWS_AS(suite_by_name("nope"), ValidationError);
    CHECK_THROWS_AS(intervals_of(make_h(1, 0.5)), ValidationError);
    CHECK_FALSE(theta_uniform(Inequality::L000));
    CHECK(theta_uniform(Inequality::Aux0));
}
