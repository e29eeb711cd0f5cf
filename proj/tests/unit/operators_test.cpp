#include <cmath>
#include <random>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"

using namespace fraclab;

namespace {

const FunctionSpec kUnit = IndicatorBall{Point{0.0}, 1.0};

OperatorParams params(double theta, double alpha = 0.5, int d = 1) {
    OperatorParams p;
    p.alpha = alpha;
    p.d = d;
    p.theta = theta;
    return p;
}

bool close(const Estimate& a, const Estimate& b, double rel) {
    const double tol = rel * std::max(std::abs(a.value), std::abs(b.value)) + a.error_bound + b.error_bound +
                       3.0 * std::hypot(a.std_error, b.std_error) + 1e-12;
    return std::abs(a.value - b.value) <= tol;
}

}  // namespace

TEST_CASE("bilinear integral of two unit indicators at the origin is 4 sqrt 2") {
    const Estimate e = eval_bilinear(kUnit, kUnit, params(0.5), Point{0.0}, QuadratureConfig{});
    CHECK(e.value == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(e.converged);
}

TEST_CASE("Riesz potential and B of unit indicators at the origin") {
    CHECK(eval_riesz(kUnit, 0.5, 1, Point{0.0}, QuadratureConfig{}).value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(eval_B(kUnit, kUnit, 0.5, 1, Point{0.0}, QuadratureConfig{}).value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("two-dimensional Monte Carlo Riesz potential of the unit disc") {
    QuadratureConfig cfg;
    cfg.method = Method::MonteCarloRadial;
    cfg.samples = 200000;
    const FunctionSpec disc = IndicatorBall{Point{0.0, 0.0}, 1.0};
    const Estimate e = eval_riesz(disc, 1.0, 2, Point{0.0, 0.0}, cfg);
    CHECK(std::abs(e.value - 2.0 * kPi) <= 3.0 * e.std_error + 1e-9);
    const Estimate off = eval_riesz(disc, 1.0, 2, Point{0.5, 0.0}, cfg);
    const Estimate again = eval_riesz(disc, 1.0, 2, Point{0.5, 0.0}, cfg);
    CHECK(off.value == again.value);
    CHECK(off.std_error > 0.0);
    set_thread_count(3);
    const Estimate threaded = eval_riesz(disc, 1.0, 2, Point{0.5, 0.0}, cfg);
    set_thread_count(1);
    CHECK(threaded.value == off.value);
    CHECK(threaded.std_error == off.std_error);
}

TEST_CASE("tensor grid and Monte Carlo agree in two dimensions") {
    const FunctionSpec f = IndicatorBox{Point{-0.5, -0.5}, Point{1.0, 1.0}};
    const FunctionSpec g = IndicatorBall{Point{0.2, 0.0}, 0.6};
    QuadratureConfig grid;
    grid.method = Method::TensorGrid;
    grid.samples = 400000;
    grid.rel_tol = 1e-3;
    QuadratureConfig mc;
    mc.method = Method::MonteCarloRadial;
    mc.samples = 400000;
    const Estimate a = eval_bilinear(f, g, params(0.3, 1.0, 2), Point{0.1, 0.1}, grid);
    const Estimate b = eval_bilinear(f, g, params(0.3, 1.0, 2), Point{0.1, 0.1}, mc);
    CHECK(close(a, b, 5e-3));
}

TEST_CASE("endpoint thetas reduce to a product with the Riesz potential") {
    const FunctionSpec f = IndicatorBall{Point{0.3}, 0.7};
    const FunctionSpec g = IndicatorBox{Point{-0.4}, Point{1.0}};
    const Point x{0.2};
    const QuadratureConfig cfg;
    CHECK(eval_bilinear(f, g, params(0.0), x, cfg).value ==
          doctest::Approx(evaluate(g, x) * eval_riesz(f, 0.5, 1, x, cfg).value));
    CHECK(eval_bilinear(f, g, params(1.0), x, cfg).value ==
          doctest::Approx(evaluate(f, x) * eval_riesz(g, 0.5, 1, x, cfg).value));
}

TEST_CASE("swapping the functions mirrors theta") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0), th(0.0, 1.0), rad(0.1, 1.0);
    for (int k = 0; k < 10; ++k) {
        const FunctionSpec f = IndicatorBall{Point{u(rng)}, rad(rng)};
        const FunctionSpec g = IndicatorBall{Point{u(rng)}, rad(rng)};
        const double theta = th(rng);
        const Point x{u(rng)};
        const Estimate a = eval_bilinear(f, g, params(theta), x, QuadratureConfig{});
        const Estimate b = eval_bilinear(g, f, params(1.0 - theta), x, QuadratureConfig{});
        CHECK(close(a, b, 1e-6));
    }
}

TEST_CASE("dyadic pieces of unit indicators") {
    OperatorParams p = params(0.5);
    p.j = 0;
    CHECK(eval_dyadic(kUnit, kUnit, p, Point{0.0}, QuadratureConfig{}).value == doctest::Approx(2.0).epsilon(1e-9));
    p.j = 3;
    CHECK(eval_dyadic(kUnit, kUnit, p, Point{0.0}, QuadratureConfig{}).value == doctest::Approx(4.0).epsilon(1e-9));
    p.j = -2;
    CHECK(eval_dyadic(kUnit, kUnit, p, Point{0.0}, QuadratureConfig{}).value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("dyadic superposition bounds the full integral") {
    const FunctionSpec f = IndicatorBall{Point{0.25}, 0.5};
    const FunctionSpec g = IndicatorBox{Point{-1.0}, Point{1.5}};
    const Superposition s = dyadic_superposition(f, g, params(0.4), Point{0.1}, -20, 4, QuadratureConfig{});
    CHECK(s.covers_support);
    CHECK(s.lhs.value <= s.rhs.value + s.inner_tail + s.lhs.error_bound + s.rhs.error_bound);
    CHECK(s.lhs.value >= 0.25 * s.rhs.value);
}

TEST_CASE("the Riesz potential of h grows at the origin") {
    const FunctionSpec h = make_h(1, 0.5);
    const QuadratureConfig cfg;
    double prev = 0.0;
    for (int k = 4; k <= 10; k += 2) {
        const Estimate e = eval_riesz(h, 0.5, 1, Point{std::ldexp(1.0, -k)}, cfg);
        CHECK(e.converged);
        CHECK(e.value > prev);
        prev = e.value;
    }
}

TEST_CASE("stress tensor is symmetric and positive") {
    const FunctionSpec rho = IndicatorBall{Point{0.0, 0.0}, 1.0};
    QuadratureConfig cfg;
    cfg.method = Method::TensorGrid;
    cfg.samples = 20000;
    cfg.rel_tol = 1e-2;
    const StressTensor S = eval_stress_tensor(rho, 1.0, 2, Point{0.3, 0.1}, cfg);
    CHECK(S.at(0, 1).value == doctest::Approx(S.at(1, 0).value));
    CHECK(S.at(0, 0).value > 0.0);
    CHECK(S.at(1, 1).value > 0.0);
    CHECK(S.at(0, 0).value * S.at(1, 1).value >= S.at(0, 1).value * S.at(1, 0).value);
}

TEST_CASE("divergence identity residual shrinks with the grid") {
    const DivergenceReport a = check_divergence_identity(gaussian_density(512), 0.5, 1, QuadratureConfig{});
    const DivergenceReport b = check_divergence_identity(gaussian_density(1024), 0.5, 1, QuadratureConfig{});
    CHECK(a.relative_l2 < 1e-3);
    CHECK(b.relative_l2 < a.relative_l2);
    CHECK_THROWS_AS(check_divergence_identity(gaussian_density(32), 0.5, 1, QuadratureConfig{}), ValidationError);
}

TEST_CASE("operator inputs are validated") {
    const QuadratureConfig cfg;
    CHECK_THROWS_AS(eval_bilinear(kUnit, kUnit, params(1.5), Point{0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(eval_bilinear(kUnit, kUnit, params(0.5, 1.0), Point{0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(eval_riesz(kUnit, 0.5, 2, Point{0.0}, cfg), ValidationError);
    QuadratureConfig det2;
    CHECK_THROWS_AS(eval_riesz(IndicatorBall{Point{0.0, 0.0}, 1.0}, 0.5, 2, Point{0.0, 0.0}, det2), ValidationError);
    CHECK(eval_bilinear(zero_function(1), kUnit, params(0.5), Point{0.0}, cfg).value == 0.0);
}

TEST_CASE("theta next to an endpoint raises a warning") {
    drain_warnings();
    eval_bilinear(kUnit, kUnit, params(1e-8), Point{0.0}, QuadratureConfig{});
    CHECK(drain_warnings().size() == 1);
    eval_bilinear(kUnit, kUnit, params(0.0), Point{0.0}, QuadratureConfig{});
    CHECK(drain_warnings().empty());
}
