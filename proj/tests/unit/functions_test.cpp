#include <cmath>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/function_json.hpp"
#include "fraclab/functions.hpp"
#include "fraclab/quadrature.hpp"

using namespace fraclab;

TEST_CASE("indicators evaluate on closed sets") {
    const FunctionSpec ball = IndicatorBall{Point{0.0}, 1.0};
    CHECK(evaluate(ball, Point{1.0}) == 1.0);
    CHECK(evaluate(ball, Point{-1.0}) == 1.0);
    CHECK(evaluate(ball, Point{1.0000001}) == 0.0);
    const FunctionSpec box = IndicatorBox{Point{0.0, 0.0}, Point{1.0, 2.0}};
    CHECK(evaluate(box, Point{0.5, 1.5}) == 1.0);
    CHECK(evaluate(box, Point{1.5, 1.5}) == 0.0);
}

TEST_CASE("simple functions add overlapping terms") {
    SimpleFunction s;
    s.dim = 1;
    s.terms.push_back({2.0, IndicatorBall{Point{0.0}, 1.0}});
    s.terms.push_back({0.5, IndicatorBox{Point{0.5}, Point{1.0}}});
    const FunctionSpec f = s;
    CHECK(evaluate(f, Point{0.0}) == 2.0);
    CHECK(evaluate(f, Point{0.75}) == 2.5);
    CHECK(evaluate(f, Point{1.25}) == 0.5);
    CHECK(evaluate(f, Point{2.0}) == 0.0);
}

TEST_CASE("h has the stated exponents and cutoff") {
    const FunctionSpec h = make_h(1, 0.5);
    const auto& r = std::get<RadialPowerLog>(h);
    CHECK(r.kappa == doctest::Approx(0.75));
    CHECK(r.cutoff == doctest::Approx(std::exp(-1.0)));
    const double x = 0.01;
    CHECK(evaluate(h, Point{x}) == doctest::Approx(std::pow(x, -0.5) * std::pow(std::log(1.0 / x), -0.75)));
    CHECK(evaluate(h, Point{0.5}) == 0.0);
    CHECK(is_unbounded(h));
    CHECK(std::get<RadialPowerLog>(make_h(2, 1.0)).kappa == doctest::Approx(0.75));
}

TEST_CASE("the bump has unit mass and dilations keep the L^p norm") {
    QuadratureConfig cfg;
    cfg.method = Method::TensorGrid;
    cfg.samples = 1 << 20;
    cfg.rel_tol = 1e-9;
    const FunctionSpec phi = SmoothBump{1, 1.0, 1.0, Point(1)};
    const Box box{Point{-0.125}, Point{0.125}};
    const Estimate mass = integrate_box([&](const Point& y) { return evaluate(phi, y); }, box, cfg);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-6));

    const FunctionSpec psi = SmoothBump{1, 0.01, 2.0, Point(1)};
    const Box small{Point{-0.00125}, Point{0.00125}};
    const Estimate sq =
        integrate_box([&](const Point& y) { return std::pow(evaluate(psi, y), 2.0); }, small, cfg);
    const Estimate sq1 =
        integrate_box([&](const Point& y) { return std::pow(evaluate(SmoothBump{1, 1.0, 2.0, Point(1)}, y), 2.0); },
                      box, cfg);
    CHECK(sq.value == doctest::Approx(sq1.value).epsilon(1e-6));
}

TEST_CASE("supports and breakpoints") {
    const FunctionSpec ball = IndicatorBall{Point{1.0}, 0.5};
    const Box b = support_box(ball);
    CHECK(b.lo[0] == 0.5);
    CHECK(b.hi[0] == 1.5);
    const auto bps = ray_breakpoints(ball, Point{0.0}, Point{1.0});
    REQUIRE(bps.size() == 2);
    CHECK(bps[0].s == doctest::Approx(0.5));
    CHECK(bps[1].s == doctest::Approx(1.5));
    const auto hb = ray_breakpoints(make_h(1, 0.5), Point{-0.25}, Point{1.0});
    bool singular = false;
    for (const auto& p : hb)
        if (p.singular) singular = std::abs(p.s - 0.25) < 1e-12;
    CHECK(singular);
    CHECK(is_zero(zero_function(2)));
    CHECK(support_box(zero_function(1)).volume() == 0.0);
}

TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(validate(FunctionSpec{IndicatorBall{Point{0.0}, -1.0}}), ValidationError);
    CHECK_THROWS_AS(validate(FunctionSpec{SmoothBump{1, 0.0, 1.0, Point(1)}}), ValidationError);
    CHECK_THROWS_AS(validate(FunctionSpec{RadialPowerLog{1, 1.5, 0.5, 0.3, Point(1)}}), ValidationError);
    CHECK_THROWS_AS(parse_function_arg("ball:0,0,1", 1, 0.5), ValidationError);
    CHECK_THROWS_AS(parse_function_arg("triangle:1", 1, 0.5), ValidationError);
}

TEST_CASE("short forms and JSON round trip") {
    const FunctionSpec f = parse_function_arg("box:0,0,1,2", 2, 0.5);
    REQUIRE(std::holds_alternative<IndicatorBox>(f));
    const FunctionSpec back = spec_from_json(to_json(f));
    CHECK(to_json(back) == to_json(f));
    const FunctionSpec h = parse_function_arg("h:0.25", 1, 0.5);
    CHECK(std::get<RadialPowerLog>(h).alpha == 0.25);
    const FunctionSpec psi = parse_function_arg("bump:0.01,inf", 1, 0.5);
    CHECK(std::isinf(std::get<SmoothBump>(psi).p));
    CHECK(to_json(spec_from_json(to_json(psi))) == to_json(psi));
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"kind":"ball","center":[0],"radius":1,"color":2})")),
                    ValidationError);
    CHECK(parse_exponent("inf") == HUGE_VAL);
    CHECK(parse_exponent("3/2") == 1.5);
}

TEST_CASE("rearrangement of a simple function is an exact staircase") {
    SimpleFunction s;
    s.dim = 1;
    s.terms.push_back({1.0, IndicatorBox{Point{0.0}, Point{2.0}}});
    s.terms.push_back({3.0, IndicatorBox{Point{5.0}, Point{0.5}}});
    const Rearrangement r = decreasing_rearrangement_samples(s, 64, support_box(s));
    CHECK(rearrangement_value(r, 0.25) == 3.0);
    CHECK(rearrangement_value(r, 1.0) == 1.0);
    CHECK(rearrangement_value(r, 3.0) == 0.0);
    const Rearrangement q = rearrangement_from_samples({1.0, 4.0, 1.0, 0.0}, {0.5, 0.5, 0.5, 0.5});
    CHECK(rearrangement_value(q, 0.25) == 4.0);
    CHECK(rearrangement_value(q, 0.75) == 1.0);
    CHECK(rearrangement_value(q, 1.75) == 0.0);
}
