#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/norms.hpp"

using namespace fraclab;

TEST_CASE("norms of an indicator have closed forms") {
    const FunctionSpec box = IndicatorBox{Point{0.0, 0.0}, Point{0.5, 3.0}};
    const double m = 1.5;
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        CHECK(lebesgue_norm(box, p) == doctest::Approx(std::pow(m, 1.0 / p)).epsilon(1e-14));
        CHECK(weak_norm(box, p) == doctest::Approx(std::pow(m, 1.0 / p)).epsilon(1e-14));
        CHECK(lorentz_p1_norm(box, p) == doctest::Approx(p * std::pow(m, 1.0 / p)).epsilon(1e-14));
    }
    CHECK(lebesgue_norm(box, HUGE_VAL) == 1.0);
    CHECK(distribution_function(box, 0.5) == doctest::Approx(m));
    CHECK(distribution_function(box, 1.0) == 0.0);
}

TEST_CASE("h has L2 norm 2") { CHECK(lebesgue_norm(make_h(1, 0.5), 2.0) == doctest::Approx(2.0).epsilon(1e-8)); }

TEST_CASE("weak norm and distribution of a pure power") {
    const FunctionSpec f = RadialPowerLog{1, 0.5, 0.0, 1.0, Point(1)};
    CHECK(weak_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(distribution_function(f, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::isinf(lebesgue_norm(f, 2.0)));
}

TEST_CASE("sampled indicator matches the exact norms") {
    const FunctionSpec ball = IndicatorBall{Point{0.0}, 0.5};
    const SampledField s = sample_function(ball, Box{Point{-1.0}, Point{1.0}}, uniform_cells(1, 1000));
    CHECK(lebesgue_norm(s, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(weak_norm(s, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lorentz_p1_norm(s, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
    NormKind k;
    k.kind = norm_kind_from_name("weak");
    k.exponent = 2.0;
    CHECK(norm(s, k) == doctest::Approx(1.0));
}

TEST_CASE("weak norm never exceeds the strong norm") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    SampledField f;
    f.box = Box{Point{0.0}, Point{1.0}};
    f.cells = uniform_cells(1, 500);
    for (int i = 0; i < 500; ++i) {
        f.values.push_back(u(rng) * u(rng));
        f.measures.push_back(1.0 / 500.0);
    }
    for (double p : {1.0, 1.25, 2.0, 3.0}) {
        CHECK(weak_norm(f, p) <= lebesgue_norm(f, p) * (1.0 + 1e-12));
        CHECK(lebesgue_norm(f, p) <= lorentz_p1_norm(f, p) * (1.0 + 1e-12));
    }
}

TEST_CASE("superlevel sets estimate the weak norm from above") {
    SampledField f = sample_function(RadialPowerLog{1, 0.5, 0.0, 1.0, Point(1)}, Box{Point{-1.0}, Point{1.0}},
                                     uniform_cells(1, 4096));
    const double r = 2.0, s = 1.0;
    const SetBound b = weak_norm_set_lower_bound(f, r, s, superlevel_family(f));
    CHECK(b.estimator >= b.weak * (1.0 - 1e-12));
    CHECK(b.estimator <= std::pow(r / (r - s), 1.0 / s) * b.weak * (1.0 + 1e-12));
    CHECK_THROWS_AS(weak_norm_set_lower_bound(f, r, s, {}), ValidationError);
    CHECK_THROWS_AS(weak_norm_set_lower_bound(f, r, 3.0, {1.0}), ValidationError);
}

TEST_CASE("bad exponents and fields are rejected") {
    const FunctionSpec ball = IndicatorBall{Point{0.0}, 0.5};
    CHECK_THROWS_AS(lebesgue_norm(ball, 0.0), ValidationError);
    CHECK_THROWS_AS(weak_norm(ball, HUGE_VAL), ValidationError);
    CHECK_THROWS_AS(norm_kind_from_name("sobolev"), ValidationError);
    SampledField bad;
    bad.box = Box{Point{0.0}, Point{1.0}};
    bad.values = {1.0, -1.0};
    bad.measures = {0.5, 0.5};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK_THROWS_AS(sample_field([](const Point&) { return std::nan(""); }, bad.box, uniform_cells(1, 4)),
                    NumericalError);
}

TEST_CASE("field CSV export") {
    const SampledField s = sample_function(IndicatorBall{Point{0.0}, 0.5}, Box{Point{-1.0}, Point{1.0}},
                                           uniform_cells(1, 4));
    const std::string path = std::string(FRACLAB_TEST_TMP) + "/field.csv";
    write_field_csv(s, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,cell_measure,value");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 4);
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_field_csv(s, "/nonexistent/dir/field.csv"), IoError);
}
