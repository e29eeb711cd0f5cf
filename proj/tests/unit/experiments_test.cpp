#include <cmath>
#include <cstdio>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/svg.hpp"

using namespace fraclab;

namespace {

std::vector<ExperimentRecord> sample_records() {
    ExperimentRecord a;
    a.experiment = "demo";
    a.alpha = 0.5;
    a.d = 1;
    a.p = 1.5;
    a.q = 2.0;
    a.r = 1.0 / 3.0;
    a.theta = 0.1;
    a.seed = 18446744073709551615ull;
    a.quantity = "weak_norm";
    a.value = 0.1 + 0.2;
    a.stderr_value = 1e-300;
    ExperimentRecord b;
    b.experiment = "demo";
    b.j = -7;
    b.t = 1e-3;
    b.quantity = "ratio";
    b.value = HUGE_VAL;
    ExperimentRecord c;
    c.experiment = "demo";
    c.quantity = "missing";
    c.value = std::nan("");
    c.walltime_ms = 12.5;
    return {a, b, c};
}

bool same(const ExperimentRecord& x, const ExperimentRecord& y) {
    if (std::isnan(x.value)) return std::isnan(y.value) && x.quantity == y.quantity;
    return x == y;
}

SweepPlan small_sweep() {
    SweepPlan plan;
    plan.f = IndicatorBall{Point{0.0}, 1.0};
    plan.g = IndicatorBall{Point{0.5}, 0.5};
    plan.point = make_point(1.5, 1.0, 0.5, 1);
    plan.thetas = {0.0, 0.5, 1.0};
    plan.cells = 256;
    return plan;
}

}  // namespace

TEST_CASE("CSV and JSON round trips are exact") {
    const auto recs = sample_records();
    for (Format f : {Format::Csv, Format::Json}) {
        const std::string text = f == Format::Csv ? to_csv(recs) : to_json(recs);
        const auto back = f == Format::Csv ? parse_csv(text) : parse_json(text);
        REQUIRE(back.size() == recs.size());
        for (std::size_t i = 0; i < recs.size(); ++i) CHECK(same(recs[i], back[i]));
        CHECK((f == Format::Csv ? to_csv(back) : to_json(back)) == text);
    }
    const std::string csv = to_csv(recs);
    CHECK(csv.rfind(kCsvHeader, 0) == 0);
    CHECK(csv.find(",inf,") != std::string::npos);
    CHECK(to_json(recs).find("\"value\": \"nan\"") != std::string::npos);
}

TEST_CASE("persistence reports the failing path") {
    const std::string path = std::string(FRACLAB_TEST_TMP) + "/records.json";
    persist(sample_records(), path, Format::Json);
    const auto back = load_records(path, Format::Json);
    CHECK(back.size() == 3);
    std::remove(path.c_str());
    try {
        persist(sample_records(), "/nonexistent/dir/out.csv", Format::Csv);
        FAIL("expected an I/O error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv("wrong,header\n"), ValidationError);
    CHECK_THROWS_AS(parse_json("{}"), ValidationError);
    ExperimentRecord bad;
    bad.experiment = "a,b";
    CHECK_THROWS_AS(to_csv({bad}), ValidationError);
}

TEST_CASE("theta sweep rows and determinism across thread counts") {
    const SweepPlan plan = small_sweep();
    const auto one = theta_sweep(plan);
    set_thread_count(4);
    const auto four = theta_sweep(plan);
    set_thread_count(1);
    CHECK(to_csv(one) == to_csv(four));
    CHECK(one.size() == 10);
    for (const auto& r : one) {
        CHECK(r.walltime_ms == 0.0);
        if (r.quantity == "ratio") CHECK(r.value > 0.0);
    }
    double weak_half = 0.0, via_b = 0.0;
    for (const auto& r : one) {
        if (r.quantity == "weak_norm" && r.theta == 0.5) weak_half = r.value;
        if (r.quantity == "weak_norm_via_B") via_b = r.value;
    }
    CHECK(via_b == doctest::Approx(weak_half).epsilon(1e-6));
}

TEST_CASE("theta sweep refuses bad plans") {
    SweepPlan plan = small_sweep();
    plan.thetas.clear();
    CHECK_THROWS_AS(theta_sweep(plan), ValidationError);
    plan = small_sweep();
    plan.point = make_point(4.0, 4.0, 0.5, 1);
    try {
        theta_sweep(plan);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("PentagonBoundaryLower") != std::string::npos);
    }
    plan = small_sweep();
    plan.f = zero_function(1);
    for (const auto& r : theta_sweep(plan))
        if (r.quantity != "denominator") CHECK(r.value == 0.0);
}

TEST_CASE("small sharpness run has the expected rows") {
    SharpnessPlan plan;
    plan.which = SharpCase::I;
    plan.t_grid = {1.0 / 16, 1.0 / 64, 1.0 / 256};
    plan.cells = 512;
    const SharpnessReport rep = sharpness_case(plan);
    CHECK(rep.value.size() == 3);
    CHECK(rep.strictly_increasing);
    CHECK(rep.predicted_exponent == doctest::Approx(0.125));
    CHECK(rep.ratio_band >= 1.0);
    plan.t_grid = {0.2};
    CHECK_THROWS_AS(sharpness_case(plan), ValidationError);
    CHECK(sharp_case_from_name(sharp_case_name(SharpCase::IV)) == SharpCase::IV);
    CHECK_THROWS_AS(sharp_case_from_name("VI"), ValidationError);
}

TEST_CASE("growth helpers") {
    CHECK(diverges({1.0, 1.2, 1.6, 2.0}));
    CHECK_FALSE(diverges({1.0, 1.1, 1.2}));
    CHECK_FALSE(diverges({2.0, 1.0, 3.0, 2.0, 4.0}));
    std::vector<double> t, v;
    for (int k = 2; k < 20; ++k) {
        t.push_back(std::ldexp(1.0, -k));
        v.push_back(3.0 * std::pow(std::log(1.0 / t.back()), 0.4));
    }
    CHECK(fit_log_growth(t, v) == doctest::Approx(0.4));
}

TEST_CASE("lower bound and divergence experiments produce records") {
    const LowerBoundReport lb = h_lower_bound(0.5, 1, {4, 6, 8}, QuadratureConfig{});
    CHECK(lb.fitted_c > 0.0);
    CHECK(lb.records.size() == 6);
    const DivergenceExperiment de = divergence_experiment(0.5, {256, 512}, QuadratureConfig{});
    CHECK(de.residual.size() == 2);
    CHECK(de.halving.size() == 1);
    CHECK(de.halving[0] < 1.0);
}

TEST_CASE("svg charts") {
    const std::string svg = render_svg({{"a", {1.0, 2.0, 4.0}, {1.0, 0.5, 0.25}}}, {"t", "x", "y", true, true, false});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK_THROWS_AS(render_svg({{"bad", {1.0}, {}}}, {}), ValidationError);
    CHECK_THROWS_AS(write_svg("/nonexistent/dir/x.svg", {}, {}), IoError);
}
