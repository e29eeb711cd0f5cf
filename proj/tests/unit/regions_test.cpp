#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/regions.hpp"

using namespace fraclab;

TEST_CASE("r from the scaling relation") {
    const RExponent r = compute_r(1.5, 1.5, 0.5, 1);
    CHECK(r.status == RExponent::Status::Finite);
    CHECK(r.r == doctest::Approx(1.2));
    CHECK(compute_r(4.0, 4.0, 0.5, 1).status == RExponent::Status::Infinite);
    CHECK(compute_r(4.0, 4.0, 1.0, 2).status == RExponent::Status::Infinite);
    CHECK(compute_r(8.0, 8.0, 0.5, 1).status == RExponent::Status::Invalid);
}

TEST_CASE("hand-labeled atlas") {
    for (const AtlasEntry& e : reference_atlas()) {
        CAPTURE(e.inv_p);
        CAPTURE(e.inv_q);
        const ExponentPoint pt = make_point(1.0 / e.inv_p, 1.0 / e.inv_q, 0.5, 1);
        CHECK(region_name(classify(pt).region) == region_name(e.expected));
    }
}

TEST_CASE("exact text input lands on edges and corners") {
    CHECK(classify(make_point("2", "3/2", "1/2", 1)).region == Region::EdgeLeft);
    CHECK(classify(make_point("3/2", "2", "1/2", 1)).region == Region::EdgeBottom);
    CHECK(classify(make_point("2", "2", "1/2", 1)).region == Region::CornerSW);
    CHECK(classify(make_point("1", "1", "1/2", 1)).bound == Bound::UniformWeak);
    CHECK(classify(make_point("inf", "2", "1/2", 1)).region == Region::PentagonBoundaryLower);
    CHECK(classify(make_point("3/2", "1", "1", 2)).region == Region::EdgeTop);
    CHECK(classify(make_point("1", "3/2", "1/2", 1)).region == Region::EdgeRight);
}

TEST_CASE("classification is symmetric under swapping p and q") {
    for (const AtlasEntry& e : reference_atlas()) {
        const RegionClass a = classify(make_point(1.0 / e.inv_p, 1.0 / e.inv_q, 0.5, 1));
        const RegionClass b = classify(make_point(1.0 / e.inv_q, 1.0 / e.inv_p, 0.5, 1));
        CHECK(region_name(mirror(a.region)) == region_name(b.region));
    }
}

TEST_CASE("lower boundary of the pentagon carries endpoint constants") {
    const RegionClass c = classify(make_point("4", "4", "1/2", 1));
    CHECK(c.region == Region::PentagonBoundaryLower);
    CHECK(c.endpoints.size() == 2);
}

TEST_CASE("invalid exponents are rejected") {
    CHECK_THROWS_AS(make_point(0.5, 2.0, 0.5, 1), ValidationError);
    CHECK_THROWS_AS(make_point(2.0, 2.0, 1.5, 1), ValidationError);
    CHECK_THROWS_AS(make_point("x", "2", "1/2", 1), ValidationError);
}

TEST_CASE("series stay proportional to their scaling and diverge at the thresholds") {
    double lo = HUGE_VAL, hi = 0.0;
    for (int k = -10; k <= 10; k += 5) {
        const double R = std::ldexp(1.0, k);
        const double a1 = series_A1(1.5, 0.5, 1, R).value / std::pow(R, 0.5);
        lo = std::min(lo, a1);
        hi = std::max(hi, a1);
    }
    CHECK(lo > 0.0);
    CHECK(hi <= 2.0 * lo);
    CHECK_THROWS_AS(series_A1(2.0, 0.5, 1, 1.0), DivergentSeries);
    CHECK_NOTHROW(series_A1(1.999, 0.5, 1, 1.0));
    CHECK_THROWS_AS(series_A2(1.0, 0.5, 1.0, 4.0), DivergentSeries);
    CHECK_NOTHROW(series_A2(1.001, 0.5, 1.0, 4.0));
    CHECK_THROWS_AS(series_A1(1.5, 0.5, 1, -1.0), ValidationError);
}
