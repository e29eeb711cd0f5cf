#include <cstring>
#include <random>
#include <vector>

#include <doctest.h>

#include "fraclab/simd/kernels.hpp"

using namespace fraclab;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
    const auto tables = simd::available();
    REQUIRE(!tables.empty());
    CHECK(tables.front()->isa == simd::Isa::Scalar);
    CHECK(simd::select("scalar"));
    CHECK(simd::active().isa == simd::Isa::Scalar);
    CHECK_FALSE(simd::select("no_such_isa"));
}

TEST_CASE("every kernel variant matches the scalar reference bit for bit") {
    const simd::KernelTable& ref = simd::scalar_table();
    std::mt19937_64 rng(7);
    const std::vector<std::size_t> sizes{0, 1, 3, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 1023, 4097};
    for (const simd::KernelTable* t : simd::available()) {
        CAPTURE(t->name);
        for (std::size_t n : sizes) {
            CAPTURE(n);
            const auto a = random_vector(n, rng, -1.0, 1.0);
            const auto b = random_vector(n, rng, -3.0, 3.0);
            const auto c = random_vector(n, rng, 0.0, 2.0);
            const auto m = random_vector(n, rng, 0.0, 1e-3);
            CHECK(same_bits(t->sum(a.data(), n), ref.sum(a.data(), n)));
            CHECK(same_bits(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
            CHECK(same_bits(t->dot3(a.data(), b.data(), c.data(), n), ref.dot3(a.data(), b.data(), c.data(), n)));
            for (double lambda : {-2.0, 0.0, 0.37, 0.99})
                CHECK(same_bits(t->measure_above(a.data(), m.data(), n, lambda),
                                ref.measure_above(a.data(), m.data(), n, lambda)));
            if (n > 0) CHECK(same_bits(t->max_value(b.data(), n), ref.max_value(b.data(), n)));

            auto y1 = c, y2 = c;
            t->axpy(0.3, a.data(), y1.data(), n);
            ref.axpy(0.3, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(y1[i], y2[i]));
            y1 = c;
            y2 = c;
            t->axpy_product(-1.7, a.data(), b.data(), y1.data(), n);
            ref.axpy_product(-1.7, a.data(), b.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(y1[i], y2[i]));
        }
    }
}

TEST_CASE("kernels compute the expected values") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::vector<double> m(10, 0.5);
    for (const simd::KernelTable* t : simd::available()) {
        CAPTURE(t->name);
        CHECK(t->sum(v.data(), v.size()) == 55.0);
        CHECK(t->dot(v.data(), v.data(), v.size()) == 385.0);
        CHECK(t->measure_above(v.data(), m.data(), v.size(), 7.0) == 1.5);
        CHECK(t->max_value(v.data(), v.size()) == 10.0);
    }
}

TEST_CASE("measure_above is strict at the threshold") {
    const std::vector<double> v{1.0, 1.0, 2.0};
    const std::vector<double> m{1.0, 1.0, 1.0};
    for (const simd::KernelTable* t : simd::available()) CHECK(t->measure_above(v.data(), m.data(), 3, 1.0) == 1.0);
}
