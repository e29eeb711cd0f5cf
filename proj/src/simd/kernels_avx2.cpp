#include <immintrin.h>

#include <limits>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {
namespace {

inline double fold(__m256d lo, __m256d hi) {
    __m256d t = _mm256_add_pd(lo, hi);
    __m128d u = _mm_add_pd(_mm256_castpd256_pd128(t), _mm256_extractf128_pd(t, 1));
    return _mm_cvtsd_f64(u) + _mm_cvtsd_f64(_mm_unpackhi_pd(u, u));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    double s = fold(a0, a1);
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        a1 = _mm256_add_pd(a1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    double s = fold(a0, a1);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        a0 = _mm256_add_pd(a0, _mm256_mul_pd(p0, _mm256_loadu_pd(c + i)));
        a1 = _mm256_add_pd(a1, _mm256_mul_pd(p1, _mm256_loadu_pd(c + i + 4)));
    }
    double s = fold(a0, a1);
    for (; i < n; ++i) s += (a[i] * b[i]) * c[i];
    return s;
}

double measure_above_avx2(const double* v, const double* m, std::size_t n, double lambda) {
    const __m256d lam = _mm256_set1_pd(lambda);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d k0 = _mm256_cmp_pd(_mm256_loadu_pd(v + i), lam, _CMP_GT_OQ);
        __m256d k1 = _mm256_cmp_pd(_mm256_loadu_pd(v + i + 4), lam, _CMP_GT_OQ);
        a0 = _mm256_add_pd(a0, _mm256_and_pd(k0, _mm256_loadu_pd(m + i)));
        a1 = _mm256_add_pd(a1, _mm256_and_pd(k1, _mm256_loadu_pd(m + i + 4)));
    }
    double s = fold(a0, a1);
    for (; i < n; ++i) s += v[i] > lambda ? m[i] : 0.0;
    return s;
}

double max_avx2(const double* v, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    __m256d a0 = _mm256_set1_pd(ninf), a1 = a0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_max_pd(a0, _mm256_loadu_pd(v + i));
        a1 = _mm256_max_pd(a1, _mm256_loadu_pd(v + i + 4));
    }
    alignas(32) double l[4];
    _mm256_store_pd(l, _mm256_max_pd(a0, a1));
    double r = ninf;
    for (double x : l) r = r > x ? r : x;
    for (; i < n; ++i) r = r > v[i] ? r : v[i];
    return r;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_product_avx2(double a, const double* x, const double* z, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_mul_pd(av, _mm256_loadu_pd(x + i)), _mm256_loadu_pd(z + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) y[i] += (a * x[i]) * z[i];
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{Isa::Avx2, "avx2",    sum_avx2,          dot_avx2,
                               dot3_avx2, measure_above_avx2, max_avx2, axpy_avx2,
                               axpy_product_avx2};
    return t;
}

}  // namespace fraclab::simd
