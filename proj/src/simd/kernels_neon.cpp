#include <arm_neon.h>

#include <limits>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {
namespace {

struct Acc {
    float64x2_t q0 = vdupq_n_f64(0.0), q1 = vdupq_n_f64(0.0), q2 = vdupq_n_f64(0.0), q3 = vdupq_n_f64(0.0);

    double fold() const {
        float64x2_t u = vaddq_f64(vaddq_f64(q0, q2), vaddq_f64(q1, q3));
        return vgetq_lane_f64(u, 0) + vgetq_lane_f64(u, 1);
    }
};

double sum_neon(const double* x, std::size_t n) {
    Acc a;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a.q0 = vaddq_f64(a.q0, vld1q_f64(x + i));
        a.q1 = vaddq_f64(a.q1, vld1q_f64(x + i + 2));
        a.q2 = vaddq_f64(a.q2, vld1q_f64(x + i + 4));
        a.q3 = vaddq_f64(a.q3, vld1q_f64(x + i + 6));
    }
    double s = a.fold();
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    Acc a;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a.q0 = vaddq_f64(a.q0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        a.q1 = vaddq_f64(a.q1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
        a.q2 = vaddq_f64(a.q2, vmulq_f64(vld1q_f64(x + i + 4), vld1q_f64(y + i + 4)));
        a.q3 = vaddq_f64(a.q3, vmulq_f64(vld1q_f64(x + i + 6), vld1q_f64(y + i + 6)));
    }
    double s = a.fold();
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double dot3_neon(const double* x, const double* y, const double* z, std::size_t n) {
    Acc a;
    std::size_t i = 0;
    auto term = [&](std::size_t k) { return vmulq_f64(vmulq_f64(vld1q_f64(x + k), vld1q_f64(y + k)), vld1q_f64(z + k)); };
    for (; i + 8 <= n; i += 8) {
        a.q0 = vaddq_f64(a.q0, term(i));
        a.q1 = vaddq_f64(a.q1, term(i + 2));
        a.q2 = vaddq_f64(a.q2, term(i + 4));
        a.q3 = vaddq_f64(a.q3, term(i + 6));
    }
    double s = a.fold();
    for (; i < n; ++i) s += (x[i] * y[i]) * z[i];
    return s;
}

double measure_above_neon(const double* v, const double* m, std::size_t n, double lambda) {
    const float64x2_t lam = vdupq_n_f64(lambda);
    Acc a;
    std::size_t i = 0;
    auto term = [&](std::size_t k) {
        uint64x2_t mask = vcgtq_f64(vld1q_f64(v + k), lam);
        return vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(vld1q_f64(m + k))));
    };
    for (; i + 8 <= n; i += 8) {
        a.q0 = vaddq_f64(a.q0, term(i));
        a.q1 = vaddq_f64(a.q1, term(i + 2));
        a.q2 = vaddq_f64(a.q2, term(i + 4));
        a.q3 = vaddq_f64(a.q3, term(i + 6));
    }
    double s = a.fold();
    for (; i < n; ++i) s += v[i] > lambda ? m[i] : 0.0;
    return s;
}

double max_neon(const double* v, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    float64x2_t a0 = vdupq_n_f64(ninf), a1 = a0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vmaxq_f64(a0, vld1q_f64(v + i));
        a1 = vmaxq_f64(a1, vld1q_f64(v + i + 2));
    }
    float64x2_t m = vmaxq_f64(a0, a1);
    double r = vgetq_lane_f64(m, 0);
    double r1 = vgetq_lane_f64(m, 1);
    r = r > r1 ? r : r1;
    for (; i < n; ++i) r = r > v[i] ? r : v[i];
    return r;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(av, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_product_neon(double a, const double* x, const double* z, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t p = vmulq_f64(vmulq_f64(av, vld1q_f64(x + i)), vld1q_f64(z + i));
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), p));
    }
    for (; i < n; ++i) y[i] += (a * x[i]) * z[i];
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable t{Isa::Neon, "neon",    sum_neon,          dot_neon,
                               dot3_neon, measure_above_neon, max_neon, axpy_neon,
                               axpy_product_neon};
    return t;
}

}  // namespace fraclab::simd
