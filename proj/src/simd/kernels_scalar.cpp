#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {
namespace {

inline double fold(const double l[8]) {
    return ((l[0] + l[4]) + (l[2] + l[6])) + ((l[1] + l[5]) + (l[3] + l[7]));
}

double sum_scalar(const double* x, std::size_t n) {
    double l[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        for (int k = 0; k < 8; ++k) l[k] += x[i + k];
    double s = fold(l);
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double l[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        for (int k = 0; k < 8; ++k) l[k] += a[i + k] * b[i + k];
    double s = fold(l);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double l[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        for (int k = 0; k < 8; ++k) l[k] += (a[i + k] * b[i + k]) * c[i + k];
    double s = fold(l);
    for (; i < n; ++i) s += (a[i] * b[i]) * c[i];
    return s;
}

double measure_above_scalar(const double* v, const double* m, std::size_t n, double lambda) {
    double l[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        for (int k = 0; k < 8; ++k) l[k] += v[i + k] > lambda ? m[i + k] : 0.0;
    double s = fold(l);
    for (; i < n; ++i) s += v[i] > lambda ? m[i] : 0.0;
    return s;
}

double max_scalar(const double* v, std::size_t n) {
    double r = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, v[i]);
    return r;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_product_scalar(double a, const double* x, const double* z, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += (a * x[i]) * z[i];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{Isa::Scalar,          "scalar",   sum_scalar,
                               dot_scalar,           dot3_scalar, measure_above_scalar,
                               max_scalar,           axpy_scalar, axpy_product_scalar};
    return t;
}

}  // namespace fraclab::simd
