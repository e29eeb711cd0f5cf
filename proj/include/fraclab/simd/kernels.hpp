#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Reduction and update kernels used by the quadrature and norm code.
//
// Every variant accumulates into eight lanes (element i goes to lane i % 8),
// folds the lanes as ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)) and then adds the
// tail sequentially. The scalar code follows the same order, so all variants
// return bit-identical results.

namespace fraclab::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    const char* name;
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    double (*measure_above)(const double* v, const double* m, std::size_t n, double lambda);
    double (*max_value)(const double* v, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*axpy_product)(double a, const double* x, const double* z, double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(FRACLAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(FRACLAB_HAVE_NEON)
const KernelTable& neon_table();
#endif

// Variants compiled in and supported by the running CPU.
std::vector<const KernelTable*> available();

// Table chosen at first use: FRACLAB_SIMD (scalar|avx2|neon) if set and
// usable, otherwise the widest supported variant.
const KernelTable& active();

// Force a variant by name; returns false if it is not available.
bool select(const std::string& name);

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    return active().dot3(a, b, c, n);
}
// sum of m[i] over v[i] > lambda
inline double measure_above(const double* v, const double* m, std::size_t n, double lambda) {
    return active().measure_above(v, m, n, lambda);
}
inline double max_value(const double* v, std::size_t n) { return active().max_value(v, n); }
// y += a * x
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
// y += (a * x) * z
inline void axpy_product(double a, const double* x, const double* z, double* y, std::size_t n) {
    active().axpy_product(a, x, z, y, n);
}

}  // namespace fraclab::simd
