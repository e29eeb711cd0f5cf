#pragma once

#include <string>
#include <vector>

#include "fraclab/functions.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

struct OperatorParams {
    double alpha = 0.5;
    int d = 1;
    double theta = 0.5;
    int j = 0;  // dyadic scale, used by eval_dyadic only
};

void validate(const OperatorParams& p);

// Warnings raised on this thread since the last call (e.g. theta within
// 1e-6 of an endpoint without being equal to it).
std::vector<std::string> drain_warnings();

// Cutoff R such that f(x + (theta-1) y) g(x + theta y) = 0 for |y| > R.
double bilinear_truncation(const FunctionSpec& f, const FunctionSpec& g, double theta, const Point& x);

// int f(x + (theta-1) y) g(x + theta y) |y|^{alpha-d} dy
Estimate eval_bilinear(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p, const Point& x,
                       const QuadratureConfig& cfg);

// int_{|y| <= 2^j} f(x + (theta-1) y) g(x + theta y) dy
Estimate eval_dyadic(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p, const Point& x,
                     const QuadratureConfig& cfg);

// int f(x - y) |y|^{alpha-d} dy
Estimate eval_riesz(const FunctionSpec& f, double alpha, int d, const Point& x, const QuadratureConfig& cfg);

// int f(x - y) g(x + y) |y|^{alpha-d} dy
Estimate eval_B(const FunctionSpec& f, const FunctionSpec& g, double alpha, int d, const Point& x,
                const QuadratureConfig& cfg);

struct StressTensor {
    int d = 1;
    std::array<Estimate, kMaxDim * kMaxDim> entries{};
    const Estimate& at(int a, int b) const { return entries[static_cast<std::size_t>(a * kMaxDim + b)]; }
    Estimate& at(int a, int b) { return entries[static_cast<std::size_t>(a * kMaxDim + b)]; }
};

// 1/2 int_0^1 int rho(x + (theta-1) y) rho(x + theta y) |y|^{alpha-d-2} y (x) y dy dtheta,
// theta by 64-point Gauss-Legendre.
StressTensor eval_stress_tensor(const FunctionSpec& rho, double alpha, int d, const Point& x,
                                const QuadratureConfig& cfg);

struct Superposition {
    Estimate lhs;
    Estimate rhs;
    // Upper bound for the part of lhs from |y| <= 2^{j_min - 1}, which no
    // annulus in the range covers (infinite for unbounded inputs).
    double inner_tail = 0.0;
    // True when 2^{j_max} reaches the truncation radius.
    bool covers_support = false;
};

Superposition dyadic_superposition(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p,
                                   const Point& x, int j_min, int j_max, const QuadratureConfig& cfg);

struct DivergenceReport {
    std::size_t cells = 0;
    double max_residual = 0.0;
    double relative_l2 = 0.0;
    double rhs_l2 = 0.0;
    // Node values of S(rho) and of K * rho on the grid.
    std::vector<double> stress;
    std::vector<double> potential;
};

// Compares rho (K * rho)' with S(rho)' on the nodes of a 1D grid, with
// K = |x|^{alpha-1}/(1-alpha), both sides integrated exactly for the
// piecewise linear interpolant and differentiated by centered differences.
DivergenceReport check_divergence_identity(const GridFunction& rho, double alpha, int d, const QuadratureConfig& cfg);

}  // namespace fraclab
