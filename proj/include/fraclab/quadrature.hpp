#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fraclab/functions.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

enum class Method { Deterministic1D, MonteCarloRadial, TensorGrid };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct QuadratureConfig {
    Method method = Method::Deterministic1D;
    double truncation_radius = 16.0;
    // Extent of the geometrically graded zone around y = 0; 0 grades the
    // whole first segment of every ray.
    double inner_cut = 0.0;
    // Evaluation budget: MC sample count, or the largest deterministic mesh.
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    double rel_tol = 1e-3;
    double abs_tol = 1e-10;
};

// Throws ValidationError for bad fields or Deterministic1D with d >= 2.
void validate(const QuadratureConfig& cfg, int d);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;    // MC standard error, 0 for deterministic rules
    double error_bound = 0.0;  // change under the last mesh doubling
    std::size_t samples_used = 0;
    bool converged = true;
};

// Integral over |y| <= radius of F(y) u^{beta - d}, u = |y|, written in
// polar form as u^{beta-1} du dS. F may have several components.
struct RadialProblem {
    int dim = 1;
    double beta = 0.5;
    double radius = 1.0;
    int outputs = 1;
    std::function<void(const Point& y, double* out)> eval;
    // Parameters u where u -> F(u * dir) jumps or is singular; optional.
    std::function<std::vector<Breakpoint>(const Point& dir)> breaks;
};

std::vector<Estimate> integrate_radial(const RadialProblem& problem, const QuadratureConfig& cfg);

using Integrand = std::function<double(const Point& y)>;

// Integral over |y| <= cfg.truncation_radius of g(y) |y|^{alpha - d}.
Estimate integrate_singular(const Integrand& g, double alpha, int d, const QuadratureConfig& cfg);

// Integral of g over a box: tensor midpoint rule with doubling, or MC.
Estimate integrate_box(const Integrand& g, const Box& box, const QuadratureConfig& cfg);

// Closed-form int_a^b u^{beta-1} du, accurate for narrow cells far from 0.
double radial_weight(double a, double b, double beta);

}  // namespace fraclab
