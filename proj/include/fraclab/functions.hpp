#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

// chi of the closed ball |x - center| <= radius
struct IndicatorBall {
    Point center;
    double radius = 1.0;
};

// chi of the box [corner, corner + sides]
struct IndicatorBox {
    Point corner;
    Point sides;
};

using SimpleSet = std::variant<IndicatorBall, IndicatorBox>;

struct SimpleTerm {
    double coefficient = 1.0;
    SimpleSet set;
};

// Sum of coefficient * chi_set. Overlapping sets add. No terms = zero function.
struct SimpleFunction {
    int dim = 1;
    std::vector<SimpleTerm> terms;
};

// |x - c|^{-alpha} (log 1/|x - c|)^{-kappa} on |x - c| <= cutoff.
struct RadialPowerLog {
    int dim = 1;
    double alpha = 0.5;
    double kappa = 0.75;
    double cutoff = 0.36787944117144233;
    Point center;
};

// t^{-d/p} Phi((x - c)/t); p = +inf drops the prefactor.
struct SmoothBump {
    int dim = 1;
    double scale = 1.0;
    double p = 1.0;
    Point center;
};

// Node values on origin + spacing * (i_0, ..., i_{d-1}), last index fastest.
// Multilinear interpolation inside the node box, zero outside.
struct GridFunction {
    Point origin;
    double spacing = 1.0;
    std::array<std::size_t, kMaxDim> shape{1, 1, 1};
    std::vector<double> values;

    int dim() const { return origin.dim; }
    std::size_t size() const;
    Point node(std::size_t flat) const;
};

using FunctionSpec =
    std::variant<IndicatorBall, IndicatorBox, SimpleFunction, RadialPowerLog, SmoothBump, GridFunction>;

FunctionSpec zero_function(int d);

int dimension(const FunctionSpec& f);
std::string kind_name(const FunctionSpec& f);

// Throws ValidationError on malformed parameters.
void validate(const FunctionSpec& f);

double evaluate(const FunctionSpec& f, const Point& x);

// The fixed bump: A exp(-1/(1 - |8x|^2)) on |x| < 1/8 with unit mass.
double bump_profile(int d, double r);
double bump_normalization(int d);

// SmoothBump(t, p) with the center of `base` (which must be a SmoothBump).
FunctionSpec dilate(const FunctionSpec& base, double t, double p);

// h with kappa = (d + alpha)/(2d) and cutoff 1/e.
FunctionSpec make_h(int d, double alpha);

// True for RadialPowerLog; everything else is bounded.
bool is_unbounded(const FunctionSpec& f);
// An upper bound for sup f (exact for balls, boxes, bumps, grids).
double sup_bound(const FunctionSpec& f);

struct SupportBall {
    Point center;
    double radius = 0.0;
    bool empty = false;
};
SupportBall support_ball(const FunctionSpec& f);
// Bounding box of the support; empty functions give a degenerate box at 0.
Box support_box(const FunctionSpec& f);
bool is_zero(const FunctionSpec& f);

struct Breakpoint {
    double s = 0.0;
    bool singular = false;
};

// Parameters s > 0 where s -> f(origin + s * dir) may jump, kink or blow up,
// sorted ascending. `singular` marks an unbounded peak (the center of a
// RadialPowerLog when the line passes through it).
std::vector<Breakpoint> ray_breakpoints(const FunctionSpec& f, const Point& origin, const Point& dir);

// x -> f(x - z)
FunctionSpec translate(const FunctionSpec& f, const Point& z);
// x -> f(lambda x), lambda > 0. Supported for indicators, simple and grid functions.
FunctionSpec scale_argument(const FunctionSpec& f, double lambda);
// x -> c f(x), c >= 0. Supported for indicators (as simple functions), simple and grid functions.
FunctionSpec scale_value(const FunctionSpec& f, double c);

// Decreasing rearrangement.
//   Steps:   f* = value[k] on [t[k-1], t[k]) with t[-1] = 0, and 0 after t.back().
//   Samples: f*(t[k]) = value[k] at increasing t.
struct Rearrangement {
    enum class Form { Steps, Samples };
    Form form = Form::Steps;
    std::vector<double> t;
    std::vector<double> value;
    bool exact = false;
};

// Steps for simple and grid functions (exact for simple functions when
// overlaps can be resolved), pointwise samples at n geometric t values
// for radial functions, cell sampling with n cells per axis otherwise.
Rearrangement decreasing_rearrangement_samples(const FunctionSpec& f, std::size_t n, const Box& domain);

// Steps rearrangement of values[i] carried by cells of measure measures[i].
Rearrangement rearrangement_from_samples(const std::vector<double>& values, const std::vector<double>& measures);

// f*(t) from a Steps rearrangement, or linear interpolation in Samples form.
double rearrangement_value(const Rearrangement& r, double t);

// |{f > lambda}| for radial functions by exact inversion; used by norms.
double radial_distribution(const FunctionSpec& f, double lambda);

}  // namespace fraclab
