#include "fraclab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

thread_local std::vector<std::string> t_warnings;

constexpr double kThetaWarn = 1e-6;
// Covers rounding in |x - c| + r; wider padding biases importance sampling.
constexpr double kSlack = 1.0 + 64.0 * std::numeric_limits<double>::epsilon();

void check_inputs(const FunctionSpec& f, int d, const Point& x, const char* what) {
    validate(f);
    if (dimension(f) != d) throw ValidationError(std::string(what) + " has dimension " + std::to_string(dimension(f)) +
                                                 ", operator has d = " + std::to_string(d));
    if (x.dim != d) throw ValidationError("evaluation point has dimension " + std::to_string(x.dim));
    if (!x.finite()) throw ValidationError("evaluation point is not finite");
}

void check_alpha(double alpha, int d) {
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
}

void warn_theta(double theta) {
    const double gap = std::min(std::abs(theta), std::abs(1.0 - theta));
    if (gap > 0.0 && gap < kThetaWarn) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "theta = %.17g is within 1e-6 of an endpoint; integrating in y", theta);
        t_warnings.emplace_back(buf);
    }
}

std::vector<Breakpoint> merge(std::vector<Breakpoint> a, const std::vector<Breakpoint>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.s < y.s; });
    return a;
}

double riesz_truncation(const FunctionSpec& f, const Point& x) {
    const SupportBall s = support_ball(f);
    if (s.empty) return 0.0;
    return (norm(x - s.center) + s.radius) * kSlack;
}

RadialProblem bilinear_problem(const FunctionSpec& f, const FunctionSpec& g, double theta, const Point& x, int d,
                               double beta, double radius) {
    RadialProblem p;
    p.dim = d;
    p.beta = beta;
    p.radius = radius;
    p.eval = [&f, &g, theta, x](const Point& y, double* out) {
        const double a = evaluate(f, x + (theta - 1.0) * y);
        out[0] = a == 0.0 ? 0.0 : a * evaluate(g, x + theta * y);
    };
    p.breaks = [&f, &g, theta, x](const Point& dir) {
        return merge(ray_breakpoints(f, x, (theta - 1.0) * dir), ray_breakpoints(g, x, theta * dir));
    };
    return p;
}

RadialProblem riesz_problem(const FunctionSpec& f, const Point& x, int d, double beta, double radius) {
    RadialProblem p;
    p.dim = d;
    p.beta = beta;
    p.radius = radius;
    p.eval = [&f, x](const Point& y, double* out) { out[0] = evaluate(f, x - y); };
    p.breaks = [&f, x](const Point& dir) { return ray_breakpoints(f, x, -1.0 * dir); };
    return p;
}

Estimate scaled(Estimate e, double c) {
    e.value *= c;
    e.std_error *= c;
    e.error_bound *= c;
    return e;
}

Estimate zero_estimate() { return Estimate{}; }

}  // namespace

void validate(const OperatorParams& p) {
    check_alpha(p.alpha, p.d);
    if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw ValidationError("theta must lie in [0, 1]");
}

std::vector<std::string> drain_warnings() {
    std::vector<std::string> out;
    out.swap(t_warnings);
    return out;
}

double bilinear_truncation(const FunctionSpec& f, const FunctionSpec& g, double theta, const Point& x) {
    const SupportBall sf = support_ball(f), sg = support_ball(g);
    if (sf.empty || sg.empty) return 0.0;
    // |y| = |(x + theta y - c_g) - (x + (theta-1) y - c_f) + c_g - c_f|
    double R = norm(sf.center - sg.center) + sf.radius + sg.radius;
    if (theta < 1.0) R = std::min(R, (norm(x - sf.center) + sf.radius) / (1.0 - theta));
    if (theta > 0.0) R = std::min(R, (norm(x - sg.center) + sg.radius) / theta);
    return R * kSlack;
}

Estimate eval_riesz(const FunctionSpec& f, double alpha, int d, const Point& x, const QuadratureConfig& cfg) {
    check_alpha(alpha, d);
    check_inputs(f, d, x, "f");
    validate(cfg, d);
    if (is_zero(f)) return zero_estimate();
    const double R = riesz_truncation(f, x);
    return integrate_radial(riesz_problem(f, x, d, alpha, R), cfg)[0];
}

Estimate eval_bilinear(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p, const Point& x,
                       const QuadratureConfig& cfg) {
    validate(p);
    check_inputs(f, p.d, x, "f");
    check_inputs(g, p.d, x, "g");
    validate(cfg, p.d);
    if (is_zero(f) || is_zero(g)) return zero_estimate();
    if (p.theta == 0.0) {
        const double gx = evaluate(g, x);
        if (gx == 0.0) return zero_estimate();
        return scaled(eval_riesz(f, p.alpha, p.d, x, cfg), gx);
    }
    if (p.theta == 1.0) {
        const double fx = evaluate(f, x);
        if (fx == 0.0) return zero_estimate();
        return scaled(eval_riesz(g, p.alpha, p.d, x, cfg), fx);
    }
    warn_theta(p.theta);
    const double R = bilinear_truncation(f, g, p.theta, x);
    if (!(R > 0.0)) return zero_estimate();
    return integrate_radial(bilinear_problem(f, g, p.theta, x, p.d, p.alpha, R), cfg)[0];
}

Estimate eval_dyadic(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p, const Point& x,
                     const QuadratureConfig& cfg) {
    validate(p);
    check_inputs(f, p.d, x, "f");
    check_inputs(g, p.d, x, "g");
    validate(cfg, p.d);
    if (is_zero(f) || is_zero(g)) return zero_estimate();
    const double ball = std::ldexp(1.0, p.j);
    if (p.theta == 0.0 || p.theta == 1.0) {
        const FunctionSpec& fixed = p.theta == 0.0 ? g : f;
        const FunctionSpec& moving = p.theta == 0.0 ? f : g;
        const double c = evaluate(fixed, x);
        if (c == 0.0) return zero_estimate();
        const double R = std::min(ball, riesz_truncation(moving, x));
        // theta = 1 integrates g(x + y); by symmetry of the ball this equals g(x - y).
        return scaled(integrate_radial(riesz_problem(moving, x, p.d, static_cast<double>(p.d), R), cfg)[0], c);
    }
    warn_theta(p.theta);
    const double R = std::min(ball, bilinear_truncation(f, g, p.theta, x));
    if (!(R > 0.0)) return zero_estimate();
    return integrate_radial(bilinear_problem(f, g, p.theta, x, p.d, static_cast<double>(p.d), R), cfg)[0];
}

Estimate eval_B(const FunctionSpec& f, const FunctionSpec& g, double alpha, int d, const Point& x,
                const QuadratureConfig& cfg) {
    check_alpha(alpha, d);
    check_inputs(f, d, x, "f");
    check_inputs(g, d, x, "g");
    validate(cfg, d);
    if (is_zero(f) || is_zero(g)) return zero_estimate();
    const SupportBall sf = support_ball(f), sg = support_ball(g);
    double R = 0.5 * (norm(sf.center - sg.center) + sf.radius + sg.radius);
    R = std::min({R, norm(x - sf.center) + sf.radius, norm(x - sg.center) + sg.radius}) * kSlack;
    RadialProblem p;
    p.dim = d;
    p.beta = alpha;
    p.radius = R;
    p.eval = [&f, &g, x](const Point& y, double* out) {
        const double a = evaluate(f, x - y);
        out[0] = a == 0.0 ? 0.0 : a * evaluate(g, x + y);
    };
    p.breaks = [&f, &g, x](const Point& dir) {
        return merge(ray_breakpoints(f, x, -1.0 * dir), ray_breakpoints(g, x, dir));
    };
    return integrate_radial(p, cfg)[0];
}

Superposition dyadic_superposition(const FunctionSpec& f, const FunctionSpec& g, const OperatorParams& p,
                                   const Point& x, int j_min, int j_max, const QuadratureConfig& cfg) {
    if (j_min > j_max) throw ValidationError("dyadic range is empty");
    Superposition out;
    out.lhs = eval_bilinear(f, g, p, x, cfg);
    if (is_zero(f) || is_zero(g)) {
        out.covers_support = true;
        return out;
    }
    const double d = p.d;
    const double c = std::pow(2.0, d - p.alpha);
    Estimate rhs;
    for (int j = j_min; j <= j_max; ++j) {
        OperatorParams q = p;
        q.j = j;
        const Estimate e = eval_dyadic(f, g, q, x, cfg);
        const double w = c * std::pow(2.0, (p.alpha - d) * j);
        rhs.value += w * e.value;
        rhs.error_bound += w * e.error_bound;
        rhs.std_error = std::hypot(rhs.std_error, w * e.std_error);
        rhs.samples_used += e.samples_used;
        rhs.converged = rhs.converged && e.converged;
    }
    out.rhs = rhs;
    const double sup = sup_bound(f) * sup_bound(g);
    out.inner_tail = std::isinf(sup) ? sup
                                     : sup * unit_sphere_area(p.d) * std::pow(2.0, p.alpha * (j_min - 1)) / p.alpha;
    const double R = p.theta == 0.0   ? riesz_truncation(f, x)
                     : p.theta == 1.0 ? riesz_truncation(g, x)
                                      : bilinear_truncation(f, g, p.theta, x);
    out.covers_support = std::ldexp(1.0, j_max) >= R;
    return out;
}

}  // namespace fraclab
