#include "fraclab/functions.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// int_0^1 exp(-1/(1-s^2)) s^{d-1} ds
constexpr double kBumpRadialMoment[4] = {0.0, 0.221996908084039718911, 0.0742477533879610239592,
                                         0.0351007383764877049942};

const double kInvE = std::exp(-1.0);

void check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3, got " + std::to_string(d));
}

void check_point(const Point& p, int d, const char* what) {
    if (p.dim != d) throw ValidationError(std::string(what) + " has dimension " + std::to_string(p.dim));
    if (!p.finite()) throw ValidationError(std::string(what) + " is not finite");
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive and finite");
}

int set_dim(const SimpleSet& s) {
    return std::visit(overloaded{[](const IndicatorBall& b) { return b.center.dim; },
                                 [](const IndicatorBox& b) { return b.corner.dim; }},
                      s);
}

void validate_ball(const IndicatorBall& b) {
    check_dim(b.center.dim);
    check_point(b.center, b.center.dim, "ball center");
    check_positive(b.radius, "ball radius");
}

void validate_box(const IndicatorBox& b) {
    check_dim(b.corner.dim);
    check_point(b.corner, b.corner.dim, "box corner");
    check_point(b.sides, b.corner.dim, "box sides");
    for (int i = 0; i < b.corner.dim; ++i) check_positive(b.sides[i], "box side");
}

bool in_ball(const IndicatorBall& b, const Point& x) {
    if (x.dim == 1) return std::abs(x[0] - b.center[0]) <= b.radius;
    return norm_sq(x - b.center) <= b.radius * b.radius;
}

bool in_box(const IndicatorBox& b, const Point& x) {
    for (int i = 0; i < x.dim; ++i)
        if (x[i] < b.corner[i] || x[i] > b.corner[i] + b.sides[i]) return false;
    return true;
}

double bump_amplitude(const SmoothBump& b) {
    if (std::isinf(b.p)) return 1.0;
    return std::pow(b.scale, -static_cast<double>(b.dim) / b.p);
}

Box ball_box(const Point& c, double r) {
    Box bx{c, c};
    for (int i = 0; i < c.dim; ++i) {
        bx.lo[i] -= r;
        bx.hi[i] += r;
    }
    return bx;
}

Box set_box(const SimpleSet& s) {
    return std::visit(overloaded{[](const IndicatorBall& b) { return ball_box(b.center, b.radius); },
                                 [](const IndicatorBox& b) { return Box{b.corner, b.corner + b.sides}; }},
                      s);
}

void sphere_hits(const Point& o, const Point& v, const Point& c, double r, std::vector<Breakpoint>& out) {
    const Point w = o - c;
    const double a = norm_sq(v);
    if (a == 0.0) return;
    const double b = dot(v, w);
    const double cc = norm_sq(w) - r * r;
    const double disc = b * b - a * cc;
    if (disc <= 0.0) return;
    const double sq = std::sqrt(disc);
    // Stable root pair.
    const double q = b >= 0.0 ? -(b + sq) : -(b - sq);
    double s1 = q / a;
    double s2 = q != 0.0 ? cc / q : -s1;
    for (double s : {s1, s2})
        if (s > 0.0 && std::isfinite(s)) out.push_back({s, false});
}

void box_hits(const Point& o, const Point& v, const Point& lo, const Point& hi, std::vector<Breakpoint>& out) {
    for (int i = 0; i < o.dim; ++i) {
        if (v[i] == 0.0) continue;
        for (double face : {lo[i], hi[i]}) {
            const double s = (face - o[i]) / v[i];
            if (s > 0.0 && std::isfinite(s)) out.push_back({s, false});
        }
    }
}

void set_hits(const SimpleSet& set, const Point& o, const Point& v, std::vector<Breakpoint>& out) {
    std::visit(overloaded{[&](const IndicatorBall& b) { sphere_hits(o, v, b.center, b.radius, out); },
                          [&](const IndicatorBox& b) { box_hits(o, v, b.corner, b.corner + b.sides, out); }},
               set);
}

SimpleSet scale_set(const SimpleSet& s, double lambda) {
    return std::visit(overloaded{[&](const IndicatorBall& b) -> SimpleSet {
                                     return IndicatorBall{(1.0 / lambda) * b.center, b.radius / lambda};
                                 },
                                 [&](const IndicatorBox& b) -> SimpleSet {
                                     return IndicatorBox{(1.0 / lambda) * b.corner, (1.0 / lambda) * b.sides};
                                 }},
                      s);
}

SimpleSet shift_set(const SimpleSet& s, const Point& z) {
    return std::visit(overloaded{[&](const IndicatorBall& b) -> SimpleSet { return IndicatorBall{b.center + z, b.radius}; },
                                 [&](const IndicatorBox& b) -> SimpleSet { return IndicatorBox{b.corner + z, b.sides}; }},
                      s);
}

}  // namespace

std::size_t GridFunction::size() const {
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= shape[static_cast<std::size_t>(i)];
    return n;
}

Point GridFunction::node(std::size_t flat) const {
    Point p = origin;
    for (int i = dim() - 1; i >= 0; --i) {
        const std::size_t ni = shape[static_cast<std::size_t>(i)];
        p[i] += spacing * static_cast<double>(flat % ni);
        flat /= ni;
    }
    return p;
}

FunctionSpec zero_function(int d) {
    check_dim(d);
    return SimpleFunction{d, {}};
}

int dimension(const FunctionSpec& f) {
    return std::visit(overloaded{[](const IndicatorBall& b) { return b.center.dim; },
                                 [](const IndicatorBox& b) { return b.corner.dim; },
                                 [](const SimpleFunction& s) { return s.dim; },
                                 [](const RadialPowerLog& h) { return h.dim; },
                                 [](const SmoothBump& b) { return b.dim; },
                                 [](const GridFunction& g) { return g.dim(); }},
                      f);
}

std::string kind_name(const FunctionSpec& f) {
    static const char* names[] = {"ball", "box", "simple", "radial_power_log", "smooth_bump", "grid"};
    return names[f.index()];
}

void validate(const FunctionSpec& f) {
    std::visit(overloaded{
                   [](const IndicatorBall& b) { validate_ball(b); },
                   [](const IndicatorBox& b) { validate_box(b); },
                   [](const SimpleFunction& s) {
                       check_dim(s.dim);
                       for (const auto& t : s.terms) {
                           if (!(t.coefficient >= 0.0) || !std::isfinite(t.coefficient))
                               throw ValidationError("simple function coefficient must be nonnegative and finite");
                           if (set_dim(t.set) != s.dim) throw ValidationError("simple function term has wrong dimension");
                           std::visit(overloaded{[](const IndicatorBall& b) { validate_ball(b); },
                                                 [](const IndicatorBox& b) { validate_box(b); }},
                                      t.set);
                       }
                   },
                   [](const RadialPowerLog& h) {
                       check_dim(h.dim);
                       check_point(h.center, h.dim, "power-log center");
                       if (!(h.alpha > 0.0 && h.alpha < h.dim))
                           throw ValidationError("power-log alpha must lie in (0, d)");
                       if (!(h.kappa >= 0.0) || !std::isfinite(h.kappa))
                           throw ValidationError("power-log kappa must be nonnegative");
                       check_positive(h.cutoff, "power-log cutoff");
                       if (h.kappa > 0.0 && h.cutoff > kInvE * (1.0 + 1e-15))
                           throw ValidationError("power-log cutoff must be at most 1/e when kappa > 0");
                   },
                   [](const SmoothBump& b) {
                       check_dim(b.dim);
                       check_point(b.center, b.dim, "bump center");
                       check_positive(b.scale, "bump scale");
                       if (!(b.p >= 1.0)) throw ValidationError("bump exponent p must lie in [1, inf]");
                   },
                   [](const GridFunction& g) {
                       check_dim(g.dim());
                       check_point(g.origin, g.dim(), "grid origin");
                       check_positive(g.spacing, "grid spacing");
                       for (int i = 0; i < g.dim(); ++i)
                           if (g.shape[static_cast<std::size_t>(i)] < 1) throw ValidationError("grid shape entries must be >= 1");
                       if (g.values.size() != g.size())
                           throw ValidationError("grid has " + std::to_string(g.values.size()) + " values, shape needs " +
                                                 std::to_string(g.size()));
                       for (double v : g.values)
                           if (!(v >= 0.0) || !std::isfinite(v))
                               throw ValidationError("grid values must be nonnegative and finite");
                   }},
               f);
}

double bump_normalization(int d) {
    check_dim(d);
    return std::pow(8.0, d) / (unit_sphere_area(d) * kBumpRadialMoment[d]);
}

double bump_profile(int d, double r) {
    const double z = 8.0 * r;
    if (!(z < 1.0)) return 0.0;
    return bump_normalization(d) * std::exp(-1.0 / (1.0 - z * z));
}

double evaluate(const FunctionSpec& f, const Point& x) {
    return std::visit(
        overloaded{
            [&](const IndicatorBall& b) { return in_ball(b, x) ? 1.0 : 0.0; },
            [&](const IndicatorBox& b) { return in_box(b, x) ? 1.0 : 0.0; },
            [&](const SimpleFunction& s) {
                double v = 0.0;
                for (const auto& t : s.terms) {
                    const bool in = std::visit(overloaded{[&](const IndicatorBall& b) { return in_ball(b, x); },
                                                          [&](const IndicatorBox& b) { return in_box(b, x); }},
                                               t.set);
                    if (in) v += t.coefficient;
                }
                return v;
            },
            [&](const RadialPowerLog& h) {
                const double r = norm(x - h.center);
                if (r > h.cutoff) return 0.0;
                if (r == 0.0) return std::numeric_limits<double>::infinity();
                double v = std::pow(r, -h.alpha);
                if (h.kappa != 0.0) v *= std::pow(std::log(1.0 / r), -h.kappa);
                return v;
            },
            [&](const SmoothBump& b) { return bump_amplitude(b) * bump_profile(b.dim, norm(x - b.center) / b.scale); },
            [&](const GridFunction& g) {
                const int d = g.dim();
                std::array<std::size_t, kMaxDim> i0{};
                std::array<double, kMaxDim> fr{};
                for (int k = 0; k < d; ++k) {
                    const std::size_t nk = g.shape[static_cast<std::size_t>(k)];
                    const double s = (x[k] - g.origin[k]) / g.spacing;
                    if (s < 0.0 || s > static_cast<double>(nk - 1)) return 0.0;
                    if (nk == 1) {
                        i0[static_cast<std::size_t>(k)] = 0;
                        fr[static_cast<std::size_t>(k)] = 0.0;
                        continue;
                    }
                    std::size_t i = static_cast<std::size_t>(std::floor(s));
                    if (i > nk - 2) i = nk - 2;
                    i0[static_cast<std::size_t>(k)] = i;
                    fr[static_cast<std::size_t>(k)] = s - static_cast<double>(i);
                }
                double v = 0.0;
                for (int corner = 0; corner < (1 << d); ++corner) {
                    double w = 1.0;
                    std::size_t flat = 0;
                    for (int k = 0; k < d; ++k) {
                        const auto ku = static_cast<std::size_t>(k);
                        const int bit = (corner >> k) & 1;
                        w *= bit ? fr[ku] : 1.0 - fr[ku];
                        std::size_t idx = i0[ku] + static_cast<std::size_t>(bit);
                        if (idx >= g.shape[ku]) idx = g.shape[ku] - 1;
                        flat = flat * g.shape[ku] + idx;
                    }
                    if (w != 0.0) v += w * g.values[flat];
                }
                return v;
            }},
        f);
}

FunctionSpec dilate(const FunctionSpec& base, double t, double p) {
    const auto* b = std::get_if<SmoothBump>(&base);
    if (!b) throw ValidationError("dilate expects a smooth bump");
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("dilation scale t must be positive");
    if (!(p >= 1.0)) throw ValidationError("dilation exponent p must lie in [1, inf]");
    return SmoothBump{b->dim, t, p, b->center};
}

FunctionSpec make_h(int d, double alpha) {
    check_dim(d);
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
    return RadialPowerLog{d, alpha, (d + alpha) / (2.0 * d), kInvE, Point::zero(d)};
}

bool is_unbounded(const FunctionSpec& f) { return std::holds_alternative<RadialPowerLog>(f); }

double sup_bound(const FunctionSpec& f) {
    return std::visit(overloaded{[](const IndicatorBall&) { return 1.0; },
                                 [](const IndicatorBox&) { return 1.0; },
                                 [](const SimpleFunction& s) {
                                     double v = 0.0;
                                     for (const auto& t : s.terms) v += t.coefficient;
                                     return v;
                                 },
                                 [](const RadialPowerLog&) { return std::numeric_limits<double>::infinity(); },
                                 [](const SmoothBump& b) { return bump_amplitude(b) * bump_profile(b.dim, 0.0); },
                                 [](const GridFunction& g) {
                                     double v = 0.0;
                                     for (double x : g.values) v = std::max(v, x);
                                     return v;
                                 }},
                      f);
}

Box support_box(const FunctionSpec& f) {
    return std::visit(overloaded{[](const IndicatorBall& b) { return ball_box(b.center, b.radius); },
                                 [](const IndicatorBox& b) { return Box{b.corner, b.corner + b.sides}; },
                                 [](const SimpleFunction& s) {
                                     if (s.terms.empty()) return Box{Point(s.dim), Point(s.dim)};
                                     Box bx = set_box(s.terms[0].set);
                                     for (const auto& t : s.terms) bx = bx.hull(set_box(t.set));
                                     return bx;
                                 },
                                 [](const RadialPowerLog& h) { return ball_box(h.center, h.cutoff); },
                                 [](const SmoothBump& b) { return ball_box(b.center, b.scale / 8.0); },
                                 [](const GridFunction& g) {
                                     Box bx{g.origin, g.origin};
                                     for (int i = 0; i < g.dim(); ++i)
                                         bx.hi[i] += g.spacing * static_cast<double>(g.shape[static_cast<std::size_t>(i)] - 1);
                                     return bx;
                                 }},
                      f);
}

bool is_zero(const FunctionSpec& f) {
    if (const auto* s = std::get_if<SimpleFunction>(&f)) {
        for (const auto& t : s->terms)
            if (t.coefficient > 0.0) return false;
        return true;
    }
    if (const auto* g = std::get_if<GridFunction>(&f))
        return std::all_of(g->values.begin(), g->values.end(), [](double v) { return v == 0.0; });
    return false;
}

SupportBall support_ball(const FunctionSpec& f) {
    if (is_zero(f)) return {Point(dimension(f)), 0.0, true};
    return std::visit(overloaded{[](const IndicatorBall& b) { return SupportBall{b.center, b.radius, false}; },
                                 [](const RadialPowerLog& h) { return SupportBall{h.center, h.cutoff, false}; },
                                 [](const SmoothBump& b) { return SupportBall{b.center, b.scale / 8.0, false}; },
                                 [&](const auto&) {
                                     const Box bx = support_box(f);
                                     const Point c = 0.5 * (bx.lo + bx.hi);
                                     return SupportBall{c, 0.5 * norm(bx.hi - bx.lo), false};
                                 }},
                      f);
}

std::vector<Breakpoint> ray_breakpoints(const FunctionSpec& f, const Point& o, const Point& v) {
    std::vector<Breakpoint> out;
    std::visit(overloaded{[&](const IndicatorBall& b) { sphere_hits(o, v, b.center, b.radius, out); },
                          [&](const IndicatorBox& b) { box_hits(o, v, b.corner, b.corner + b.sides, out); },
                          [&](const SimpleFunction& s) {
                              for (const auto& t : s.terms) set_hits(t.set, o, v, out);
                          },
                          [&](const RadialPowerLog& h) {
                              sphere_hits(o, v, h.center, h.cutoff, out);
                              const double a = norm_sq(v);
                              if (a > 0.0) {
                                  const double s0 = -dot(v, o - h.center) / a;
                                  if (s0 > 0.0) {
                                      const double miss = norm(o + s0 * v - h.center);
                                      if (miss < h.cutoff) out.push_back({s0, true});
                                  }
                              }
                          },
                          [&](const SmoothBump& b) { sphere_hits(o, v, b.center, b.scale / 8.0, out); },
                          [&](const GridFunction& g) {
                              const Box bx = support_box(g);
                              box_hits(o, v, bx.lo, bx.hi, out);
                          }},
               f);
    std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.s < b.s; });
    return out;
}

FunctionSpec translate(const FunctionSpec& f, const Point& z) {
    return std::visit(overloaded{[&](const IndicatorBall& b) -> FunctionSpec { return IndicatorBall{b.center + z, b.radius}; },
                                 [&](const IndicatorBox& b) -> FunctionSpec { return IndicatorBox{b.corner + z, b.sides}; },
                                 [&](const SimpleFunction& s) -> FunctionSpec {
                                     SimpleFunction r{s.dim, {}};
                                     for (const auto& t : s.terms) r.terms.push_back({t.coefficient, shift_set(t.set, z)});
                                     return r;
                                 },
                                 [&](const RadialPowerLog& h) -> FunctionSpec {
                                     RadialPowerLog r = h;
                                     r.center = h.center + z;
                                     return r;
                                 },
                                 [&](const SmoothBump& b) -> FunctionSpec {
                                     SmoothBump r = b;
                                     r.center = b.center + z;
                                     return r;
                                 },
                                 [&](const GridFunction& g) -> FunctionSpec {
                                     GridFunction r = g;
                                     r.origin = g.origin + z;
                                     return r;
                                 }},
                      f);
}

FunctionSpec scale_argument(const FunctionSpec& f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("argument scale must be positive");
    return std::visit(overloaded{[&](const IndicatorBall& b) -> FunctionSpec { return std::get<IndicatorBall>(scale_set(b, lambda)); },
                                 [&](const IndicatorBox& b) -> FunctionSpec { return std::get<IndicatorBox>(scale_set(b, lambda)); },
                                 [&](const SimpleFunction& s) -> FunctionSpec {
                                     SimpleFunction r{s.dim, {}};
                                     for (const auto& t : s.terms) r.terms.push_back({t.coefficient, scale_set(t.set, lambda)});
                                     return r;
                                 },
                                 [&](const GridFunction& g) -> FunctionSpec {
                                     GridFunction r = g;
                                     r.origin = (1.0 / lambda) * g.origin;
                                     r.spacing = g.spacing / lambda;
                                     return r;
                                 },
                                 [&](const auto&) -> FunctionSpec {
                                     throw ValidationError("argument scaling is not supported for " + kind_name(f));
                                 }},
                      f);
}

FunctionSpec scale_value(const FunctionSpec& f, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("value scale must be nonnegative");
    return std::visit(overloaded{[&](const IndicatorBall& b) -> FunctionSpec { return SimpleFunction{b.center.dim, {{c, b}}}; },
                                 [&](const IndicatorBox& b) -> FunctionSpec { return SimpleFunction{b.corner.dim, {{c, b}}}; },
                                 [&](const SimpleFunction& s) -> FunctionSpec {
                                     SimpleFunction r = s;
                                     for (auto& t : r.terms) t.coefficient *= c;
                                     return r;
                                 },
                                 [&](const GridFunction& g) -> FunctionSpec {
                                     GridFunction r = g;
                                     for (double& v : r.values) v *= c;
                                     return r;
                                 },
                                 [&](const auto&) -> FunctionSpec {
                                     throw ValidationError("value scaling is not supported for " + kind_name(f));
                                 }},
                      f);
}

}  // namespace fraclab
