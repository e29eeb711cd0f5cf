#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/lemmas.hpp"

namespace fraclab {
namespace {

struct Line {
    double slope;
    double intercept;
};

WeightedInterval from_set(const SimpleSet& s, double c) {
    if (const auto* b = std::get_if<IndicatorBall>(&s)) return {c, b->center[0] - b->radius, b->center[0] + b->radius};
    const auto& b = std::get<IndicatorBox>(s);
    return {c, b.corner[0], b.corner[0] + b.sides[0]};
}

// int over a segment of length h of (linear from v0 to v1)^q
double segment_power(double h, double v0, double v1, double q) {
    v0 = std::max(v0, 0.0);
    v1 = std::max(v1, 0.0);
    const double scale = std::max(v0, v1);
    if (scale == 0.0) return 0.0;
    if (std::abs(v1 - v0) <= 1e-13 * scale) return h * std::pow(0.5 * (v0 + v1), q);
    return h * (std::pow(v1, q + 1.0) - std::pow(v0, q + 1.0)) / ((q + 1.0) * (v1 - v0));
}

}  // namespace

std::vector<WeightedInterval> intervals_of(const FunctionSpec& f) {
    validate(f);
    if (dimension(f) != 1) throw ValidationError("dyadic profiles are one-dimensional");
    std::vector<WeightedInterval> out;
    if (const auto* b = std::get_if<IndicatorBall>(&f)) {
        out.push_back(from_set(*b, 1.0));
    } else if (const auto* b = std::get_if<IndicatorBox>(&f)) {
        out.push_back(from_set(*b, 1.0));
    } else if (const auto* s = std::get_if<SimpleFunction>(&f)) {
        for (const auto& t : s->terms) {
            if (t.coefficient < 0.0) throw ValidationError("indicator data needs nonnegative coefficients");
            if (t.coefficient == 0.0) continue;
            out.push_back(from_set(t.set, t.coefficient));
        }
    } else {
        throw ValidationError("indicator data expected, got " + kind_name(f));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const WeightedInterval& w) { return !(w.hi > w.lo); }),
              out.end());
    return out;
}

DyadicProfile::DyadicProfile(const FunctionSpec& f, const FunctionSpec& g, double theta, int j)
    : f_(intervals_of(f)), g_(intervals_of(g)), theta_(theta), radius_(std::ldexp(1.0, j)) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ValidationError("theta must lie in [0, 1]");
    const double th = theta_, R = radius_;
    for (const auto& a : f_) {
        for (const auto& b : g_) {
            std::vector<Line> lines{{0.0, -R}, {0.0, R}};
            if (th < 1.0) {
                lines.push_back({1.0 / (1.0 - th), -a.hi / (1.0 - th)});
                lines.push_back({1.0 / (1.0 - th), -a.lo / (1.0 - th)});
            } else {
                knots_.push_back(a.lo);
                knots_.push_back(a.hi);
            }
            if (th > 0.0) {
                lines.push_back({-1.0 / th, b.lo / th});
                lines.push_back({-1.0 / th, b.hi / th});
            } else {
                knots_.push_back(b.lo);
                knots_.push_back(b.hi);
            }
            for (std::size_t u = 0; u < lines.size(); ++u)
                for (std::size_t v = u + 1; v < lines.size(); ++v)
                    if (lines[u].slope != lines[v].slope)
                        knots_.push_back((lines[v].intercept - lines[u].intercept) / (lines[u].slope - lines[v].slope));
        }
    }
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

double DyadicProfile::pair_length(const WeightedInterval& a, const WeightedInterval& b, double x) const {
    double lo = -radius_, hi = radius_;
    if (theta_ < 1.0) {
        lo = std::max(lo, (x - a.hi) / (1.0 - theta_));
        hi = std::min(hi, (x - a.lo) / (1.0 - theta_));
    } else if (x < a.lo || x > a.hi) {
        return 0.0;
    }
    if (theta_ > 0.0) {
        lo = std::max(lo, (b.lo - x) / theta_);
        hi = std::min(hi, (b.hi - x) / theta_);
    } else if (x < b.lo || x > b.hi) {
        return 0.0;
    }
    return hi > lo ? a.coefficient * b.coefficient * (hi - lo) : 0.0;
}

double DyadicProfile::operator()(double x) const {
    double s = 0.0;
    for (const auto& a : f_)
        for (const auto& b : g_) s += pair_length(a, b, x);
    return s;
}

// The profile is linear strictly between consecutive cuts; its end values
// are extrapolated from two interior points so jumps do not leak in.
double DyadicProfile::integrate_power(double q, const std::vector<double>& cuts) const {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double u = cuts[k], v = cuts[k + 1];
        const double h = v - u;
        if (!(h > 0.0)) continue;
        const double m1 = u + 0.25 * h, m2 = u + 0.75 * h;
        const double f1 = (*this)(m1), f2 = (*this)(m2);
        const double slope = (f2 - f1) / (0.5 * h);
        total += segment_power(h, f1 - 0.25 * h * slope, f2 + 0.25 * h * slope, q);
    }
    return total;
}

double DyadicProfile::lebesgue(double q) const {
    if (!(q > 0.0)) throw ValidationError("exponent must be positive");
    return std::pow(integrate_power(q, knots_), 1.0 / q);
}

double DyadicProfile::lebesgue_on(double q, const std::vector<Interval>& E) const {
    if (!(q > 0.0)) throw ValidationError("exponent must be positive");
    double total = 0.0;
    for (const Interval& e : E) {
        if (!(e.hi >= e.lo)) throw ValidationError("set interval has hi < lo");
        std::vector<double> cuts{e.lo};
        for (double k : knots_)
            if (k > e.lo && k < e.hi) cuts.push_back(k);
        cuts.push_back(e.hi);
        total += integrate_power(q, cuts);
    }
    return std::pow(total, 1.0 / q);
}

double DyadicProfile::integral_on(const std::vector<Interval>& E) const { return lebesgue_on(1.0, E); }

}  // namespace fraclab
