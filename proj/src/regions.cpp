#include "fraclab/regions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"
#include "fraclab/function_json.hpp"

namespace fraclab {
namespace {

constexpr double kTol = 1e-12;
constexpr long long kMaxExactDigits = 9;

int compare(const Exact& a, const Exact& b) {
    if (a.exact && b.exact) return *a.exact < *b.exact ? -1 : (*b.exact < *a.exact ? 1 : 0);
    const double diff = a.value - b.value;
    if (std::abs(diff) <= kTol) return 0;
    return diff < 0.0 ? -1 : 1;
}

Exact add(const Exact& a, const Exact& b) {
    Exact out{a.value + b.value, std::nullopt};
    if (a.exact && b.exact) out.exact = *a.exact + *b.exact;
    return out;
}

Exact sub(const Exact& a, const Exact& b) {
    Exact out{a.value - b.value, std::nullopt};
    if (a.exact && b.exact) out.exact = *a.exact - *b.exact;
    return out;
}

Exact constant(long long n) { return Exact{static_cast<double>(n), Rational(n)}; }

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

bool all_digits(const std::string& s) {
    return !s.empty() && static_cast<long long>(s.size()) <= kMaxExactDigits &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<Rational> parse_rational(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; }), s.end());
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    std::optional<Rational> r;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        if (!all_digits(a) || !all_digits(b) || std::stoll(b) == 0) return std::nullopt;
        r = Rational(std::stoll(a), std::stoll(b));
    } else if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!all_digits(ip) || !all_digits(fp)) return std::nullopt;
        long long den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        r = Rational(std::stoll(ip)) + Rational(std::stoll(fp), den);
    } else {
        if (!all_digits(s)) return std::nullopt;
        r = Rational(std::stoll(s));
    }
    if (neg) *r = -*r;
    return r;
}

bool is_inf_text(const std::string& s) { return s == "inf" || s == "infinity" || s == "+inf"; }

RegionClass make_class(Region region, Bound bound, const char* estimate, const char* uniformity) {
    RegionClass c;
    c.region = region;
    c.bound = bound;
    c.estimate = estimate;
    c.uniformity = uniformity;
    return c;
}

constexpr const char* kUniform = "uniform in theta on [0, 1]";

double log2_term_A1(int j, double p, double alpha, int d, double log2R) {
    return 0.5 * (alpha - d / p) * j + std::min(static_cast<double>(d) * j, log2R) / (2.0 * p);
}

double log2_term_A2(int j, double p, double alpha, double log2S, double log2R) {
    return alpha * (1.0 - p) * j + std::min(alpha * p * j + log2S, log2R);
}

// Terms are unimodal with the peak at j0 or j0 + 1; walk outward until they fall below 1e-30 of the peak.
template <class Term>
SeriesSum unimodal_sum(Term log2_term, int j0) {
    const double peak = std::max(log2_term(j0), log2_term(j0 + 1));
    const double floor = peak + std::log2(1e-30);
    constexpr int kMaxSteps = 1'000'000;
    int lo = j0, hi = j0 + 1;
    while (log2_term(lo - 1) >= floor) {
        if (j0 - lo > kMaxSteps) throw NumericalError("series terms decay too slowly to sum");
        --lo;
    }
    while (log2_term(hi + 1) >= floor) {
        if (hi - j0 > kMaxSteps) throw NumericalError("series terms decay too slowly to sum");
        ++hi;
    }
    SeriesSum s;
    s.j_lo = lo;
    s.j_hi = hi;
    for (int j = lo; j <= hi; ++j) s.value += std::exp2(log2_term(j));
    return s;
}

int clamp_index(double x) {
    if (!(std::abs(x) < 1e8)) throw ValidationError("series parameter is out of range");
    return static_cast<int>(std::floor(x));
}

}  // namespace

Exact exact_from_text(const std::string& text) {
    Exact e;
    e.value = parse_exponent(text);
    e.exact = parse_rational(text);
    if (e.exact) e.value = to_double(*e.exact);
    return e;
}

Exact reciprocal_of_exponent(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (is_inf_text(t)) return constant(0);
    const Exact x = exact_from_text(text);
    Exact out{1.0 / x.value, std::nullopt};
    if (x.exact && x.exact->numerator() != 0) {
        out.exact = Rational(1) / *x.exact;
        out.value = to_double(*out.exact);
    }
    return out;
}

double ExponentPoint::p() const { return inv_p.value == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_p.value; }
double ExponentPoint::q() const { return inv_q.value == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_q.value; }

ExponentPoint make_point(double p, double q, double alpha, int d) {
    ExponentPoint pt;
    pt.inv_p = Exact{std::isinf(p) ? 0.0 : 1.0 / p, std::nullopt};
    pt.inv_q = Exact{std::isinf(q) ? 0.0 : 1.0 / q, std::nullopt};
    if (std::isinf(p)) pt.inv_p.exact = Rational(0);
    if (std::isinf(q)) pt.inv_q.exact = Rational(0);
    if (p == 1.0) pt.inv_p.exact = Rational(1);
    if (q == 1.0) pt.inv_q.exact = Rational(1);
    pt.alpha = alpha;
    pt.d = d;
    pt.a = Exact{alpha / d, std::nullopt};
    validate(pt);
    return pt;
}

ExponentPoint make_point(const std::string& p, const std::string& q, const std::string& alpha, int d) {
    ExponentPoint pt;
    pt.inv_p = reciprocal_of_exponent(p);
    pt.inv_q = reciprocal_of_exponent(q);
    const Exact a = exact_from_text(alpha);
    pt.alpha = a.value;
    pt.d = d;
    pt.a = Exact{a.value / d, std::nullopt};
    if (a.exact && d > 0) {
        pt.a.exact = *a.exact / Rational(d);
        pt.a.value = to_double(*pt.a.exact);
    }
    validate(pt);
    return pt;
}

void validate(const ExponentPoint& pt) {
    if (pt.d < 1 || pt.d > 3) throw ValidationError("dimension must be 1, 2 or 3");
    if (!(pt.alpha > 0.0 && pt.alpha < pt.d)) throw ValidationError("alpha must lie in (0, d)");
    for (const Exact* x : {&pt.inv_p, &pt.inv_q}) {
        if (!std::isfinite(x->value)) throw ValidationError("exponent is not a number");
        if (compare(*x, constant(0)) < 0 || compare(*x, constant(1)) > 0)
            throw ValidationError("exponents p and q must lie in [1, inf]");
    }
}

std::string status_name(RExponent::Status s) {
    switch (s) {
        case RExponent::Status::Finite: return "finite";
        case RExponent::Status::Infinite: return "infinite";
        case RExponent::Status::Invalid: return "invalid";
    }
    return "invalid";
}

RExponent compute_r(const ExponentPoint& pt) {
    validate(pt);
    const Exact s = sub(add(pt.inv_p, pt.inv_q), pt.a);
    RExponent out;
    out.inv_r = s.exact ? to_double(*s.exact) : s.value;
    const int c = compare(s, constant(0));
    if (c < 0) {
        out.status = RExponent::Status::Invalid;
    } else if (c == 0) {
        out.status = RExponent::Status::Infinite;
        out.inv_r = 0.0;
        out.r = std::numeric_limits<double>::infinity();
    } else {
        out.status = RExponent::Status::Finite;
        out.r = s.exact ? to_double(Rational(1) / *s.exact) : 1.0 / s.value;
    }
    return out;
}

RExponent compute_r(double p, double q, double alpha, int d) { return compute_r(make_point(p, q, alpha, d)); }

std::string region_name(Region r) {
    switch (r) {
        case Region::SquareInterior: return "SquareInterior";
        case Region::EdgeTop: return "EdgeTop";
        case Region::EdgeRight: return "EdgeRight";
        case Region::EdgeBottom: return "EdgeBottom";
        case Region::EdgeLeft: return "EdgeLeft";
        case Region::CornerSW: return "CornerSW";
        case Region::CornerNE: return "CornerNE";
        case Region::PentagonInterior: return "PentagonInterior";
        case Region::PentagonBoundaryLower: return "PentagonBoundaryLower";
        case Region::Outside: return "Outside";
    }
    return "Outside";
}

Region region_from_name(const std::string& name) {
    for (Region r : {Region::SquareInterior, Region::EdgeTop, Region::EdgeRight, Region::EdgeBottom, Region::EdgeLeft,
                     Region::CornerSW, Region::CornerNE, Region::PentagonInterior, Region::PentagonBoundaryLower,
                     Region::Outside})
        if (region_name(r) == name) return r;
    throw ValidationError("unknown region '" + name + "'");
}

std::string bound_name(Bound b) {
    switch (b) {
        case Bound::UniformStrong: return "UniformStrong";
        case Bound::UniformWeak: return "UniformWeak";
        case Bound::WeakUniformAwayFromTheta1: return "WeakUniformAwayFromTheta1";
        case Bound::WeakUniformAwayFromTheta0: return "WeakUniformAwayFromTheta0";
        case Bound::WeakUniformAwayFromBoth: return "WeakUniformAwayFromBoth";
        case Bound::StrongNonuniform: return "StrongNonuniform";
        case Bound::LorentzRestrictedUniform: return "LorentzRestrictedUniform";
        case Bound::None: return "None";
    }
    return "None";
}

Region mirror(Region r) {
    switch (r) {
        case Region::EdgeTop: return Region::EdgeRight;
        case Region::EdgeRight: return Region::EdgeTop;
        case Region::EdgeBottom: return Region::EdgeLeft;
        case Region::EdgeLeft: return Region::EdgeBottom;
        default: return r;
    }
}

RegionClass classify(const ExponentPoint& pt) {
    validate(pt);
    const Exact& x = pt.inv_p;
    const Exact& y = pt.inv_q;
    const Exact& a = pt.a;
    const Exact one = constant(1), zero = constant(0);

    const int line = compare(add(x, y), a);
    if (line < 0) {
        RegionClass c = make_class(Region::Outside, Bound::None, "none", "no bound");
        c.note = "below the critical line 1/p + 1/q = alpha/d";
        return c;
    }
    if (line == 0) {
        RegionClass c = make_class(Region::PentagonBoundaryLower, Bound::None, "critical_line",
                                   "no bound for the operator itself");
        c.note = "r = inf; restricted weak-type endpoints hold with theta-dependent constants";
        c.endpoints = {{"restricted_weak_away_from_theta1", "(1-theta)^(-alpha)"},
                       {"restricted_weak_away_from_theta0", "theta^(-alpha)"}};
        return c;
    }

    const int xa = compare(x, a), ya = compare(y, a);
    const int x1 = compare(x, one), y1 = compare(y, one);
    if (xa >= 0 && ya >= 0) {
        if (x1 == 0 && y1 == 0) {
            RegionClass c = make_class(Region::CornerNE, Bound::UniformWeak, "ceiling+outer_wall", kUniform);
            c.note = "weak type from both adjacent edges; strong type here is open";
            return c;
        }
        if (xa == 0 && ya == 0) {
            RegionClass c = make_class(Region::CornerSW, Bound::WeakUniformAwayFromBoth, "bad_corner",
                                       "uniform for theta in [delta, 1-delta]");
            c.lorentz_uniform = true;
            c.note = "restricted to Lorentz L^{p,1} x L^{q,1} data the weak bound is uniform in theta";
            return c;
        }
        if (ya == 0) {
            RegionClass c = make_class(Region::EdgeBottom, Bound::WeakUniformAwayFromTheta1, "floor",
                                       "uniform for theta in [0, 1-delta]");
            c.lorentz_uniform = true;
            c.note = "restricted to Lorentz L^{q,1} data for g the weak bound is uniform in theta";
            return c;
        }
        if (xa == 0) {
            RegionClass c = make_class(Region::EdgeLeft, Bound::WeakUniformAwayFromTheta0, "inner_wall",
                                       "uniform for theta in [delta, 1]");
            c.lorentz_uniform = true;
            c.note = "restricted to Lorentz L^{p,1} data for f the weak bound is uniform in theta";
            return c;
        }
        if (y1 == 0) return make_class(Region::EdgeTop, Bound::UniformWeak, "ceiling", kUniform);
        if (x1 == 0) return make_class(Region::EdgeRight, Bound::UniformWeak, "outer_wall", kUniform);
        return make_class(Region::SquareInterior, Bound::UniformStrong, "uniform_strong", kUniform);
    }

    const bool open_box = compare(x, zero) > 0 && compare(y, zero) > 0 && x1 < 0 && y1 < 0;
    if (open_box)
        return make_class(Region::PentagonInterior, Bound::StrongNonuniform, "pentagon_strong",
                          "bounded for each theta; the constant degenerates at an endpoint");
    RegionClass c = make_class(Region::Outside, Bound::None, "none", "no bound");
    c.note = "on the pentagon boundary outside the square; no estimate is asserted";
    return c;
}

std::vector<AtlasEntry> reference_atlas() {
    return {
        {0.7, 0.7, Region::SquareInterior}, {0.7, 1.0, Region::EdgeTop},   {1.0, 0.7, Region::EdgeRight},
        {0.7, 0.5, Region::EdgeBottom},     {0.5, 0.7, Region::EdgeLeft},  {0.5, 0.5, Region::CornerSW},
        {1.0, 1.0, Region::CornerNE},       {0.3, 0.9, Region::PentagonInterior}, {0.2, 0.2, Region::Outside},
    };
}

SeriesSum series_A1(double p, double alpha, int d, double R) {
    if (d < 1 || d > 3) throw ValidationError("dimension must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
    if (!(p >= 1.0)) throw ValidationError("series A1 needs p >= 1");
    if (!(R > 0.0) || std::isinf(R)) throw ValidationError("series A1 needs 0 < R < inf");
    if (p * alpha >= d) throw DivergentSeries("series A1 diverges for p >= d/alpha");
    const double log2R = std::log2(R);
    auto term = [&](int j) { return log2_term_A1(j, p, alpha, d, log2R); };
    SeriesSum s = unimodal_sum(term, clamp_index(log2R / d));
    s.value *= s.value;
    return s;
}

SeriesSum series_A2(double p, double alpha, double S, double R) {
    if (!(alpha > 0.0)) throw ValidationError("series A2 needs alpha > 0");
    if (!(S > 0.0) || !(R > 0.0) || std::isinf(S) || std::isinf(R)) throw ValidationError("series A2 needs S, R in (0, inf)");
    if (std::isnan(p)) throw ValidationError("series A2 exponent is not a number");
    if (p <= 1.0) throw DivergentSeries("series A2 diverges for p <= 1");
    const double log2S = std::log2(S), log2R = std::log2(R);
    auto term = [&](int j) { return log2_term_A2(j, p, alpha, log2S, log2R); };
    return unimodal_sum(term, clamp_index((log2R - log2S) / (alpha * p)));
}

}  // namespace fraclab
