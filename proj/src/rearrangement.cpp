#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/functions.hpp"

namespace fraclab {
namespace {

constexpr double kSampleDecades = 40.0;  // Samples span [2^-40 T, T)
constexpr std::size_t kMaxCompressedCells = 4'000'000;

struct Piece {
    double value;
    double measure;
};

Rearrangement steps_from_pieces(std::vector<Piece> pieces, bool exact) {
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.value > b.value; });
    Rearrangement r;
    r.form = Rearrangement::Form::Steps;
    r.exact = exact;
    double t = 0.0;
    for (const Piece& p : pieces) {
        if (!(p.value > 0.0) || !(p.measure > 0.0)) continue;
        t += p.measure;
        if (!r.value.empty() && r.value.back() == p.value) {
            r.t.back() = t;
        } else {
            r.t.push_back(t);
            r.value.push_back(p.value);
        }
    }
    return r;
}

bool set_as_box(const SimpleSet& s, int d, Box& out) {
    if (const auto* b = std::get_if<IndicatorBox>(&s)) {
        out = Box{b->corner, b->corner + b->sides};
        return true;
    }
    const auto& ball = std::get<IndicatorBall>(s);
    if (d != 1) return false;
    out = Box{Point{ball.center[0] - ball.radius}, Point{ball.center[0] + ball.radius}};
    return true;
}

double set_measure(const SimpleSet& s, int d) {
    if (const auto* b = std::get_if<IndicatorBox>(&s)) {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= b->sides[i];
        return v;
    }
    const auto& ball = std::get<IndicatorBall>(s);
    return unit_ball_volume(d) * std::pow(ball.radius, d);
}

double box_point_distance(const Box& b, const Point& x) {
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) {
        const double e = std::max({b.lo[i] - x[i], 0.0, x[i] - b.hi[i]});
        s += e * e;
    }
    return std::sqrt(s);
}

bool sets_disjoint(const SimpleSet& a, const SimpleSet& b, int d) {
    Box ba, bb;
    const bool xa = set_as_box(a, d, ba), xb = set_as_box(b, d, bb);
    if (xa && xb) {
        for (int i = 0; i < d; ++i)
            if (ba.hi[i] < bb.lo[i] || bb.hi[i] < ba.lo[i]) return true;
        return false;
    }
    if (!xa && !xb) {
        const auto& p = std::get<IndicatorBall>(a);
        const auto& q = std::get<IndicatorBall>(b);
        return norm(p.center - q.center) > p.radius + q.radius;
    }
    const auto& ball = std::get<IndicatorBall>(xa ? b : a);
    const Box& box = xa ? ba : bb;
    return box_point_distance(box, ball.center) > ball.radius;
}

Rearrangement sampled(const FunctionSpec& f, std::size_t n, const Box& domain) {
    const int d = domain.dim();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    std::vector<Piece> pieces;
    pieces.reserve(total);
    double cell = 1.0;
    for (int i = 0; i < d; ++i) cell *= (domain.hi[i] - domain.lo[i]) / static_cast<double>(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point x(d);
        std::size_t rest = flat;
        for (int i = d - 1; i >= 0; --i) {
            const double h = (domain.hi[i] - domain.lo[i]) / static_cast<double>(n);
            x[i] = domain.lo[i] + h * (static_cast<double>(rest % n) + 0.5);
            rest /= n;
        }
        pieces.push_back({evaluate(f, x), cell});
    }
    return steps_from_pieces(std::move(pieces), false);
}

Rearrangement simple_exact(const SimpleFunction& s, std::size_t n, const Box& domain) {
    const int d = s.dim;
    std::vector<const SimpleTerm*> live;
    for (const auto& t : s.terms)
        if (t.coefficient > 0.0) live.push_back(&t);

    std::vector<Box> boxes(live.size());
    bool all_boxes = true;
    for (std::size_t k = 0; k < live.size(); ++k) all_boxes = all_boxes && set_as_box(live[k]->set, d, boxes[k]);

    if (all_boxes) {
        // Coordinate compression: the function is constant on every cell of
        // the grid spanned by all box faces.
        std::vector<std::vector<double>> cuts(static_cast<std::size_t>(d));
        std::size_t cells = 1;
        for (int i = 0; i < d; ++i) {
            auto& c = cuts[static_cast<std::size_t>(i)];
            for (const Box& b : boxes) {
                c.push_back(b.lo[i]);
                c.push_back(b.hi[i]);
            }
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            cells *= c.size() > 1 ? c.size() - 1 : 0;
        }
        if (cells <= kMaxCompressedCells) {
            std::vector<Piece> pieces;
            pieces.reserve(cells);
            for (std::size_t flat = 0; flat < cells; ++flat) {
                Point mid(d);
                double meas = 1.0;
                std::size_t rest = flat;
                for (int i = d - 1; i >= 0; --i) {
                    const auto& c = cuts[static_cast<std::size_t>(i)];
                    const std::size_t m = c.size() - 1;
                    const std::size_t j = rest % m;
                    rest /= m;
                    mid[i] = 0.5 * (c[j] + c[j + 1]);
                    meas *= c[j + 1] - c[j];
                }
                double v = 0.0;
                for (std::size_t k = 0; k < live.size(); ++k)
                    if (boxes[k].contains(mid)) v += live[k]->coefficient;
                pieces.push_back({v, meas});
            }
            return steps_from_pieces(std::move(pieces), true);
        }
    }

    bool disjoint = true;
    for (std::size_t a = 0; a < live.size() && disjoint; ++a)
        for (std::size_t b = a + 1; b < live.size() && disjoint; ++b)
            disjoint = sets_disjoint(live[a]->set, live[b]->set, d);
    if (disjoint) {
        std::vector<Piece> pieces;
        for (const SimpleTerm* t : live) pieces.push_back({t->coefficient, set_measure(t->set, d)});
        return steps_from_pieces(std::move(pieces), true);
    }
    return sampled(s, n, domain);
}

// log h as a function of L = log(1/r)
double powerlog_phi(const RadialPowerLog& h, double L) {
    return h.kappa == 0.0 ? h.alpha * L : h.alpha * L - h.kappa * std::log(L);
}

// Solves phi(L) = target for L in [lo, inf) on a branch where phi increases.
double solve_increasing(const RadialPowerLog& h, double lo, double target) {
    double hi = std::max(lo + 1.0, 2.0 * std::abs(lo) + 1.0);
    while (powerlog_phi(h, hi) <= target) hi = 2.0 * hi + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (powerlog_phi(h, mid) > target ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Solves phi(L) = target on [lo, hi] where phi decreases.
double solve_decreasing(const RadialPowerLog& h, double lo, double hi, double target) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (powerlog_phi(h, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double powerlog_distribution(const RadialPowerLog& h, double lambda) {
    const int d = h.dim;
    const double omega = unit_ball_volume(d);
    const double total = omega * std::pow(h.cutoff, d);
    if (!(lambda > 0.0)) return total;
    if (std::isinf(lambda)) return 0.0;
    const double ell = std::log(lambda);
    const double Lc = std::log(1.0 / h.cutoff);
    if (h.kappa == 0.0) {
        const double LA = ell / h.alpha;
        if (LA <= Lc) return total;
        return omega * std::exp(-d * LA);
    }
    const double Lstar = h.kappa / h.alpha;
    const double Lm = std::max(Lc, Lstar);
    if (powerlog_phi(h, Lm) > ell) return total;
    const double LA = solve_increasing(h, Lm, ell);
    double m = omega * std::exp(-d * LA);
    if (Lc < Lm && powerlog_phi(h, Lc) > ell) {
        const double LB = solve_decreasing(h, Lc, Lm, ell);
        m += omega * (std::pow(h.cutoff, d) - std::exp(-d * LB));
    }
    return m;
}

double bump_distribution(const SmoothBump& b, double lambda) {
    const int d = b.dim;
    const double amp = std::isinf(b.p) ? 1.0 : std::pow(b.scale, -static_cast<double>(d) / b.p);
    const double peak = amp * bump_normalization(d);
    const double q = lambda / peak;
    if (!(q > 0.0)) return unit_ball_volume(d) * std::pow(b.scale / 8.0, d);
    if (q >= std::exp(-1.0)) return 0.0;
    const double z = std::sqrt(1.0 + 1.0 / std::log(q));
    return unit_ball_volume(d) * std::pow(z * b.scale / 8.0, d);
}

// Smallest lambda with distribution <= t, by bisection in log lambda.
template <class Dist>
double invert_distribution(Dist dist, double t, double lo, double hi) {
    while (dist(hi) > t) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        (dist(mid) > t ? lo : hi) = mid;
    }
    return hi;
}

std::vector<double> sample_points(double total, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k)
        t[k] = total * std::exp2(-kSampleDecades * static_cast<double>(n - k) / static_cast<double>(n));
    return t;
}

void check_domain(const FunctionSpec& f, const Box& domain) {
    if (domain.dim() != dimension(f)) throw ValidationError("rearrangement domain has wrong dimension");
    for (int i = 0; i < domain.dim(); ++i)
        if (!(domain.hi[i] > domain.lo[i])) throw ValidationError("rearrangement domain is empty");
    if (is_zero(f)) return;
    const Box s = support_box(f);
    const double tol = 1e-12 * (1.0 + norm(s.hi - s.lo));
    for (int i = 0; i < domain.dim(); ++i)
        if (s.lo[i] < domain.lo[i] - tol || s.hi[i] > domain.hi[i] + tol)
            throw ValidationError("rearrangement domain does not cover the support of " + kind_name(f));
}

}  // namespace

double radial_distribution(const FunctionSpec& f, double lambda) {
    if (const auto* h = std::get_if<RadialPowerLog>(&f)) return powerlog_distribution(*h, lambda);
    if (const auto* b = std::get_if<SmoothBump>(&f)) return bump_distribution(*b, lambda);
    if (const auto* b = std::get_if<IndicatorBall>(&f))
        return lambda < 1.0 ? unit_ball_volume(b->center.dim) * std::pow(b->radius, b->center.dim) : 0.0;
    throw ValidationError("radial distribution needs a radial function, got " + kind_name(f));
}

Rearrangement decreasing_rearrangement_samples(const FunctionSpec& f, std::size_t n, const Box& domain) {
    validate(f);
    if (n < 1) throw ValidationError("rearrangement needs n >= 1");
    check_domain(f, domain);
    const int d = dimension(f);

    if (const auto* b = std::get_if<IndicatorBall>(&f))
        return steps_from_pieces({{1.0, unit_ball_volume(d) * std::pow(b->radius, d)}}, true);
    if (const auto* b = std::get_if<IndicatorBox>(&f)) {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= b->sides[i];
        return steps_from_pieces({{1.0, v}}, true);
    }
    if (const auto* s = std::get_if<SimpleFunction>(&f)) return simple_exact(*s, n, domain);
    if (const auto* g = std::get_if<GridFunction>(&f)) {
        const double cell = std::pow(g->spacing, d);
        std::vector<Piece> pieces;
        pieces.reserve(g->values.size());
        for (double v : g->values) pieces.push_back({v, cell});
        return steps_from_pieces(std::move(pieces), false);
    }

    Rearrangement r;
    r.form = Rearrangement::Form::Samples;
    r.exact = true;
    if (const auto* h = std::get_if<RadialPowerLog>(&f)) {
        const double omega = unit_ball_volume(d);
        r.t = sample_points(omega * std::pow(h->cutoff, d), n);
        for (double t : r.t) {
            if (h->kappa == 0.0) {
                r.value.push_back(std::pow(t / omega, -h->alpha / d));
            } else {
                r.value.push_back(
                    invert_distribution([&](double lam) { return powerlog_distribution(*h, lam); }, t, 1e-300, 1.0));
            }
        }
        return r;
    }
    const auto& b = std::get<SmoothBump>(f);
    const double omega = unit_ball_volume(d);
    r.t = sample_points(omega * std::pow(b.scale / 8.0, d), n);
    for (double t : r.t) {
        const double rad = std::pow(t / omega, 1.0 / d);
        Point x = b.center;
        x[0] += rad;
        r.value.push_back(evaluate(f, x));
    }
    return r;
}

Rearrangement rearrangement_from_samples(const std::vector<double>& values, const std::vector<double>& measures) {
    if (values.size() != measures.size()) throw ValidationError("values and measures differ in length");
    std::vector<Piece> pieces(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) pieces[i] = {values[i], measures[i]};
    return steps_from_pieces(std::move(pieces), false);
}

double rearrangement_value(const Rearrangement& r, double t) {
    if (r.t.empty()) return 0.0;
    if (r.form == Rearrangement::Form::Steps) {
        const auto it = std::upper_bound(r.t.begin(), r.t.end(), t);
        if (it == r.t.end()) return 0.0;
        return r.value[static_cast<std::size_t>(it - r.t.begin())];
    }
    if (t <= r.t.front()) return r.value.front();
    if (t >= r.t.back()) return r.value.back();
    const auto it = std::upper_bound(r.t.begin(), r.t.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - r.t.begin());
    const double w = (t - r.t[k - 1]) / (r.t[k] - r.t[k - 1]);
    return (1.0 - w) * r.value[k - 1] + w * r.value[k];
}

}  // namespace fraclab
