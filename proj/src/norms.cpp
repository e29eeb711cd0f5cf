#include "fraclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/simd/kernels.hpp"

namespace fraclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_exponent(double p, bool allow_inf, const char* what) {
    if (!(p > 0.0)) throw ValidationError(std::string(what) + " exponent must be positive");
    if (std::isinf(p) && !allow_inf) throw ValidationError(std::string(what) + " exponent must be finite");
    if (std::isnan(p)) throw ValidationError(std::string(what) + " exponent is not a number");
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("distribution level must be positive");
}

std::size_t exact_resolution(int d) { return d == 1 ? 4096 : d == 2 ? 1024 : 128; }

// Steps rearrangement of a function whose level sets are resolved exactly or by cells.
Rearrangement steps_of(const FunctionSpec& f) {
    const int d = dimension(f);
    if (is_zero(f)) return Rearrangement{};
    return decreasing_rearrangement_samples(f, exact_resolution(d), support_box(f));
}

bool is_radial(const FunctionSpec& f) {
    return std::holds_alternative<RadialPowerLog>(f) || std::holds_alternative<SmoothBump>(f);
}

double bump_amplitude(const SmoothBump& b) {
    return std::isinf(b.p) ? 1.0 : std::pow(b.scale, -static_cast<double>(b.dim) / b.p);
}

double bump_peak(const SmoothBump& b) { return bump_amplitude(b) * bump_normalization(b.dim) * std::exp(-1.0); }

double powerlog_value_at(const RadialPowerLog& h, double L) {
    // r = e^{-L}
    return std::exp(h.alpha * L) * (h.kappa == 0.0 ? 1.0 : std::pow(L, -h.kappa));
}

// Largest lambda whose superlevel set is the whole support.
double powerlog_floor(const RadialPowerLog& h) {
    const double Lc = std::log(1.0 / h.cutoff);
    double v = powerlog_value_at(h, Lc);
    if (h.kappa > 0.0) {
        const double Lstar = h.kappa / h.alpha;
        if (Lstar > Lc) v = std::min(v, powerlog_value_at(h, Lstar));
    }
    return v;
}

double powerlog_lebesgue(const RadialPowerLog& h, double p) {
    if (std::isinf(p)) return kInf;
    const int d = h.dim;
    const double S = unit_sphere_area(d);
    const double a = d - h.alpha * p;
    const double kp = h.kappa * p;
    const double Lc = std::log(1.0 / h.cutoff);
    double integral;
    if (a < 0.0) return kInf;
    if (h.kappa == 0.0) {
        if (a == 0.0) return kInf;
        integral = S * std::pow(h.cutoff, a) / a;
    } else if (a == 0.0) {
        if (kp <= 1.0) return kInf;
        integral = S * std::pow(Lc, 1.0 - kp) / (kp - 1.0);
    } else {
        boost::math::quadrature::exp_sinh<double> q;
        const double I = q.integrate([&](double L) { return std::exp(-a * L) * std::pow(L, -kp); }, Lc, kInf);
        integral = S * I;
    }
    return std::pow(integral, 1.0 / p);
}

double bump_lebesgue(const SmoothBump& b, double p) {
    if (std::isinf(p)) return bump_peak(b);
    const int d = b.dim;
    boost::math::quadrature::tanh_sinh<double> q;
    const double I = q.integrate(
        [&](double z) {
            const double w = 1.0 - z * z;
            if (!(w > 0.0)) return 0.0;
            return std::exp(-p / w) * std::pow(z, d - 1);
        },
        0.0, 1.0);
    const double A = bump_amplitude(b) * bump_normalization(d);
    const double integral = std::pow(A, p) * unit_sphere_area(d) * std::pow(b.scale / 8.0, d) * I;
    return std::pow(integral, 1.0 / p);
}

double golden_max(const std::function<double(double)>& fn, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = fn(c), fe = fn(e);
    for (int it = 0; it < 120; ++it) {
        if (fc > fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = fn(e);
        }
    }
    return std::max(fc, fe);
}

// sup over log lambda in [lo, hi] of lambda mu(lambda)^{1/r}: grid scan then golden refinement.
double scan_weak(const FunctionSpec& f, double r, double lo, double hi) {
    auto fn = [&](double ell) {
        const double lam = std::exp(ell);
        return lam * std::pow(radial_distribution(f, lam), 1.0 / r);
    };
    constexpr int n = 4000;
    double best = -1.0;
    int arg = 0;
    for (int k = 0; k <= n; ++k) {
        const double v = fn(lo + (hi - lo) * k / n);
        if (v > best) {
            best = v;
            arg = k;
        }
    }
    const double step = (hi - lo) / n;
    const double a = lo + step * std::max(0, arg - 1), b = lo + step * std::min(n, arg + 1);
    return std::max(best, golden_max(fn, a, b));
}

double radial_weak(const FunctionSpec& f, double r) {
    if (const auto* h = std::get_if<RadialPowerLog>(&f)) {
        const int d = h->dim;
        const double crit = d / h->alpha;
        const double total = unit_ball_volume(d) * std::pow(h->cutoff, d);
        if (r > crit) return kInf;
        if (h->kappa == 0.0) {
            const double omega = unit_ball_volume(d);
            if (r == crit) return std::pow(omega, 1.0 / r);
            return std::pow(h->cutoff, -h->alpha) * std::pow(total, 1.0 / r);
        }
        const double lo = std::log(powerlog_floor(*h));
        return std::max(std::exp(lo) * std::pow(total, 1.0 / r), scan_weak(f, r, lo, lo + 400.0));
    }
    const auto& b = std::get<SmoothBump>(f);
    const double top = std::log(bump_peak(b));
    return scan_weak(f, r, top - 60.0, top);
}

double radial_lorentz(const FunctionSpec& f, double p) {
    auto mu = [&](double lam) { return std::pow(radial_distribution(f, lam), 1.0 / p); };
    if (const auto* h = std::get_if<RadialPowerLog>(&f)) {
        const int d = h->dim;
        const double crit = d / h->alpha;
        const double total = unit_ball_volume(d) * std::pow(h->cutoff, d);
        if (p > crit) return kInf;
        if (p == crit && h->kappa <= 1.0) return kInf;
        if (h->kappa == 0.0) {
            const double omega = unit_ball_volume(d);
            const double l0 = std::pow(h->cutoff, -h->alpha);
            const double e = crit / p;
            return p * (l0 * std::pow(total, 1.0 / p) + std::pow(omega, 1.0 / p) * std::pow(l0, 1.0 - e) / (e - 1.0));
        }
        const double l0 = powerlog_floor(*h);
        boost::math::quadrature::exp_sinh<double> q;
        return p * (l0 * std::pow(total, 1.0 / p) + q.integrate(mu, l0, kInf));
    }
    const auto& b = std::get<SmoothBump>(f);
    boost::math::quadrature::tanh_sinh<double> q;
    return p * q.integrate(mu, 0.0, bump_peak(b));
}

double steps_lebesgue(const Rearrangement& r, double p) {
    if (r.value.empty()) return 0.0;
    if (std::isinf(p)) return r.value.front();
    double s = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        s += (r.t[k] - prev) * std::pow(r.value[k], p);
        prev = r.t[k];
    }
    return std::pow(s, 1.0 / p);
}

double steps_distribution(const Rearrangement& r, double lambda) {
    double m = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        if (r.value[k] > lambda) m = r.t[k];
    return m;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Point SampledField::center(std::size_t flat) const {
    const int d = dim();
    Point x = Point::zero(d);
    for (int i = d - 1; i >= 0; --i) {
        const std::size_t n = cells[static_cast<std::size_t>(i)];
        const std::size_t k = flat % n;
        flat /= n;
        const double h = (box.hi[i] - box.lo[i]) / static_cast<double>(n);
        x[i] = box.lo[i] + (static_cast<double>(k) + 0.5) * h;
    }
    return x;
}

void validate(const SampledField& field) {
    const int d = field.dim();
    if (d < 1 || d > kMaxDim) throw ValidationError("sampled field must have dimension 1, 2 or 3");
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) {
        if (field.cells[static_cast<std::size_t>(i)] == 0) throw ValidationError("sampled field has an empty axis");
        if (!(field.box.hi[i] > field.box.lo[i])) throw ValidationError("sampled field box is empty");
        n *= field.cells[static_cast<std::size_t>(i)];
    }
    if (field.values.size() != n || field.measures.size() != n)
        throw ValidationError("sampled field arrays do not match the cell count");
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(field.measures[k] > 0.0)) throw ValidationError("sampled field has a cell of nonpositive measure");
        if (!std::isfinite(field.values[k]) || field.values[k] < 0.0)
            throw ValidationError("sampled field value at " + field.center(k).to_string() +
                                  " is not finite and nonnegative");
        total += field.measures[k];
    }
    const double vol = field.box.volume();
    if (std::abs(total - vol) > 1e-9 * vol) throw ValidationError("sampled field measures do not sum to the box volume");
}

std::array<std::size_t, kMaxDim> uniform_cells(int d, std::size_t n) {
    std::array<std::size_t, kMaxDim> c{1, 1, 1};
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = n;
    return c;
}

SampledField sample_field(const std::function<double(const Point&)>& fn, const Box& box,
                          const std::array<std::size_t, kMaxDim>& cells) {
    SampledField field;
    field.box = box;
    field.cells = cells;
    const int d = box.dim();
    if (d < 1 || d > kMaxDim) throw ValidationError("sampling box must have dimension 1, 2 or 3");
    std::size_t n = 1;
    double cell = 1.0;
    for (int i = 0; i < d; ++i) {
        const std::size_t c = cells[static_cast<std::size_t>(i)];
        if (c == 0) throw ValidationError("sampling needs at least one cell per axis");
        if (!(box.hi[i] > box.lo[i])) throw ValidationError("sampling box is empty");
        n *= c;
        cell *= (box.hi[i] - box.lo[i]) / static_cast<double>(c);
    }
    for (int i = d; i < kMaxDim; ++i) field.cells[static_cast<std::size_t>(i)] = 1;
    field.values.assign(n, 0.0);
    field.measures.assign(n, cell);
    parallel_for(n, [&](std::size_t k) { field.values[k] = fn(field.center(k)); });
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(field.values[k]))
            throw NumericalError("sampled value at " + field.center(k).to_string() + " is not finite");
    return field;
}

SampledField sample_function(const FunctionSpec& f, const Box& box, const std::array<std::size_t, kMaxDim>& cells) {
    validate(f);
    if (dimension(f) != box.dim()) throw ValidationError("sampling box has wrong dimension");
    return sample_field([&](const Point& x) { return evaluate(f, x); }, box, cells);
}

std::string norm_name(NormKind::Kind k) {
    switch (k) {
        case NormKind::Kind::Lebesgue: return "lp";
        case NormKind::Kind::WeakLebesgue: return "weak";
        case NormKind::Kind::LorentzP1: return "lorentz";
    }
    return "lp";
}

NormKind::Kind norm_kind_from_name(const std::string& name) {
    if (name == "lp" || name == "lebesgue") return NormKind::Kind::Lebesgue;
    if (name == "weak" || name == "weak_lebesgue") return NormKind::Kind::WeakLebesgue;
    if (name == "lorentz" || name == "lorentz_p1") return NormKind::Kind::LorentzP1;
    throw ValidationError("unknown norm kind '" + name + "' (expected lp, weak or lorentz)");
}

double distribution_function(const SampledField& field, double lambda) {
    check_lambda(lambda);
    return simd::measure_above(field.values.data(), field.measures.data(), field.size(), lambda);
}

double distribution_function(const FunctionSpec& f, double lambda) {
    validate(f);
    check_lambda(lambda);
    if (is_zero(f)) return 0.0;
    if (is_radial(f) || std::holds_alternative<IndicatorBall>(f)) return radial_distribution(f, lambda);
    return steps_distribution(steps_of(f), lambda);
}

double lebesgue_norm(const SampledField& field, double p) {
    check_exponent(p, true, "Lebesgue");
    const std::size_t n = field.size();
    if (n == 0) return 0.0;
    if (std::isinf(p)) return std::max(0.0, simd::max_value(field.values.data(), n));
    if (p == 1.0) return simd::dot(field.measures.data(), field.values.data(), n);
    if (p == 2.0) return std::sqrt(simd::dot3(field.measures.data(), field.values.data(), field.values.data(), n));
    std::vector<double> pw(n);
    for (std::size_t k = 0; k < n; ++k) pw[k] = std::pow(field.values[k], p);
    return std::pow(simd::dot(field.measures.data(), pw.data(), n), 1.0 / p);
}

double lebesgue_norm(const FunctionSpec& f, double p) {
    validate(f);
    check_exponent(p, true, "Lebesgue");
    if (is_zero(f)) return 0.0;
    if (const auto* h = std::get_if<RadialPowerLog>(&f)) return powerlog_lebesgue(*h, p);
    if (const auto* b = std::get_if<SmoothBump>(&f)) return bump_lebesgue(*b, p);
    return steps_lebesgue(steps_of(f), p);
}

double weak_norm(const Rearrangement& rearr, double r) {
    check_exponent(r, false, "weak");
    // Steps: the sup on [t[k-1], t[k]) is approached at t[k]. Samples: pointwise.
    double best = 0.0;
    for (std::size_t k = 0; k < rearr.t.size(); ++k)
        best = std::max(best, rearr.value[k] * std::pow(rearr.t[k], 1.0 / r));
    return best;
}

double weak_norm(const SampledField& field, double r) {
    check_exponent(r, false, "weak");
    return weak_norm(rearrangement_from_samples(field.values, field.measures), r);
}

double weak_norm(const FunctionSpec& f, double r) {
    validate(f);
    check_exponent(r, false, "weak");
    if (is_zero(f)) return 0.0;
    if (is_radial(f)) return radial_weak(f, r);
    return weak_norm(steps_of(f), r);
}

double lorentz_p1_norm(const Rearrangement& rearr, double p) {
    check_exponent(p, false, "Lorentz");
    if (rearr.form != Rearrangement::Form::Steps)
        throw ValidationError("Lorentz norm from samples needs a step rearrangement");
    double s = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < rearr.t.size(); ++k) {
        s += rearr.value[k] * (std::pow(rearr.t[k], 1.0 / p) - std::pow(prev, 1.0 / p));
        prev = rearr.t[k];
    }
    return p * s;
}

double lorentz_p1_norm(const SampledField& field, double p) {
    check_exponent(p, false, "Lorentz");
    return lorentz_p1_norm(rearrangement_from_samples(field.values, field.measures), p);
}

double lorentz_p1_norm(const FunctionSpec& f, double p) {
    validate(f);
    check_exponent(p, false, "Lorentz");
    if (is_zero(f)) return 0.0;
    if (is_radial(f)) return radial_lorentz(f, p);
    return lorentz_p1_norm(steps_of(f), p);
}

double norm(const SampledField& field, const NormKind& kind) {
    switch (kind.kind) {
        case NormKind::Kind::Lebesgue: return lebesgue_norm(field, kind.exponent);
        case NormKind::Kind::WeakLebesgue: return weak_norm(field, kind.exponent);
        case NormKind::Kind::LorentzP1: return lorentz_p1_norm(field, kind.exponent);
    }
    return 0.0;
}

double norm(const FunctionSpec& f, const NormKind& kind) {
    switch (kind.kind) {
        case NormKind::Kind::Lebesgue: return lebesgue_norm(f, kind.exponent);
        case NormKind::Kind::WeakLebesgue: return weak_norm(f, kind.exponent);
        case NormKind::Kind::LorentzP1: return lorentz_p1_norm(f, kind.exponent);
    }
    return 0.0;
}

std::vector<double> superlevel_family(const SampledField& field) {
    std::vector<double> v;
    for (double x : field.values)
        if (x > 0.0) v.push_back(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

SetBound weak_norm_set_lower_bound(const SampledField& field, double r, double s, const std::vector<double>& levels) {
    check_exponent(r, false, "weak");
    check_exponent(s, false, "set");
    if (!(s < r)) throw ValidationError("the set characterization needs 0 < s < r");
    if (levels.empty()) throw ValidationError("the family of candidate sets is empty");
    SetBound out;
    out.sets = levels.size();
    out.weak = weak_norm(field, r);

    // Prefix sums over values sorted in decreasing order.
    const std::size_t n = field.size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return field.values[a] > field.values[b]; });
    std::vector<double> sorted(n), meas(n + 1, 0.0), mass(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        sorted[k] = field.values[i];
        meas[k + 1] = meas[k] + field.measures[i];
        mass[k + 1] = mass[k] + field.measures[i] * std::pow(field.values[i], s);
    }
    for (double level : levels) {
        if (!(level > 0.0)) throw ValidationError("superlevel sets need positive levels");
        // count of values >= level
        const auto it = std::partition_point(sorted.begin(), sorted.end(), [&](double v) { return v >= level; });
        const auto m = static_cast<std::size_t>(it - sorted.begin());
        if (m == 0 || !(meas[m] > 0.0)) continue;
        const double e = std::pow(meas[m], 1.0 / r - 1.0 / s) * std::pow(mass[m], 1.0 / s);
        out.estimator = std::max(out.estimator, e);
    }
    return out;
}

void write_field_csv(const SampledField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open field file for writing", path);
    const int d = field.dim();
    static const char* axes[] = {"x", "y", "z"};
    for (int i = 0; i < d; ++i) out << axes[i] << ',';
    out << "cell_measure,value\n";
    for (std::size_t k = 0; k < field.size(); ++k) {
        const Point c = field.center(k);
        for (int i = 0; i < d; ++i) out << fmt(c[i]) << ',';
        out << fmt(field.measures[k]) << ',' << fmt(field.values[k]) << '\n';
    }
    if (!out) throw IoError("failed writing field file", path);
}

}  // namespace fraclab
