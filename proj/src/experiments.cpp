#include "fraclab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "fraclab/errors.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

void check_theta_grid(const std::vector<double>& thetas) {
    if (thetas.empty()) throw ValidationError("theta grid is empty");
    for (double th : thetas)
        if (!(th >= 0.0 && th <= 1.0)) throw ValidationError("theta values must lie in [0, 1]");
}

double weak_of(const SampledOperator& s, double r) { return weak_norm(s.field, r); }

// Weak norm of the per-cell error field: bounds the error of the reported weak norm up to the
// quasi-triangle constant of L^{r,infinity}.
std::optional<double> error_of(const SampledOperator& s, double r) {
    SampledField e = s.field;
    e.values = s.errors;
    return weak_norm(e, r);
}

template <class Eval>
SampledOperator sample_operator(Eval eval, int d, const Box& box, std::size_t cells) {
    SampledOperator out;
    SampledField& field = out.field;
    field.box = box;
    field.cells = uniform_cells(d, cells);
    std::size_t n = 1;
    double cell = 1.0;
    for (int i = 0; i < d; ++i) {
        if (!(box.hi[i] > box.lo[i])) throw ValidationError("sampling box is empty along an axis");
        n *= cells;
        cell *= (box.hi[i] - box.lo[i]) / static_cast<double>(cells);
    }
    field.values.assign(n, 0.0);
    field.measures.assign(n, cell);
    std::vector<double> err(n, 0.0), se(n, 0.0);
    parallel_for(n, [&](std::size_t k) {
        const Estimate e = eval(field.center(k));
        field.values[k] = e.value;
        err[k] = e.error_bound;
        se[k] = e.std_error;
    });
    out.errors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.errors[k] = std::max(err[k], se[k]);
        if (!std::isfinite(field.values[k]))
            throw NumericalError("operator value at " + field.center(k).to_string() + " is not finite");
        out.max_error = std::max(out.max_error, err[k]);
        out.max_stderr = std::max(out.max_stderr, se[k]);
    }
    return out;
}

double kappa_of(double alpha, int d) { return (d + alpha) / (2.0 * d); }

}  // namespace

bool ExperimentRecord::operator==(const ExperimentRecord& o) const {
    return experiment == o.experiment && alpha == o.alpha && d == o.d && p == o.p && q == o.q && r == o.r &&
           theta == o.theta && t == o.t && j == o.j && seed == o.seed && quantity == o.quantity && value == o.value &&
           stderr_value == o.stderr_value && walltime_ms == o.walltime_ms;
}

Box output_support(const FunctionSpec& f, const FunctionSpec& g, double theta) {
    return combine(theta, support_box(f), 1.0 - theta, support_box(g));
}

std::size_t default_cells(int d) { return d == 1 ? (1u << 14) : d == 2 ? (1u << 9) : (1u << 6); }

SampledOperator sample_bilinear(const FunctionSpec& f, const FunctionSpec& g, double alpha, int d, double theta,
                                const Box& box, std::size_t cells, const QuadratureConfig& cfg) {
    OperatorParams op;
    op.alpha = alpha;
    op.d = d;
    op.theta = theta;
    validate(op);
    if (cells == 0) throw ValidationError("sampling needs at least one cell per axis");
    return sample_operator([&](const Point& x) { return eval_bilinear(f, g, op, x, cfg); }, d, box, cells);
}

std::vector<ExperimentRecord> theta_sweep(const SweepPlan& plan) {
    check_theta_grid(plan.thetas);
    const ExponentPoint& pt = plan.point;
    const RExponent r = compute_r(pt);
    if (r.status != RExponent::Status::Finite) {
        const RegionClass c = classify(pt);
        throw ValidationError("exponent point (1/p, 1/q) = (" + std::to_string(pt.inv_p.value) + ", " +
                              std::to_string(pt.inv_q.value) + ") is " + region_name(c.region) + " / " +
                              bound_name(c.bound) + " with r " + status_name(r.status) +
                              "; a sweep needs a finite r");
    }
    const int d = pt.d;
    validate(plan.f);
    validate(plan.g);
    if (dimension(plan.f) != d || dimension(plan.g) != d) throw ValidationError("sweep functions have wrong dimension");
    if (plan.box && plan.box->dim() != d) throw ValidationError("sampling box has wrong dimension");
    validate(plan.cfg, d);
    const std::size_t cells = plan.cells ? plan.cells : default_cells(d);
    const double denom = lebesgue_norm(plan.f, pt.p()) * lebesgue_norm(plan.g, pt.q());
    const bool zero = is_zero(plan.f) || is_zero(plan.g);

    std::vector<ExperimentRecord> out;
    for (double theta : plan.thetas) {
        const auto start = Clock::now();
        ExperimentRecord base;
        base.experiment = plan.id;
        base.alpha = pt.alpha;
        base.d = d;
        base.p = pt.p();
        base.q = pt.q();
        base.r = r.r;
        base.theta = theta;
        base.seed = plan.cfg.seed;

        double weak = 0.0, via_b = 0.0;
        std::optional<double> err, err_b;
        if (!zero) {
            const Box box = plan.box ? *plan.box : output_support(plan.f, plan.g, theta);
            const auto s = sample_bilinear(plan.f, plan.g, pt.alpha, d, theta, box, cells, plan.cfg);
            weak = weak_of(s, r.r);
            err = error_of(s, r.r);
            if (theta == 0.5) {
                const double c = std::pow(2.0, pt.alpha);
                const auto b = sample_operator(
                    [&](const Point& x) {
                        Estimate e = eval_B(plan.f, plan.g, pt.alpha, d, x, plan.cfg);
                        e.value *= c;
                        e.error_bound *= c;
                        e.std_error *= c;
                        return e;
                    },
                    d, box, cells);
                via_b = weak_of(b, r.r);
                err_b = error_of(b, r.r);
            }
        } else {
            err = 0.0;
            err_b = 0.0;
        }
        const double wall = plan.timing ? elapsed_ms(start) : 0.0;
        auto push = [&](const char* quantity, double value, std::optional<double> se) {
            ExperimentRecord rec = base;
            rec.quantity = quantity;
            rec.value = value;
            rec.stderr_value = se;
            rec.walltime_ms = wall;
            out.push_back(std::move(rec));
        };
        push("weak_norm", weak, err);
        push("denominator", denom, std::nullopt);
        push("ratio", safe_ratio(weak, denom), err ? std::optional<double>(safe_ratio(*err, denom)) : std::nullopt);
        if (theta == 0.5) push("weak_norm_via_B", via_b, err_b);
    }
    return out;
}

SharpCase sharp_case_from_name(const std::string& name) {
    if (name == "I" || name == "1") return SharpCase::I;
    if (name == "II" || name == "2") return SharpCase::II;
    if (name == "III" || name == "3") return SharpCase::III;
    if (name == "IV" || name == "4") return SharpCase::IV;
    if (name == "V" || name == "5") return SharpCase::V;
    throw ValidationError("unknown sharpness case '" + name + "' (expected I, II, III, IV or V)");
}

std::string sharp_case_name(SharpCase c) {
    switch (c) {
        case SharpCase::I: return "I";
        case SharpCase::II: return "II";
        case SharpCase::III: return "III";
        case SharpCase::IV: return "IV";
        case SharpCase::V: return "V";
    }
    return "I";
}

bool diverges(const std::vector<double>& seq) {
    if (seq.size() < 2) return false;
    int drops = 0;
    for (std::size_t k = 1; k < seq.size(); ++k)
        if (seq[k] < seq[k - 1]) ++drops;
    return drops <= 1 && seq.back() >= 1.5 * seq.front();
}

double fit_log_growth(const std::vector<double>& t, const std::vector<double>& value) {
    const std::size_t n = t.size();
    if (n < 2 || value.size() != n) return 0.0;
    double sx = 0.0, sy = 0.0;
    std::vector<double> X(n), Y(n);
    for (std::size_t k = 0; k < n; ++k) {
        X[k] = std::log(std::log(1.0 / t[k]));
        Y[k] = std::log(value[k]);
        sx += X[k];
        sy += Y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxy += (X[k] - mx) * (Y[k] - my);
        sxx += (X[k] - mx) * (X[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

SharpnessReport sharpness_case(const SharpnessPlan& plan) {
    const int d = plan.d;
    const double alpha = plan.alpha;
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
    if (plan.t_grid.empty()) throw ValidationError("t grid is empty");
    for (double t : plan.t_grid)
        if (!(t > 0.0 && t < 0.125)) throw ValidationError("t values must lie in (0, 1/8)");
    validate(plan.cfg, d);

    const SharpCase c = plan.which;
    const bool mirrored = c == SharpCase::II || c == SharpCase::IV;
    const bool family_one = c == SharpCase::I || c == SharpCase::II;
    const bool h_first = c == SharpCase::I || c == SharpCase::IV;
    const double crit = d / alpha;
    const double pp = family_one ? 1.0 : (c == SharpCase::V ? crit : plan.p);
    if (!(pp >= 1.0) || std::isinf(pp)) throw ValidationError("bump exponent p must lie in [1, inf)");
    std::vector<double> thetas = plan.theta_grid;
    if (thetas.empty()) thetas = {family_one ? 0.0 : 1.0};
    check_theta_grid(thetas);

    const double kappa = kappa_of(alpha, d);
    const FunctionSpec h = make_h(d, alpha);
    const SmoothBump base{d, 1.0, pp, Point::zero(d)};
    const std::size_t cells = plan.cells ? plan.cells : default_cells(d);
    const double r = pp;  // 1/r = 1/p + alpha/d - alpha/d
    const double nh = lebesgue_norm(h, crit);

    SharpnessReport rep;
    rep.predicted_exponent = 0.5 * (1.0 - kappa);
    rep.theta = mirrored ? 1.0 - thetas.front() : thetas.front();
    const double limit = family_one ? 0.0 : 1.0;
    for (double th : thetas)
        if (th == limit) rep.theta = mirrored ? 1.0 - th : th;

    const std::string id = "sharpness_" + sharp_case_name(c);
    std::vector<std::pair<double, double>> series;
    for (double t : plan.t_grid) {
        const FunctionSpec bump = dilate(FunctionSpec{base}, t, pp);
        const FunctionSpec& F = h_first ? h : bump;
        const FunctionSpec& G = h_first ? bump : h;
        const double nb = lebesgue_norm(bump, pp);
        for (double th_case : thetas) {
            const auto start = Clock::now();
            const double theta = mirrored ? 1.0 - th_case : th_case;
            const Box box = output_support(F, G, theta);
            const auto s = sample_bilinear(F, G, alpha, d, theta, box, cells, plan.cfg);
            const double weak = weak_of(s, r);
            const double pred = std::pow(std::log(1.0 / t), rep.predicted_exponent);
            const double wall = plan.timing ? elapsed_ms(start) : 0.0;
            ExperimentRecord b;
            b.experiment = id;
            b.alpha = alpha;
            b.d = d;
            b.p = h_first ? crit : pp;
            b.q = h_first ? pp : crit;
            b.r = r;
            b.theta = theta;
            b.t = t;
            b.seed = plan.cfg.seed;
            b.walltime_ms = wall;
            auto push = [&](const char* quantity, double value, std::optional<double> se) {
                ExperimentRecord rec = b;
                rec.quantity = quantity;
                rec.value = value;
                rec.stderr_value = se;
                rep.records.push_back(std::move(rec));
            };
            push("weak_norm", weak, error_of(s, r));
            push("prediction", pred, std::nullopt);
            push("ratio_to_prediction", weak / pred, std::nullopt);
            push("norm_ratio", safe_ratio(weak, nb * nh), std::nullopt);
            if (theta == rep.theta) series.emplace_back(t, weak);
        }
    }
    std::stable_sort(series.begin(), series.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [t, v] : series) {
        rep.t.push_back(t);
        rep.value.push_back(v);
        rep.prediction.push_back(std::pow(std::log(1.0 / t), rep.predicted_exponent));
        rep.ratio.push_back(v / rep.prediction.back());
    }
    rep.strictly_increasing = rep.value.size() >= 2;
    for (std::size_t k = 1; k < rep.value.size(); ++k)
        if (!(rep.value[k] > rep.value[k - 1])) rep.strictly_increasing = false;
    rep.diverges = diverges(rep.value);
    rep.fitted_exponent = fit_log_growth(rep.t, rep.value);
    if (!rep.ratio.empty()) {
        const auto [lo, hi] = std::minmax_element(rep.ratio.begin(), rep.ratio.end());
        rep.ratio_band = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    }
    for (const auto& [quantity, value] : {std::pair<const char*, double>{"predicted_exponent", rep.predicted_exponent},
                                          {"fitted_exponent", rep.fitted_exponent},
                                          {"ratio_band", rep.ratio_band},
                                          {"strictly_increasing", rep.strictly_increasing ? 1.0 : 0.0},
                                          {"diverges", rep.diverges ? 1.0 : 0.0}}) {
        ExperimentRecord rec;
        rec.experiment = id;
        rec.alpha = alpha;
        rec.d = d;
        rec.r = r;
        rec.theta = rep.theta;
        rec.seed = plan.cfg.seed;
        rec.quantity = quantity;
        rec.value = value;
        rep.records.push_back(rec);
    }
    return rep;
}

LowerBoundReport h_lower_bound(double alpha, int d, const std::vector<int>& k_values, const QuadratureConfig& cfg) {
    if (k_values.empty()) throw ValidationError("no points requested");
    const FunctionSpec h = make_h(d, alpha);
    const double kappa = kappa_of(alpha, d);
    LowerBoundReport rep;
    rep.fitted_c = std::numeric_limits<double>::infinity();
    std::vector<Estimate> est(k_values.size());
    for (int k : k_values)
        if (k < 3 || k > 60) throw ValidationError("points |x| = 2^-k need 3 <= k <= 60 to lie in |x| <= 1/8");
    parallel_for(k_values.size(), [&](std::size_t i) {
        Point x = Point::zero(d);
        x[0] = std::ldexp(1.0, -k_values[i]);
        est[i] = eval_riesz(h, alpha, d, x, cfg);
    });
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        const double x = std::ldexp(1.0, -k_values[i]);
        const double ratio = est[i].value / std::pow(std::log(1.0 / x), 1.0 - kappa);
        rep.x.push_back(x);
        rep.value.push_back(est[i].value);
        rep.ratio.push_back(ratio);
        rep.fitted_c = std::min(rep.fitted_c, ratio);
        ExperimentRecord b;
        b.experiment = "h_lower_bound";
        b.alpha = alpha;
        b.d = d;
        b.j = -k_values[i];
        b.seed = cfg.seed;
        ExperimentRecord v = b;
        v.quantity = "riesz_h";
        v.value = est[i].value;
        v.stderr_value = est[i].std_error > 0.0 ? est[i].std_error : est[i].error_bound;
        rep.records.push_back(v);
        ExperimentRecord q = b;
        q.quantity = "ratio";
        q.value = ratio;
        rep.records.push_back(q);
    }
    return rep;
}

std::vector<ExperimentRecord> lemma_records(const LemmaReport& report, const std::vector<LemmaInstance>& instances) {
    std::vector<ExperimentRecord> out;
    for (const auto& item : report.items) {
        const std::string name = inequality_name(item.which);
        for (const auto& row : item.rows) {
            const LemmaInstance& in = instances[row.instance];
            ExperimentRecord b;
            b.experiment = "lemma_" + report.name;
            b.alpha = in.alpha;
            b.d = 1;
            b.p = in.p;
            b.theta = in.theta;
            b.j = in.j;
            for (const auto& [suffix, value] :
                 {std::pair<const char*, double>{"_lhs", row.lhs}, {"_rhs_base", row.rhs_base}, {"_ratio", row.ratio}}) {
                ExperimentRecord rec = b;
                rec.quantity = name + suffix;
                rec.value = value;
                out.push_back(std::move(rec));
            }
        }
        for (const auto& [theta, c] : item.constant_by_theta) {
            ExperimentRecord rec;
            rec.experiment = "lemma_" + report.name;
            rec.d = 1;
            rec.theta = theta;
            rec.quantity = name + "_constant";
            rec.value = c;
            out.push_back(std::move(rec));
        }
        ExperimentRecord best;
        best.experiment = "lemma_" + report.name;
        best.d = 1;
        best.quantity = name + "_best_constant";
        best.value = item.best_constant;
        out.push_back(best);
        ExperimentRecord pass = best;
        pass.quantity = name + "_pass";
        pass.value = item.pass ? 1.0 : 0.0;
        out.push_back(pass);
    }
    return out;
}

GridFunction gaussian_density(std::size_t cells) {
    if (cells < 2) throw ValidationError("density grid needs at least two cells");
    GridFunction g;
    g.origin = Point{-1.0};
    g.spacing = 2.0 / static_cast<double>(cells);
    g.shape = {cells + 1, 1, 1};
    g.values.resize(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k) {
        const double x = -1.0 + g.spacing * static_cast<double>(k);
        g.values[k] = std::exp(-16.0 * x * x);
    }
    return g;
}

DivergenceExperiment divergence_experiment(double alpha, const std::vector<std::size_t>& cells,
                                           const QuadratureConfig& cfg) {
    if (cells.empty()) throw ValidationError("no grid sizes requested");
    DivergenceExperiment out;
    for (std::size_t n : cells) {
        if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("grid sizes must be powers of two");
        const auto rep = check_divergence_identity(gaussian_density(n), alpha, 1, cfg);
        out.cells.push_back(n);
        out.residual.push_back(rep.relative_l2);
        ExperimentRecord b;
        b.experiment = "divergence_identity";
        b.alpha = alpha;
        b.d = 1;
        b.j = static_cast<int>(std::lround(std::log2(static_cast<double>(n))));
        ExperimentRecord a = b;
        a.quantity = "relative_l2";
        a.value = rep.relative_l2;
        out.records.push_back(a);
        ExperimentRecord m = b;
        m.quantity = "max_residual";
        m.value = rep.max_residual;
        out.records.push_back(m);
    }
    for (std::size_t k = 1; k < out.residual.size(); ++k) {
        const double ratio = safe_ratio(out.residual[k], out.residual[k - 1]);
        out.halving.push_back(ratio);
        ExperimentRecord h;
        h.experiment = "divergence_identity";
        h.alpha = alpha;
        h.d = 1;
        h.j = static_cast<int>(std::lround(std::log2(static_cast<double>(out.cells[k]))));
        h.quantity = "halving_ratio";
        h.value = ratio;
        out.records.push_back(h);
    }
    return out;
}

}  // namespace fraclab
