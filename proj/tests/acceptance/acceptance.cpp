// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/lemmas.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/regions.hpp"

using namespace fraclab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

OperatorParams params(double theta, double alpha = 0.5, int d = 1) {
    OperatorParams p;
    p.alpha = alpha;
    p.d = d;
    p.theta = theta;
    return p;
}

FunctionSpec random_indicator(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0), r(0.1, 1.0);
    if (rng() & 1) return IndicatorBall{Point{c(rng)}, r(rng)};
    return IndicatorBox{Point{c(rng)}, Point{2.0 * r(rng)}};
}

// 1. Midpoint identity between I^{1/2} and B.
Outcome midpoint_identity() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    const double alpha = 0.5;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const FunctionSpec f = random_indicator(rng), g = random_indicator(rng);
        const Point x{ux(rng)};
        const QuadratureConfig cfg;
        const double a = eval_bilinear(f, g, params(0.5, alpha), x, cfg).value;
        const double b = std::pow(2.0, alpha) * eval_B(f, g, alpha, 1, x, cfg).value;
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
    return {worst <= 1e-6, fmt("max relative gap %.3g over 10 pairs", worst)};
}

// 2. Riesz potential closed forms.
Outcome riesz_closed_form() {
    const FunctionSpec unit = IndicatorBall{Point{0.0}, 1.0};
    const double one = eval_riesz(unit, 0.5, 1, Point{0.0}, QuadratureConfig{}).value;
    QuadratureConfig mc;
    mc.method = Method::MonteCarloRadial;
    mc.samples = 1000000;
    const Estimate two = eval_riesz(IndicatorBall{Point{0.0, 0.0}, 1.0}, 1.0, 2, Point{0.0, 0.0}, mc);
    const bool ok1 = std::abs(one - 4.0) <= 4e-6;
    const bool ok2 = std::abs(two.value - 2.0 * kPi) <= 3.0 * two.std_error + 1e-12 * 2.0 * kPi;
    return {ok1 && ok2, fmt("d=1 value %.12g, d=2 value %.12g (stderr %.3g)", one, two.value, two.std_error)};
}

// 3. I^theta(f, g) = I^{1-theta}(g, f).
Outcome symmetry_law() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), ut(0.0, 1.0);
    int bad = 0;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const FunctionSpec f = random_indicator(rng), g = random_indicator(rng);
        const double theta = ut(rng);
        const Point x{ux(rng)};
        const Estimate a = eval_bilinear(f, g, params(theta), x, QuadratureConfig{});
        const Estimate b = eval_bilinear(g, f, params(1.0 - theta), x, QuadratureConfig{});
        const double tol = a.error_bound + b.error_bound + 3.0 * std::hypot(a.std_error, b.std_error) +
                           1e-9 * std::max(std::abs(a.value), std::abs(b.value)) + 1e-12;
        const double gap = std::abs(a.value - b.value);
        worst = std::max(worst, gap);
        if (gap > tol) ++bad;
    }
    return {bad == 0, fmt("%g mismatches, largest gap %.3g", bad, worst)};
}

// 4. Dyadic superposition bound.
Outcome superposition() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 1.0);
    int bad = 0;
    double tightest = HUGE_VAL;
    for (int k = 0; k < 20; ++k) {
        const FunctionSpec f = random_indicator(rng), g = random_indicator(rng);
        const OperatorParams p = params(ut(rng));
        const Superposition s = dyadic_superposition(f, g, p, Point{ux(rng)}, -40, 4, QuadratureConfig{});
        const double slack = s.inner_tail + s.lhs.error_bound + s.rhs.error_bound;
        if (!s.covers_support || s.lhs.value > s.rhs.value + slack) ++bad;
        if (s.lhs.value > 0.0) tightest = std::min(tightest, s.rhs.value / s.lhs.value);
    }
    return {bad == 0, fmt("%g violations, smallest rhs/lhs %.4g", bad, tightest)};
}

// 5. Lemma suites on the default indicator suite.
Outcome lemma_suites() {
    const auto suite = default_suite();
    const LemmaReport rep = lemma_suite("all", suite);
    const std::vector<Inequality> uniform{Inequality::Aux0, Inequality::Aux1, Inequality::Aux20,
                                          Inequality::Aux21, Inequality::L0,   Inequality::L00};
    bool ok = rep.pass;
    double aux0 = 0.0, spread = 1.0;
    for (const auto& item : rep.items) {
        if (!std::isfinite(item.best_constant)) ok = false;
        if (item.which == Inequality::Aux0) aux0 = item.best_constant;
        if (std::find(uniform.begin(), uniform.end(), item.which) == uniform.end()) continue;
        double lo = HUGE_VAL, hi = 0.0;
        for (const auto& [theta, c] : item.constant_by_theta) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const double s = lo > 0.0 ? hi / lo : HUGE_VAL;
        spread = std::max(spread, s);
        if (!(s < 3.0)) ok = false;
        if (item.constant_by_theta.size() != 5) ok = false;
    }
    ok = ok && aux0 <= 1.0 + 1e-3;
    return {ok, fmt("aux0 constant %.6g, largest theta spread %.4g over %g instances", aux0, spread,
                    static_cast<double>(suite.size()))};
}

// 6. Series bounds and divergence thresholds.
Outcome series_bounds() {
    const double alpha = 0.5, p = 1.5;
    const int d = 1;
    std::vector<double> a1, a2r, a2s;
    for (int k = -20; k < 20; ++k) {
        const double R = std::ldexp(1.0, k);
        a1.push_back(series_A1(p, alpha, d, R).value / std::pow(R, alpha / d));
        const double S = 1.0;
        a2r.push_back(series_A2(p, alpha, S, R).value / (std::pow(R, 1.0 / p) * std::pow(S, 1.0 - 1.0 / p)));
        const double S2 = std::ldexp(1.0, k), R2 = 1.0;
        a2s.push_back(series_A2(p, alpha, S2, R2).value / (std::pow(R2, 1.0 / p) * std::pow(S2, 1.0 - 1.0 / p)));
    }
    auto band = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo > 0.0 ? *hi / *lo : HUGE_VAL;
    };
    bool div_a1 = false, div_a2 = false, near_ok = true;
    try {
        series_A1(d / alpha, alpha, d, 1.0);
    } catch (const DivergentSeries&) {
        div_a1 = true;
    }
    try {
        series_A2(1.0, alpha, 1.0, 1.0);
    } catch (const DivergentSeries&) {
        div_a2 = true;
    }
    try {
        series_A1(d / alpha - 1e-3, alpha, d, 1.0);
        series_A2(1.0 + 1e-3, alpha, 1.0, 1.0);
    } catch (const DivergentSeries&) {
        near_ok = false;
    }
    const double b1 = band(a1), b2 = std::max(band(a2r), band(a2s));
    return {b1 <= 2.0 && b2 <= 2.0 && div_a1 && div_a2 && near_ok,
            fmt("A1 band %.4g, A2 band %.4g, thresholds ", b1, b2) +
                (div_a1 && div_a2 && near_ok ? "exact" : "wrong")};
}

// 7. Closed-form norms of indicators and Chebyshev.
Outcome norm_closed_forms() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> side(0.05, 3.0), corner(-2.0, 2.0), expo(1.0, 6.0);
    double worst = 0.0;
    bool cheb = true;
    for (int k = 0; k < 100; ++k) {
        const int d = 1 + k % 3;
        Point c(d), s(d);
        double m = 1.0;
        for (int i = 0; i < d; ++i) {
            c[i] = corner(rng);
            s[i] = side(rng);
            m *= s[i];
        }
        const FunctionSpec box = IndicatorBox{c, s};
        const double p = expo(rng);
        const double want = std::pow(m, 1.0 / p);
        worst = std::max(worst, std::abs(lebesgue_norm(box, p) - want) / want);
        worst = std::max(worst, std::abs(weak_norm(box, p) - want) / want);
        worst = std::max(worst, std::abs(lorentz_p1_norm(box, p) - p * want) / (p * want));

        SampledField f;
        f.box = Box{Point{0.0}, Point{1.0}};
        f.cells = uniform_cells(1, 64);
        std::uniform_real_distribution<double> v(0.0, 5.0);
        for (int i = 0; i < 64; ++i) {
            f.values.push_back(std::pow(v(rng), 3.0));
            f.measures.push_back(1.0 / 64.0);
        }
        if (weak_norm(f, p) > lebesgue_norm(f, p) * (1.0 + 1e-15)) cheb = false;
    }
    return {worst <= 1e-12 && cheb, fmt("max relative error %.3g on 100 boxes", worst) +
                                        (cheb ? ", weak <= strong everywhere" : ", Chebyshev violated")};
}

// 8. Hand-labeled region atlas.
Outcome region_atlas() {
    int bad = 0;
    const auto atlas = reference_atlas();
    for (const AtlasEntry& e : atlas) {
        const ExponentPoint pt = make_point(1.0 / e.inv_p, 1.0 / e.inv_q, 0.5, 1);
        if (classify(pt).region != e.expected) ++bad;
    }
    return {bad == 0 && atlas.size() == 9, fmt("%g of %g points mislabeled", bad, static_cast<double>(atlas.size()))};
}

std::vector<double> dyadic_t(int lo, int hi) {
    std::vector<double> t;
    for (int k = lo; k <= hi; ++k) t.push_back(std::ldexp(1.0, -k));
    return t;
}

// 9. Sharpness Case I and its mirror.
Outcome sharpness_case_one() {
    SharpnessPlan plan;
    plan.which = SharpCase::I;
    plan.t_grid = dyadic_t(4, 16);
    const SharpnessReport one = sharpness_case(plan);
    plan.which = SharpCase::II;
    const SharpnessReport two = sharpness_case(plan);
    bool mirror = one.value.size() == two.value.size();
    auto errors = [](const SharpnessReport& r) {
        std::vector<double> e;
        for (const auto& rec : r.records)
            if (rec.quantity == "weak_norm") e.push_back(rec.stderr_value.value_or(0.0));
        return e;
    };
    const auto e1 = errors(one), e2 = errors(two);
    double gap = 0.0;
    for (std::size_t k = 0; mirror && k < one.value.size(); ++k) {
        const double diff = std::abs(one.value[k] - two.value[k]);
        gap = std::max(gap, diff);
        if (diff > e1[k] + e2[k] + 1e-12 * one.value[k]) mirror = false;
    }
    const bool ok = one.strictly_increasing && one.ratio_band <= 2.0 && mirror;
    return {ok, fmt("strictly increasing %g, ratio band %.4g, mirror gap %.3g", one.strictly_increasing ? 1.0 : 0.0,
                    one.ratio_band, gap)};
}

// 10. Pointwise lower bound for the Riesz potential of h.
Outcome lower_bound() {
    std::vector<int> ks;
    for (int k = 4; k <= 12; ++k) ks.push_back(k);
    const LowerBoundReport rep = h_lower_bound(0.5, 1, ks, QuadratureConfig{});
    bool ok = rep.fitted_c > 0.0 && std::isfinite(rep.fitted_c) && rep.ratio.size() == ks.size();
    for (double r : rep.ratio)
        if (r < rep.fitted_c) ok = false;
    const auto [lo, hi] = std::minmax_element(rep.ratio.begin(), rep.ratio.end());
    return {ok, fmt("fitted c = %.6g, ratios in [%.6g, %.6g]", rep.fitted_c, *lo, *hi)};
}

// 11. Divergence identity.
Outcome divergence_identity() {
    const DivergenceExperiment de = divergence_experiment(0.5, {2048, 4096}, QuadratureConfig{});
    const double res = de.residual.at(0), ratio = de.halving.at(0);
    return {res <= 5e-2 && ratio >= 0.25 && ratio <= 0.75,
            fmt("relative L2 %.4g at N=2048, ratio %.4g on doubling", res, ratio)};
}

double ratio_at(const std::vector<ExperimentRecord>& recs, double theta) {
    for (const auto& r : recs)
        if (r.quantity == "ratio" && r.theta && *r.theta == theta) return r.value;
    return std::nan("");
}

// 12. Uniformity on the top edge, blow-up toward theta = 1 on the bottom edge.
Outcome edge_sweeps() {
    SweepPlan top;
    top.id = "top_edge";
    top.f = IndicatorBall{Point{0.0}, 1.0};
    top.g = IndicatorBall{Point{0.5}, 0.5};
    top.point = make_point("3/2", "1", "1/2", 1);
    for (int k = 0; k <= 20; ++k) top.thetas.push_back(k / 20.0);
    const auto t = theta_sweep(top);
    std::vector<double> ratios;
    for (const auto& r : t)
        if (r.quantity == "ratio") ratios.push_back(r.value);
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double top_spread = sorted.back() / median;

    SweepPlan bottom;
    bottom.id = "bottom_edge";
    bottom.f = SmoothBump{1, 1e-3, 1.5, Point(1)};
    bottom.g = make_h(1, 0.5);
    bottom.point = make_point("3/2", "2", "1/2", 1);
    bottom.thetas = {0.5, 0.9, 0.99, 0.999};
    const auto b = theta_sweep(bottom);
    const double base = ratio_at(b, 0.5);
    double best = 0.0;
    for (double th : {0.9, 0.99, 0.999}) best = std::max(best, ratio_at(b, th) / base);
    const bool on_edges = classify(top.point).region == Region::EdgeTop &&
                          classify(bottom.point).region == Region::EdgeBottom;
    return {on_edges && ratios.size() == 21 && top_spread <= 5.0 && best >= 1.5,
            fmt("top max/median %.4g, bottom best growth over theta=1/2 %.4g", top_spread, best)};
}

// 13. Byte-identical reruns.
Outcome determinism() {
    SweepPlan plan;
    plan.f = IndicatorBall{Point{0.0, 0.0}, 1.0};
    plan.g = IndicatorBox{Point{-0.5, -0.2}, Point{1.0, 0.8}};
    plan.point = make_point("3/2", "3/2", "1", 2);
    plan.thetas = {0.25, 0.5};
    plan.cells = 16;
    plan.cfg.method = Method::MonteCarloRadial;
    plan.cfg.samples = 2000;
    plan.cfg.seed = 2024;
    const std::string a = to_csv(theta_sweep(plan));
    const std::string b = to_csv(theta_sweep(plan));
    set_thread_count(4);
    const std::string c = to_csv(theta_sweep(plan));
    set_thread_count(1);
    plan.cfg.seed = 2025;
    const std::string other = to_csv(theta_sweep(plan));
    return {a == b && a == c && a != other, std::string("reruns ") + (a == b ? "identical" : "differ") +
                                                 ", 4 workers " + (a == c ? "identical" : "differ")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"midpoint identity I^{1/2} = 2^alpha B", 5, midpoint_identity},
        {"Riesz closed forms", 10, riesz_closed_form},
        {"symmetry I^theta(f,g) = I^{1-theta}(g,f)", 10, symmetry_law},
        {"dyadic superposition bound", 10, superposition},
        {"dyadic-piece inequalities, theta spread < 3", 60, lemma_suites},
        {"series bounds and divergence thresholds", 1, series_bounds},
        {"indicator norm closed forms", 1, norm_closed_forms},
        {"region atlas", 1, region_atlas},
        {"sharpness Case I growth and Case II mirror", 300, sharpness_case_one},
        {"pointwise lower bound for I_alpha(h)", 30, lower_bound},
        {"divergence identity residual", 60, divergence_identity},
        {"edge sweeps: top uniform, bottom blow-up", 600, edge_sweeps},
        {"deterministic reruns", 10, determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("%s criterion %zu: %s; %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : " (over budget)");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
