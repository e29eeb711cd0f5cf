#include "fraclab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {
namespace {

constexpr Inequality kAll[] = {Inequality::Aux0, Inequality::Aux1,  Inequality::Aux20, Inequality::Aux21,
                               Inequality::L0,   Inequality::L00,   Inequality::L000,  Inequality::L0000,
                               Inequality::Aux1Lor, Inequality::Aux2Lor};

double measure(const std::vector<Interval>& E) {
    double s = 0.0;
    for (const Interval& e : E) s += e.hi - e.lo;
    return s;
}

bool is_lorentz(Inequality k) { return k == Inequality::Aux1Lor || k == Inequality::Aux2Lor; }

bool needs_set(Inequality k) {
    return k == Inequality::L0 || k == Inequality::L00 || k == Inequality::L000 || k == Inequality::L0000 ||
           is_lorentz(k);
}

void check_indicator(const FunctionSpec& f) {
    for (const auto& w : intervals_of(f))
        if (w.coefficient != 1.0) throw ValidationError("sets A and B must be given as indicators");
}

void check_instance(Inequality k, const LemmaInstance& in) {
    intervals_of(in.f);
    intervals_of(in.g);
    if (!(in.theta >= 0.0 && in.theta <= 1.0)) throw ValidationError("theta must lie in [0, 1]");
    if (!(in.alpha > 0.0 && in.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1) for d = 1");
    if (!(in.p >= 1.0)) throw ValidationError("lemma exponent p must be at least 1");
    if (std::abs(in.j) > 60) throw ValidationError("dyadic scale out of range");
    for (const Interval& e : in.E)
        if (!(e.hi >= e.lo)) throw ValidationError("set interval has hi < lo");
    if (needs_set(k) && in.E.empty()) throw ValidationError(inequality_name(k) + " needs a set E");
    if (is_lorentz(k)) {
        if (!(in.p > 1.0 && in.p <= 1.0 / in.alpha)) throw ValidationError("Lorentz estimates need 1 < p <= d/alpha");
        check_indicator(in.f);
        check_indicator(in.g);
    }
}

double min_term(double scale, double E, double weight) {
    return weight > 0.0 ? std::min(scale, E / weight) : scale;
}

}  // namespace

std::string inequality_name(Inequality k) {
    switch (k) {
        case Inequality::Aux0: return "aux0";
        case Inequality::Aux1: return "aux1";
        case Inequality::Aux20: return "aux20";
        case Inequality::Aux21: return "aux21";
        case Inequality::L0: return "L0";
        case Inequality::L00: return "L00";
        case Inequality::L000: return "L000";
        case Inequality::L0000: return "L0000";
        case Inequality::Aux1Lor: return "aux1_lor";
        case Inequality::Aux2Lor: return "aux2_lor";
    }
    return "aux0";
}

Inequality inequality_from_name(const std::string& name) {
    for (Inequality k : kAll)
        if (inequality_name(k) == name) return k;
    throw ValidationError("unknown inequality '" + name + "'");
}

std::vector<Inequality> inequalities_for(const std::string& name) {
    if (name == "dyadic_basic") return {Inequality::Aux0, Inequality::Aux1};
    if (name == "dyadic_mixed") return {Inequality::Aux20, Inequality::Aux21};
    if (name == "dyadic_localized") return {Inequality::L0, Inequality::L00, Inequality::L000, Inequality::L0000};
    if (name == "dyadic_lorentz") return {Inequality::Aux1Lor, Inequality::Aux2Lor};
    if (name == "all") return {std::begin(kAll), std::end(kAll)};
    return {inequality_from_name(name)};
}

bool theta_uniform(Inequality k) { return k != Inequality::L000 && k != Inequality::L0000; }

double lhs_value(Inequality k, const LemmaInstance& in) {
    check_instance(k, in);
    const DyadicProfile P(in.f, in.g, in.theta, in.j);
    switch (k) {
        case Inequality::Aux0: return P.lebesgue(1.0);
        case Inequality::Aux1: return P.lebesgue(0.5);
        case Inequality::Aux20:
        case Inequality::Aux21: return P.lebesgue(in.p / (in.p + 1.0));
        case Inequality::L0:
        case Inequality::L00:
        case Inequality::L000:
        case Inequality::L0000: return P.lebesgue_on(0.5, in.E);
        case Inequality::Aux1Lor:
        case Inequality::Aux2Lor: return P.integral_on(in.E);
    }
    return 0.0;
}

double rhs_base_value(Inequality k, const LemmaInstance& in) {
    check_instance(k, in);
    const double d = 1.0, a = in.alpha, p = in.p;
    const double scale = std::ldexp(1.0, in.j);  // 2^{dj} for d = 1
    const double E = measure(in.E);
    auto nf = [&](double s) { return lebesgue_norm(in.f, s); };
    auto ng = [&](double s) { return lebesgue_norm(in.g, s); };
    switch (k) {
        case Inequality::Aux0: return nf(1.0) * ng(1.0);
        case Inequality::Aux1: return scale * nf(1.0) * ng(1.0);
        case Inequality::Aux20: return scale * nf(1.0) * ng(p);
        case Inequality::Aux21: return scale * nf(p) * ng(1.0);
        case Inequality::L0:
            return std::pow(scale * E, 1.0 - 1.0 / p) * nf(p) * ng(1.0) * std::pow(std::min(scale, E), 1.0 / p);
        case Inequality::L00:
            return std::pow(scale * E, 1.0 - 1.0 / p) * nf(1.0) * ng(p) * std::pow(std::min(scale, E), 1.0 / p);
        case Inequality::L000:
            return std::pow(scale, 1.0 - 1.0 / p) * std::pow(E, 2.0 - a / d - 1.0 / p) * nf(p) * ng(d / a) *
                   std::pow(min_term(scale, E, std::pow(1.0 - in.theta, d - a)), 1.0 / p);
        case Inequality::L0000:
            return std::pow(scale, 1.0 - 1.0 / p) * std::pow(E, 2.0 - a / d - 1.0 / p) * nf(d / a) * ng(p) *
                   std::pow(min_term(scale, E, std::pow(in.theta, d - a)), 1.0 / p);
        case Inequality::Aux1Lor:
        case Inequality::Aux2Lor: {
            const double A = nf(1.0), B = ng(1.0), ap = a * p / d;
            const double sets = k == Inequality::Aux1Lor ? A * std::pow(B, ap) : std::pow(A, ap) * B;
            return std::pow(scale, 1.0 - ap) * std::min(std::pow(scale, ap) * E, sets);
        }
    }
    return 0.0;
}

LemmaReport lemma_suite(const std::string& name, const std::vector<LemmaInstance>& instances) {
    LemmaReport report;
    report.name = name;
    const auto kinds = inequalities_for(name);
    for (Inequality k : kinds)
        for (const auto& in : instances) check_instance(k, in);
    report.pass = true;
    for (Inequality k : kinds) {
        InequalityReport item;
        item.which = k;
        item.rows.resize(instances.size());
        parallel_for(instances.size(), [&](std::size_t i) {
            InstanceResult& r = item.rows[i];
            r.instance = i;
            r.lhs = lhs_value(k, instances[i]);
            r.rhs_base = rhs_base_value(k, instances[i]);
            if (r.lhs == 0.0) r.ratio = 0.0;
            else if (r.rhs_base > 0.0) r.ratio = r.lhs / r.rhs_base;
            else r.ratio = std::numeric_limits<double>::infinity();
        });
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const double ratio = item.rows[i].ratio;
            item.best_constant = std::max(item.best_constant, ratio);
            double& c = item.constant_by_theta[instances[i].theta];
            c = std::max(c, ratio);
        }
        item.pass = std::isfinite(item.best_constant);
        report.pass = report.pass && item.pass;
        report.items.push_back(std::move(item));
    }
    return report;
}

std::vector<LemmaInstance> default_suite() {
    auto iv = [](double lo, double hi) { return FunctionSpec{IndicatorBox{Point{lo}, Point{hi - lo}}}; };
    SimpleFunction two;
    two.dim = 1;
    two.terms = {{1.0, IndicatorBox{Point{0.0}, Point{0.5}}}, {1.0, IndicatorBox{Point{1.0}, Point{0.25}}}};
    const std::vector<std::pair<FunctionSpec, FunctionSpec>> pairs{
        {iv(0.0, 1.0), iv(0.0, 1.0)},   {iv(0.0, 1.0), iv(2.0, 2.5)}, {iv(-1.0, 0.5), iv(0.0, 0.25)},
        {iv(0.0, 0.1), iv(-3.0, 1.0)},  {FunctionSpec{two}, iv(-0.5, 0.5)},
    };
    const std::vector<std::vector<Interval>> sets{{{-0.5, 0.5}}, {{0.0, 4.0}}, {{2.0, 2.1}}};
    std::vector<LemmaInstance> out;
    for (const auto& [f, g] : pairs)
        for (int j : {-3, -1, 0, 1, 3})
            for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0})
                for (const auto& E : sets) {
                    LemmaInstance in;
                    in.f = f;
                    in.g = g;
                    in.theta = theta;
                    in.j = j;
                    in.E = E;
                    in.p = 1.5;
                    in.alpha = 0.5;
                    out.push_back(std::move(in));
                }
    return out;
}

std::vector<LemmaInstance> suite_by_name(const std::string& name) {
    if (name == "default") return default_suite();
    if (name == "zero") {
        auto suite = default_suite();
        for (auto& in : suite) in.f = zero_function(1);
        return suite;
    }
    throw ValidationError("unknown lemma suite '" + name + "' (expected default or zero)");
}

}  // namespace fraclab
