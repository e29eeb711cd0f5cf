#include "fraclab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/function_json.hpp"
#include "fraclab/lemmas.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/regions.hpp"
#include "fraclab/svg.hpp"

namespace fraclab::cli {
namespace {

using nlohmann::json;

std::string key_of(std::string name) {
    for (char& c : name)
        if (c == '-') c = '_';
    return name;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scalar_text(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_object()) return v.dump();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_array() || v[i].is_object()) throw ValidationError("config key '" + key + "' nests too deeply");
            if (i) s += ',';
            s += scalar_text(v[i], key);
        }
        return s;
    }
    throw ValidationError("config key '" + key + "' has no usable value");
}

double parse_real(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError(what + ": '" + text + "' is not a number");
    return v;
}

long long parse_int(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError(what + ": '" + text + "' is not an integer");
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_real(item, what));
    return out;
}

// Options of one (sub)command, each also readable from the matching config section.
class Section {
public:
    explicit Section(CLI::App* app) : app_(app) {}

    CLI::App* app() const { return app_; }

    void option(const std::string& name, const std::string& help) {
        opts_[name] = app_->add_option("--" + name, values_[name], help);
    }
    void flag(const std::string& name, const std::string& help) {
        opts_[name] = app_->add_flag("--" + name, flags_[name], help);
    }

    void load(const json& section, const std::string& where) {
        if (!section.is_object()) throw ValidationError("config section '" + where + "' must be an object");
        for (const auto& [k, v] : section.items()) {
            bool known = false;
            for (const auto& [name, o] : opts_)
                if (key_of(name) == k) known = true;
            if (!known) throw ValidationError("unknown config key '" + k + "' in section '" + where + "'");
        }
        config_ = section;
    }

    std::set<std::string> keys() const {
        std::set<std::string> k;
        for (const auto& [name, o] : opts_) k.insert(key_of(name));
        return k;
    }

    std::optional<std::string> get(const std::string& name) const {
        if (opts_.at(name)->count() > 0) return values_.count(name) ? values_.at(name) : std::string("true");
        const std::string k = key_of(name);
        if (config_.is_object() && config_.contains(k)) return scalar_text(config_.at(k), k);
        return std::nullopt;
    }

    bool on(const std::string& name) const {
        if (opts_.at(name)->count() > 0) return true;
        const std::string k = key_of(name);
        if (config_.is_object() && config_.contains(k)) {
            const auto& v = config_.at(k);
            if (!v.is_boolean()) throw ValidationError("config key '" + k + "' must be true or false");
            return v.get<bool>();
        }
        return false;
    }

    std::string text(const std::string& name, const std::string& fallback) const { return get(name).value_or(fallback); }
    std::string require(const std::string& name) const {
        auto v = get(name);
        if (!v) throw ValidationError("missing required option --" + name);
        return *v;
    }
    double real(const std::string& name, double fallback) const {
        auto v = get(name);
        return v ? parse_real(*v, "--" + name) : fallback;
    }
    long long integer(const std::string& name, long long fallback) const {
        auto v = get(name);
        return v ? parse_int(*v, "--" + name) : fallback;
    }

private:
    CLI::App* app_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> flags_;
    std::map<std::string, CLI::Option*> opts_;
    json config_;
};

struct Globals {
    std::uint64_t seed = 42;
    std::optional<std::string> out;
    Format format = Format::Csv;
    bool plot = false;
};

void add_quadrature_options(Section& s) {
    s.option("method", "Quadrature: deterministic1d (default for d = 1), tensor_grid (default for d >= 2) or monte_carlo_radial");
    s.option("samples", "Evaluation budget: Monte Carlo samples or largest deterministic mesh (default 100000)");
    s.option("rel-tol", "Relative tolerance of mesh doubling (default 1e-3)");
    s.option("abs-tol", "Absolute tolerance of mesh doubling (default 1e-10)");
    s.option("truncation-radius", "Radius for integrate_singular (default 16); operators derive theirs from supports");
    s.option("inner-cut", "Extent of the graded zone around y = 0 (default 0: whole first segment)");
}

QuadratureConfig quadrature(const Section& s, int d, std::uint64_t seed) {
    QuadratureConfig c;
    c.method = d == 1 ? Method::Deterministic1D : Method::TensorGrid;
    if (auto m = s.get("method")) c.method = method_from_name(*m);
    const long long n = s.integer("samples", static_cast<long long>(c.samples));
    if (n < 1) throw ValidationError("--samples must be at least 1");
    c.samples = static_cast<std::size_t>(n);
    c.rel_tol = s.real("rel-tol", c.rel_tol);
    c.abs_tol = s.real("abs-tol", c.abs_tol);
    c.truncation_radius = s.real("truncation-radius", c.truncation_radius);
    c.inner_cut = s.real("inner-cut", c.inner_cut);
    c.seed = seed;
    validate(c, d);
    return c;
}

int dimension_of(const Section& s) {
    const long long d = s.integer("d", 1);
    if (d < 1 || d > 3) throw ValidationError("--d must be 1, 2 or 3");
    return static_cast<int>(d);
}

Point point_of(const std::optional<std::string>& text, int d) {
    if (!text) return Point::zero(d);
    const auto v = parse_list(*text, "--x");
    if (static_cast<int>(v.size()) != d)
        throw ValidationError("--x needs " + std::to_string(d) + " coordinates, got " + std::to_string(v.size()));
    return Point::from(v);
}

std::optional<Box> box_of(const std::optional<std::string>& text, int d) {
    if (!text) return std::nullopt;
    const auto v = parse_list(*text, "--box");
    if (static_cast<int>(v.size()) != 2 * d)
        throw ValidationError("--box needs lo_1..lo_d,hi_1..hi_d (" + std::to_string(2 * d) + " numbers)");
    Box b{Point::zero(d), Point::zero(d)};
    for (int i = 0; i < d; ++i) {
        b.lo[i] = v[static_cast<std::size_t>(i)];
        b.hi[i] = v[static_cast<std::size_t>(d + i)];
        if (!(b.hi[i] > b.lo[i])) throw ValidationError("--box has an empty axis");
    }
    return b;
}

std::size_t cells_of(const Section& s, int d) {
    const long long n = s.integer("cells", static_cast<long long>(default_cells(d)));
    if (n < 1) throw ValidationError("--cells must be at least 1");
    return static_cast<std::size_t>(n);
}

json estimate_json(const Estimate& e) {
    return json{{"value", e.value},          {"stderr", e.std_error}, {"error_bound", e.error_bound},
                {"samples", e.samples_used}, {"converged", e.converged}};
}

json number_or_text(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

void emit_text(const std::string& text, const Globals& g, std::ostream& out) {
    if (!g.out) {
        out << text;
        return;
    }
    std::ofstream f(*g.out, std::ios::binary);
    if (!f) throw IoError("cannot open output file", *g.out);
    f << text;
    if (!f) throw IoError("failed writing output file", *g.out);
}

void emit_records(const std::vector<ExperimentRecord>& records, const Globals& g, std::ostream& out) {
    if (g.out) {
        persist(records, *g.out, g.format);
        return;
    }
    out << (g.format == Format::Csv ? to_csv(records) : to_json(records));
}

std::string plot_path(const Globals& g) {
    if (!g.out) throw ValidationError("--plot needs --out to name the chart file");
    std::string p = *g.out;
    const auto slash = p.find_last_of('/');
    const auto dot = p.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) p.erase(dot);
    return p + ".svg";
}

// Plot value against an x column for each distinct quantity in `quantities`.
void plot_records(const std::vector<ExperimentRecord>& records, const std::vector<std::string>& quantities,
                  const std::string& x_name, const Globals& g, const PlotStyle& style) {
    std::vector<PlotSeries> series;
    for (const auto& q : quantities) {
        PlotSeries s;
        s.name = q;
        for (const auto& r : records) {
            if (r.quantity != q) continue;
            std::optional<double> x;
            if (x_name == "theta") x = r.theta;
            if (x_name == "t") x = r.t;
            if (x_name == "j" && r.j) x = *r.j;
            if (!x) continue;
            s.x.push_back(*x);
            s.y.push_back(r.value);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    write_svg(plot_path(g), series, style);
}

// ---- subcommands ----

void cmd_eval(const Section& s, const Globals& g, std::ostream& out, std::ostream& err) {
    const int d = dimension_of(s);
    const double alpha = s.real("alpha", 0.5);
    const QuadratureConfig cfg = quadrature(s, d, g.seed);
    const std::string op = s.text("operator", "bilinear");
    const FunctionSpec f = parse_function_arg(s.require("f"), d, alpha);
    const Point x = point_of(s.get("x"), d);
    json res;
    res["operator"] = op;
    res["x"] = x.to_vector();
    if (op == "riesz") {
        res.update(estimate_json(eval_riesz(f, alpha, d, x, cfg)));
    } else if (op == "stress") {
        const StressTensor S = eval_stress_tensor(f, alpha, d, x, cfg);
        json m = json::array(), e = json::array();
        for (int a = 0; a < d; ++a) {
            json row = json::array(), erow = json::array();
            for (int b = 0; b < d; ++b) {
                row.push_back(S.at(a, b).value);
                erow.push_back(std::max(S.at(a, b).error_bound, S.at(a, b).std_error));
            }
            m.push_back(row);
            e.push_back(erow);
        }
        res["value"] = m;
        res["error"] = e;
    } else {
        const FunctionSpec gg = parse_function_arg(s.require("g"), d, alpha);
        OperatorParams p;
        p.alpha = alpha;
        p.d = d;
        p.theta = s.real("theta", 0.5);
        p.j = static_cast<int>(s.integer("j", 0));
        if (op == "bilinear") {
            res.update(estimate_json(eval_bilinear(f, gg, p, x, cfg)));
        } else if (op == "dyadic") {
            res.update(estimate_json(eval_dyadic(f, gg, p, x, cfg)));
        } else if (op == "B") {
            res.update(estimate_json(eval_B(f, gg, alpha, d, x, cfg)));
        } else {
            throw ValidationError("unknown operator '" + op + "' (expected bilinear, dyadic, riesz, B or stress)");
        }
    }
    for (const auto& w : drain_warnings()) err << "warning: " << w << '\n';
    emit_text(res.dump(2) + "\n", g, out);
}

void cmd_norm(const Section& s, const Globals& g, std::ostream& out) {
    const int d = dimension_of(s);
    const double alpha = s.real("alpha", 0.5);
    const FunctionSpec f = parse_function_arg(s.require("f"), d, alpha);
    NormKind kind;
    kind.kind = norm_kind_from_name(s.text("kind", "lp"));
    kind.exponent = parse_exponent(s.require("exponent"));
    json res;
    res["kind"] = norm_name(kind.kind);
    res["exponent"] = number_or_text(kind.exponent);
    const auto box_opt = box_of(s.get("box"), d);
    const bool sample = s.get("g").has_value() || box_opt.has_value() || s.get("cells").has_value();
    if (!sample) {
        res["source"] = "analytic";
        res["value"] = number_or_text(norm(f, kind));
        emit_text(res.dump(2) + "\n", g, out);
        return;
    }
    const std::size_t cells = cells_of(s, d);
    SampledField field;
    if (auto gtext = s.get("g")) {
        const FunctionSpec gg = parse_function_arg(*gtext, d, alpha);
        const double theta = s.real("theta", 0.5);
        const Box box = box_opt ? *box_opt : output_support(f, gg, theta);
        field = sample_bilinear(f, gg, alpha, d, theta, box, cells, quadrature(s, d, g.seed)).field;
        res["source"] = "operator";
        res["theta"] = theta;
    } else {
        const Box box = box_opt ? *box_opt : support_box(f);
        field = sample_function(f, box, uniform_cells(d, cells));
        res["source"] = "sampled_function";
    }
    res["box"] = {field.box.lo.to_vector(), field.box.hi.to_vector()};
    res["cells"] = cells;
    res["value"] = number_or_text(norm(field, kind));
    if (auto st = s.get("set-exponent")) {
        if (kind.kind != NormKind::Kind::WeakLebesgue) throw ValidationError("--set-exponent applies to the weak norm");
        const SetBound b = weak_norm_set_lower_bound(field, kind.exponent, parse_real(*st, "--set-exponent"),
                                                     superlevel_family(field));
        res["set_estimator"] = b.estimator;
        res["set_count"] = b.sets;
    }
    if (auto path = s.get("field-out")) write_field_csv(field, *path);
    emit_text(res.dump(2) + "\n", g, out);
}

void cmd_region(const Section& s, const Globals& g, std::ostream& out) {
    const int d = dimension_of(s);
    const std::string p = s.require("p"), q = s.require("q"), alpha = s.text("alpha", "0.5");
    const ExponentPoint pt = make_point(p, q, alpha, d);
    const RExponent r = compute_r(pt);
    const RegionClass c = classify(pt);
    json res;
    res["p"] = number_or_text(pt.p());
    res["q"] = number_or_text(pt.q());
    res["alpha"] = pt.alpha;
    res["d"] = d;
    res["r"] = r.status == RExponent::Status::Invalid ? json(nullptr) : number_or_text(r.r);
    res["r_status"] = status_name(r.status);
    res["region"] = region_name(c.region);
    res["bound"] = bound_name(c.bound);
    res["theorem"] = c.estimate;
    res["uniformity"] = c.uniformity;
    res["lorentz_uniform"] = c.lorentz_uniform;
    if (!c.note.empty()) res["note"] = c.note;
    if (!c.endpoints.empty()) {
        json e = json::array();
        for (const auto& n : c.endpoints) e.push_back({{"name", n.name}, {"constant", n.constant}});
        res["endpoints"] = e;
    }
    emit_text(res.dump(2) + "\n", g, out);
}

std::vector<double> theta_grid(const Section& s) {
    if (auto t = s.get("thetas")) return parse_list(*t, "--thetas");
    if (auto n = s.get("theta-count")) {
        const long long k = parse_int(*n, "--theta-count");
        if (k < 1) return {};
        if (k == 1) return {0.5};
        std::vector<double> out;
        for (long long i = 0; i < k; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(k - 1));
        return out;
    }
    return {};
}

void cmd_sweep(const Section& s, const Globals& g, std::ostream& out) {
    const int d = dimension_of(s);
    const std::string alpha = s.text("alpha", "0.5");
    SweepPlan plan;
    plan.point = make_point(s.require("p"), s.require("q"), alpha, d);
    plan.f = parse_function_arg(s.require("f"), d, plan.point.alpha);
    plan.g = parse_function_arg(s.require("g"), d, plan.point.alpha);
    plan.thetas = theta_grid(s);
    plan.box = box_of(s.get("box"), d);
    plan.cells = cells_of(s, d);
    plan.cfg = quadrature(s, d, g.seed);
    plan.timing = s.on("timing");
    plan.id = s.text("id", "theta_sweep");
    const auto records = theta_sweep(plan);
    emit_records(records, g, out);
    if (g.plot)
        plot_records(records, {"ratio"}, "theta", g, {"theta sweep: " + plan.id, "theta", "ratio", false, false, false});
}

void cmd_sharpness(const Section& s, const Globals& g, std::ostream& out, std::ostream& err) {
    SharpnessPlan plan;
    plan.which = sharp_case_from_name(s.text("case", "I"));
    plan.d = dimension_of(s);
    plan.alpha = s.real("alpha", 0.5);
    plan.p = s.real("p", 1.5);
    if (auto t = s.get("t")) {
        plan.t_grid = parse_list(*t, "--t");
    } else {
        const long long lo = s.integer("k-min", 4), hi = s.integer("k-max", 16);
        if (lo > hi) throw ValidationError("--k-min exceeds --k-max");
        for (long long k = lo; k <= hi; ++k) plan.t_grid.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    }
    if (auto th = s.get("thetas")) plan.theta_grid = parse_list(*th, "--thetas");
    plan.cells = cells_of(s, plan.d);
    plan.cfg = quadrature(s, plan.d, g.seed);
    plan.timing = s.on("timing");
    const SharpnessReport rep = sharpness_case(plan);
    err << "case " << sharp_case_name(plan.which) << ": fitted exponent " << fmt(rep.fitted_exponent)
        << ", predicted " << fmt(rep.predicted_exponent) << ", strictly increasing "
        << (rep.strictly_increasing ? "yes" : "no") << ", diverges " << (rep.diverges ? "yes" : "no") << '\n';
    emit_records(rep.records, g, out);
    if (g.plot)
        plot_records(rep.records, {"weak_norm", "prediction"}, "t", g,
                     {"sharpness case " + sharp_case_name(plan.which), "t", "value", true, true, false});
}

int cmd_verify(const Section& s, const Globals& g, std::ostream& out, std::ostream& err) {
    const QuadratureConfig cfg = quadrature(s, 1, g.seed);
    if (auto id = s.get("identity")) {
        const double alpha = s.real("alpha", 0.5);
        std::vector<ExperimentRecord> records;
        if (*id == "divergence") {
            std::vector<std::size_t> cells;
            for (double c : parse_list(s.text("cells", "2048,4096"), "--cells")) {
                if (!(c >= 1.0)) throw ValidationError("--cells entries must be positive");
                cells.push_back(static_cast<std::size_t>(c));
            }
            const auto rep = divergence_experiment(alpha, cells, cfg);
            records = rep.records;
            for (std::size_t k = 0; k < rep.cells.size(); ++k)
                err << "cells " << rep.cells[k] << ": relative L2 residual " << fmt(rep.residual[k]) << '\n';
        } else if (*id == "h_lower_bound") {
            std::vector<int> ks;
            for (long long k = s.integer("k-min", 4); k <= s.integer("k-max", 12); ++k) ks.push_back(static_cast<int>(k));
            const auto rep = h_lower_bound(alpha, 1, ks, cfg);
            records = rep.records;
            err << "fitted constant " << fmt(rep.fitted_c) << '\n';
        } else {
            throw ValidationError("unknown identity '" + *id + "' (expected divergence or h_lower_bound)");
        }
        emit_records(records, g, out);
        if (g.plot) plot_records(records, {"relative_l2", "riesz_h"}, "j", g, {"verify " + *id, "j", "value", false, true, false});
        return kOk;
    }
    const std::string lemma = s.text("lemma", "all");
    const auto instances = suite_by_name(s.text("suite", "default"));
    const LemmaReport rep = lemma_suite(lemma, instances);
    for (const auto& item : rep.items)
        err << inequality_name(item.which) << ": best constant " << fmt(item.best_constant) << " "
            << (item.pass ? "pass" : "FAIL") << '\n';
    const auto records = lemma_records(rep, instances);
    emit_records(records, g, out);
    if (g.plot) {
        std::vector<std::string> names;
        for (const auto& item : rep.items) names.push_back(inequality_name(item.which) + "_constant");
        plot_records(records, names, "theta", g, {"lemma constants by theta", "theta", "constant", false, true, false});
    }
    if (!rep.pass) {
        err << "verification failed: no finite constant covers every instance\n";
        return kNumericError;
    }
    return kOk;
}

json read_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical lab for bilinear fractional integrals, their dyadic pieces and weak-type bounds.",
                 "fraclab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(
        "Config: --config FILE holds one JSON object with optional top-level keys seed, out, format, plot, threads\n"
        "and one object per subcommand whose keys are that subcommand's option names with '-' written as '_'.\n"
        "Flags override config values. FRACLAB_THREADS overrides --threads.\n"
        "Exit codes: 0 ok, 2 configuration or validation error, 3 numerical failure, 4 I/O error.");

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; command-line flags override its values");
    Section global(&app);
    global.option("seed", "Seed for Monte Carlo quadrature (default 42)");
    global.option("out", "Write results to this file instead of stdout");
    global.option("format", "Record format for sweep, sharpness and verify: csv (default) or json");
    global.flag("plot", "Also write an SVG chart next to --out (same name, .svg)");
    global.option("threads", "Worker threads (default 1); FRACLAB_THREADS overrides");

    const std::string fspec =
        "Function spec: ball:c..,r | box:c..,s.. | h | h:alpha | powerlog:alpha,kappa,cutoff | bump:t,p | zero | "
        "json:PATH | literal JSON object";

    Section eval(app.add_subcommand("eval", "Evaluate an operator at one point and print the estimate as JSON"));
    eval.option("f", fspec);
    eval.option("g", "Second function (bilinear, dyadic, B)");
    eval.option("operator", "bilinear (default), dyadic, riesz, B or stress");
    eval.option("alpha", "Order alpha in (0, d) (default 0.5)");
    eval.option("d", "Dimension 1, 2 or 3 (default 1)");
    eval.option("theta", "Interpolation parameter in [0, 1] (default 0.5)");
    eval.option("j", "Dyadic scale for the dyadic operator (default 0)");
    eval.option("x", "Evaluation point, comma separated (default origin)");
    add_quadrature_options(eval);

    Section norm_s(app.add_subcommand("norm", "Lebesgue, weak or Lorentz norm of a function or of a sampled operator output"));
    norm_s.option("f", fspec);
    norm_s.option("g", "If given, the norm is taken of I^theta(f, g) sampled on --box");
    norm_s.option("kind", "lp (default), weak or lorentz");
    norm_s.option("exponent", "Exponent p or r; 'inf' allowed for lp");
    norm_s.option("alpha", "Order alpha for h and for the operator (default 0.5)");
    norm_s.option("d", "Dimension 1, 2 or 3 (default 1)");
    norm_s.option("theta", "Interpolation parameter of the operator (default 0.5)");
    norm_s.option("box", "Sampling box lo_1..lo_d,hi_1..hi_d (default: support of the sampled function)");
    norm_s.option("cells", "Cells per axis when sampling (default 16384 for d = 1, 512 for d = 2, 64 for d = 3)");
    norm_s.option("set-exponent", "For weak norms of sampled fields: also report the superlevel-set estimator with this s < r");
    norm_s.option("field-out", "Write the sampled field as CSV (centers, cell_measure, value)");
    add_quadrature_options(norm_s);

    Section region(app.add_subcommand("region", "Classify an exponent point (1/p, 1/q) and print it as JSON"));
    region.option("p", "Exponent p in [1, inf]; fractions like 3/2 are compared exactly");
    region.option("q", "Exponent q in [1, inf]");
    region.option("alpha", "Order alpha in (0, d) (default 0.5)");
    region.option("d", "Dimension 1, 2 or 3 (default 1)");

    Section sweep(app.add_subcommand("sweep", "Weak-norm ratios of I^theta(f, g) over a theta grid"));
    sweep.option("f", fspec);
    sweep.option("g", "Second function");
    sweep.option("p", "Exponent of f");
    sweep.option("q", "Exponent of g");
    sweep.option("alpha", "Order alpha (default 0.5)");
    sweep.option("d", "Dimension 1, 2 or 3 (default 1)");
    sweep.option("thetas", "Comma separated theta values in [0, 1]");
    sweep.option("theta-count", "Uniform grid of this many theta values on [0, 1] when --thetas is absent");
    sweep.option("box", "Fixed sampling box lo..,hi.. (default: theta supp f + (1 - theta) supp g per theta)");
    sweep.option("cells", "Cells per axis (default 16384 for d = 1, 512 for d = 2, 64 for d = 3)");
    sweep.option("id", "Experiment name written to every row (default theta_sweep)");
    sweep.flag("timing", "Record wall time per row (otherwise 0, keeping output byte-stable)");
    add_quadrature_options(sweep);

    Section sharp(app.add_subcommand("sharpness", "Blow-up witnesses built from h and dilated bumps"));
    sharp.option("case", "I, II, III, IV or V (default I)");
    sharp.option("alpha", "Order alpha (default 0.5)");
    sharp.option("d", "Dimension 1, 2 or 3 (default 1)");
    sharp.option("p", "Exponent of psi_t in Cases III and IV (default 1.5)");
    sharp.option("t", "Comma separated dilation parameters in (0, 1/8)");
    sharp.option("k-min", "Without --t: t = 2^-k for k from k-min (default 4)");
    sharp.option("k-max", "... to k-max (default 16)");
    sharp.option("thetas", "Theta values in the coordinates of Cases I and III (default: the limiting endpoint)");
    sharp.option("cells", "Cells per axis (default 16384 for d = 1)");
    sharp.flag("timing", "Record wall time per row");
    add_quadrature_options(sharp);

    Section verify(app.add_subcommand("verify", "Check dyadic-piece inequalities on indicator suites, or run an identity check"));
    verify.option("lemma", "Inequality (aux0, aux1, aux20, aux21, L0, L00, L000, L0000, aux1_lor, aux2_lor) or group "
                           "(dyadic_basic, dyadic_mixed, dyadic_localized, dyadic_lorentz, all; default all)");
    verify.option("suite", "Instance suite: default or zero");
    verify.option("identity", "Instead of inequalities: divergence or h_lower_bound");
    verify.option("alpha", "Order alpha for identity checks (default 0.5)");
    verify.option("cells", "Grid sizes for the divergence check (default 2048,4096)");
    verify.option("k-min", "Smallest k with |x| = 2^-k for h_lower_bound (default 4)");
    verify.option("k-max", "Largest k (default 12)");
    add_quadrature_options(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        std::map<std::string, Section*> sections{{"eval", &eval},   {"norm", &norm_s},       {"region", &region},
                                                 {"sweep", &sweep}, {"sharpness", &sharp}, {"verify", &verify}};
        if (!config_path.empty()) {
            const json cfg = read_config(config_path);
            if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
            json top = json::object();
            for (const auto& [k, v] : cfg.items()) {
                if (sections.count(k)) sections[k]->load(v, k);
                else top[k] = v;
            }
            global.load(top, "top level");
        }

        Globals g;
        const long long seed = global.integer("seed", 42);
        if (seed < 0) throw ValidationError("--seed must be nonnegative");
        g.seed = static_cast<std::uint64_t>(seed);
        g.out = global.get("out");
        g.format = format_from_name(global.text("format", "csv"));
        g.plot = global.on("plot");
        long long threads = global.integer("threads", 1);
        if (const char* env = std::getenv("FRACLAB_THREADS"); env && *env)
            threads = parse_int(env, "FRACLAB_THREADS");
        if (threads < 1 || threads > 1024) throw ValidationError("thread count must be between 1 and 1024");
        set_thread_count(static_cast<int>(threads));

        CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (name == "eval") cmd_eval(eval, g, out, err);
        else if (name == "norm") cmd_norm(norm_s, g, out);
        else if (name == "region") cmd_region(region, g, out);
        else if (name == "sweep") cmd_sweep(sweep, g, out);
        else if (name == "sharpness") cmd_sharpness(sharp, g, out, err);
        else if (name == "verify") return cmd_verify(verify, g, out, err);
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericError;
    }
}

}  // namespace fraclab::cli
