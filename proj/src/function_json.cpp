#include "fraclab/function_json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError("function spec must be a JSON object");
    std::set<std::string> ok;
    for (const char* k : allowed) ok.insert(k);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in function spec");
}

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("function spec is missing '") + key + "'");
    return j.at(key);
}

double num(const json& j, const char* what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
    return j.get<double>();
}

Point point(const json& j, const char* what) {
    if (!j.is_array() || j.empty() || j.size() > kMaxDim)
        throw ValidationError(std::string(what) + " must be an array of 1 to 3 numbers");
    Point p(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<int>(i)] = num(j[i], what);
    return p;
}

json point_json(const Point& p) { return p.to_vector(); }

json exponent_json(double p) {
    if (std::isinf(p)) return "inf";
    return p;
}

SimpleSet set_from_json(const json& j) {
    const std::string kind = need(j, "kind").get<std::string>();
    if (kind == "ball") {
        check_keys(j, {"kind", "center", "radius"});
        return IndicatorBall{point(need(j, "center"), "center"), num(need(j, "radius"), "radius")};
    }
    if (kind == "box") {
        check_keys(j, {"kind", "corner", "sides"});
        return IndicatorBox{point(need(j, "corner"), "corner"), point(need(j, "sides"), "sides")};
    }
    throw ValidationError("simple function sets must be balls or boxes, got '" + kind + "'");
}

json set_json(const SimpleSet& s) {
    if (const auto* b = std::get_if<IndicatorBall>(&s))
        return {{"kind", "ball"}, {"center", point_json(b->center)}, {"radius", b->radius}};
    const auto& b = std::get<IndicatorBox>(s);
    return {{"kind", "box"}, {"corner", point_json(b.corner)}, {"sides", point_json(b.sides)}};
}

int dim_field(const json& j) {
    const json& d = need(j, "dim");
    if (!d.is_number_integer()) throw ValidationError("dim must be an integer");
    return d.get<int>();
}

std::vector<double> numbers(const std::string& body, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_exponent(item));
        } catch (const ValidationError&) {
            throw ValidationError("bad number '" + item + "' in function spec '" + text + "'");
        }
    }
    return out;
}

}  // namespace

double parse_exponent(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const double a = std::stod(s.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument("");
            const std::string den = s.substr(slash + 1);
            const double b = std::stod(den, &used);
            if (used != den.size() || b == 0.0) throw std::invalid_argument("");
            return a / b;
        }
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number '" + text + "'");
    }
}

json to_json(const FunctionSpec& f) {
    struct V {
        json operator()(const IndicatorBall& b) const { return set_json(b); }
        json operator()(const IndicatorBox& b) const { return set_json(b); }
        json operator()(const SimpleFunction& s) const {
            json terms = json::array();
            for (const auto& t : s.terms) terms.push_back({{"coefficient", t.coefficient}, {"set", set_json(t.set)}});
            return {{"kind", "simple"}, {"dim", s.dim}, {"terms", terms}};
        }
        json operator()(const RadialPowerLog& h) const {
            return {{"kind", "radial_power_log"}, {"dim", h.dim},       {"alpha", h.alpha},
                    {"kappa", h.kappa},          {"cutoff", h.cutoff}, {"center", point_json(h.center)}};
        }
        json operator()(const SmoothBump& b) const {
            return {{"kind", "smooth_bump"}, {"dim", b.dim}, {"scale", b.scale}, {"p", exponent_json(b.p)},
                    {"center", point_json(b.center)}};
        }
        json operator()(const GridFunction& g) const {
            std::vector<std::size_t> shape(g.shape.begin(), g.shape.begin() + g.dim());
            return {{"kind", "grid"}, {"origin", point_json(g.origin)}, {"spacing", g.spacing}, {"shape", shape},
                    {"values", g.values}};
        }
    };
    return std::visit(V{}, f);
}

FunctionSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("function spec must be a JSON object");
    const json& kj = need(j, "kind");
    if (!kj.is_string()) throw ValidationError("function spec 'kind' must be a string");
    const std::string kind = kj.get<std::string>();
    FunctionSpec f;
    try {
        if (kind == "ball" || kind == "box") {
            f = std::visit([](const auto& s) -> FunctionSpec { return s; }, set_from_json(j));
        } else if (kind == "simple") {
            check_keys(j, {"kind", "dim", "terms"});
            SimpleFunction s{dim_field(j), {}};
            const json& terms = need(j, "terms");
            if (!terms.is_array()) throw ValidationError("terms must be an array");
            for (const json& t : terms) {
                check_keys(t, {"coefficient", "set"});
                s.terms.push_back({num(need(t, "coefficient"), "coefficient"), set_from_json(need(t, "set"))});
            }
            f = s;
        } else if (kind == "radial_power_log") {
            check_keys(j, {"kind", "dim", "alpha", "kappa", "cutoff", "center"});
            RadialPowerLog h;
            h.dim = dim_field(j);
            h.alpha = num(need(j, "alpha"), "alpha");
            h.kappa = num(need(j, "kappa"), "kappa");
            h.cutoff = num(need(j, "cutoff"), "cutoff");
            h.center = j.contains("center") ? point(j.at("center"), "center") : Point(h.dim);
            f = h;
        } else if (kind == "smooth_bump") {
            check_keys(j, {"kind", "dim", "scale", "p", "center"});
            SmoothBump b;
            b.dim = dim_field(j);
            b.scale = num(need(j, "scale"), "scale");
            const json& p = need(j, "p");
            b.p = p.is_string() ? parse_exponent(p.get<std::string>()) : num(p, "p");
            b.center = j.contains("center") ? point(j.at("center"), "center") : Point(b.dim);
            f = b;
        } else if (kind == "grid") {
            check_keys(j, {"kind", "origin", "spacing", "shape", "values"});
            GridFunction g;
            g.origin = point(need(j, "origin"), "origin");
            g.spacing = num(need(j, "spacing"), "spacing");
            const json& shape = need(j, "shape");
            if (!shape.is_array() || static_cast<int>(shape.size()) != g.dim())
                throw ValidationError("grid shape must have one entry per dimension");
            for (std::size_t i = 0; i < shape.size(); ++i) {
                if (!shape[i].is_number_integer() || shape[i].get<long long>() < 1)
                    throw ValidationError("grid shape entries must be positive integers");
                g.shape[i] = shape[i].get<std::size_t>();
            }
            const json& vals = need(j, "values");
            if (!vals.is_array()) throw ValidationError("grid values must be an array");
            for (const json& v : vals) g.values.push_back(num(v, "grid value"));
            f = g;
        } else {
            throw ValidationError("unknown function kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed function spec: ") + e.what());
    }
    validate(f);
    return f;
}

FunctionSpec parse_function_arg(const std::string& text, int d, double default_alpha) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("cannot parse function JSON: ") + e.what());
        }
        return spec_from_json(j);
    }
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "json") {
        std::ifstream in(body);
        if (!in) throw IoError("cannot open function spec", body);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ValidationError("cannot parse function JSON in " + body + ": " + e.what());
        }
        return spec_from_json(j);
    }
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3");
    const std::vector<double> v = numbers(body, text);
    auto expect = [&](std::size_t n) {
        if (v.size() != n)
            throw ValidationError("function spec '" + text + "' needs " + std::to_string(n) + " numbers in d=" +
                                  std::to_string(d));
    };
    const auto du = static_cast<std::size_t>(d);
    FunctionSpec f;
    if (head == "zero") {
        f = zero_function(d);
    } else if (head == "ball") {
        expect(du + 1);
        f = IndicatorBall{Point::from({v.data(), du}), v[du]};
    } else if (head == "box") {
        expect(2 * du);
        f = IndicatorBox{Point::from({v.data(), du}), Point::from({v.data() + du, du})};
    } else if (head == "h") {
        if (v.size() > 1) expect(1);
        return make_h(d, v.empty() ? default_alpha : v[0]);
    } else if (head == "powerlog") {
        expect(3);
        f = RadialPowerLog{d, v[0], v[1], v[2], Point(d)};
    } else if (head == "bump") {
        expect(2);
        f = SmoothBump{d, v[0], v[1], Point(d)};
    } else {
        throw ValidationError("unknown function form '" + text + "'");
    }
    validate(f);
    return f;
}

}  // namespace fraclab
