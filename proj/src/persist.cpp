#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"

namespace fraclab {

const char* const kCsvHeader = "experiment,alpha,d,p,q,r,theta,t,j,seed,quantity,value,stderr,walltime_ms";

namespace {

constexpr std::size_t kColumns = 14;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); }

void check_label(const std::string& s, const char* what) {
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r')
            throw ValidationError(std::string(what) + " '" + s + "' contains a character not allowed in CSV");
}

double parse_number(const std::string& s, std::size_t line) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw ValidationError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    return v;
}

std::optional<double> parse_opt_double(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    return parse_number(s, line);
}

std::optional<int> parse_opt_int(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw ValidationError("line " + std::to_string(line) + ": '" + s + "' is not an integer");
    return v;
}

std::optional<std::uint64_t> parse_opt_u64(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s[0] == '-')
        throw ValidationError("line " + std::to_string(line) + ": '" + s + "' is not a seed");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

template <class T>
std::string json_opt(const std::optional<T>& v) {
    if (!v) return "null";
    if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(*v)) return json_string(num(*v));
        return num(*v);
    } else {
        return std::to_string(*v);
    }
}

std::string json_num(double v) { return std::isfinite(v) ? num(v) : json_string(num(v)); }

std::optional<double> json_double(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) return parse_number(v.get<std::string>(), 0);
    if (!v.is_number()) throw ValidationError(std::string("field ") + key + " must be a number");
    return v.get<double>();
}

template <class T>
std::optional<T> json_int(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number_integer()) throw ValidationError(std::string("field ") + key + " must be an integer");
    return v.get<T>();
}

const char* const kKeys[kColumns] = {"experiment", "alpha", "d",     "p",        "q",     "r",      "theta",
                                     "t",          "j",     "seed",  "quantity", "value", "stderr", "walltime_ms"};

}  // namespace

Format format_from_name(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_name(Format f) { return f == Format::Csv ? "csv" : "json"; }

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        check_label(r.experiment, "experiment");
        check_label(r.quantity, "quantity");
        out += r.experiment + ',' + opt(r.alpha) + ',' + opt(r.d) + ',' + opt(r.p) + ',' + opt(r.q) + ',' + opt(r.r) +
               ',' + opt(r.theta) + ',' + opt(r.t) + ',' + opt(r.j) + ',' + opt(r.seed) + ',' + r.quantity + ',' +
               num(r.value) + ',' + opt(r.stderr_value) + ',' + num(r.walltime_ms) + '\n';
    }
    return out;
}

std::string to_json(const std::vector<ExperimentRecord>& records) {
    std::string out = "[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out += i == 0 ? "\n  {" : ",\n  {";
        out += "\"experiment\": " + json_string(r.experiment);
        out += ", \"alpha\": " + json_opt(r.alpha);
        out += ", \"d\": " + json_opt(r.d);
        out += ", \"p\": " + json_opt(r.p);
        out += ", \"q\": " + json_opt(r.q);
        out += ", \"r\": " + json_opt(r.r);
        out += ", \"theta\": " + json_opt(r.theta);
        out += ", \"t\": " + json_opt(r.t);
        out += ", \"j\": " + json_opt(r.j);
        out += ", \"seed\": " + json_opt(r.seed);
        out += ", \"quantity\": " + json_string(r.quantity);
        out += ", \"value\": " + json_num(r.value);
        out += ", \"stderr\": " + json_opt(r.stderr_value);
        out += ", \"walltime_ms\": " + json_num(r.walltime_ms);
        out += "}";
    }
    out += records.empty() ? "]\n" : "\n]\n";
    return out;
}

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ValidationError("CSV header does not match the record schema");
    std::vector<ExperimentRecord> out;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != kColumns)
            throw ValidationError("line " + std::to_string(n) + ": expected 14 fields, got " + std::to_string(f.size()));
        ExperimentRecord r;
        r.experiment = f[0];
        r.alpha = parse_opt_double(f[1], n);
        r.d = parse_opt_int(f[2], n);
        r.p = parse_opt_double(f[3], n);
        r.q = parse_opt_double(f[4], n);
        r.r = parse_opt_double(f[5], n);
        r.theta = parse_opt_double(f[6], n);
        r.t = parse_opt_double(f[7], n);
        r.j = parse_opt_int(f[8], n);
        r.seed = parse_opt_u64(f[9], n);
        r.quantity = f[10];
        r.value = parse_number(f[11], n);
        r.stderr_value = parse_opt_double(f[12], n);
        r.walltime_ms = parse_number(f[13], n);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ExperimentRecord> parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ValidationError("record file must hold a JSON array");
    std::vector<ExperimentRecord> out;
    for (const auto& j : doc) {
        if (!j.is_object() || j.size() != kColumns) throw ValidationError("record must be an object with 14 fields");
        for (const char* k : kKeys)
            if (!j.contains(k)) throw ValidationError(std::string("record is missing field ") + k);
        ExperimentRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.alpha = json_double(j, "alpha");
        r.d = json_int<int>(j, "d");
        r.p = json_double(j, "p");
        r.q = json_double(j, "q");
        r.r = json_double(j, "r");
        r.theta = json_double(j, "theta");
        r.t = json_double(j, "t");
        r.j = json_int<int>(j, "j");
        r.seed = json_int<std::uint64_t>(j, "seed");
        r.quantity = j.at("quantity").get<std::string>();
        r.value = *json_double(j, "value");
        r.stderr_value = json_double(j, "stderr");
        r.walltime_ms = *json_double(j, "walltime_ms");
        out.push_back(std::move(r));
    }
    return out;
}

void persist(const std::vector<ExperimentRecord>& records, const std::string& path, Format format) {
    const std::string text = format == Format::Csv ? to_csv(records) : to_json(records);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file", path);
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing output file", path);
}

std::vector<ExperimentRecord> load_records(const std::string& path, Format format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open record file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return format == Format::Csv ? parse_csv(ss.str()) : parse_json(ss.str());
}

}  // namespace fraclab
