#include "fraclab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v) const {
        const double u = log ? std::log10(v) : v;
        return (u - lo) / (hi - lo);
    }
};

Axis make_axis(const std::vector<double>& vals, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : vals) {
        const double u = log ? std::log10(v) : v;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
    return a;
}

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style) {
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ValidationError("plot series '" + s.name + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], style.log_x) && usable(s.y[i], style.log_y)) {
                xs.push_back(s.x[i]);
                ys.push_back(s.y[i]);
            }
    }
    const Axis ax = make_axis(xs, style.log_x), ay = make_axis(ys, style.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + pw * ax.map(v); };
    auto py = [&](double v) { return kTop + ph * (1.0 - ay.map(v)); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + f2(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(style.title) + "</text>\n";
    out += "<rect x=\"" + f2(kLeft) + "\" y=\"" + f2(kTop) + "\" width=\"" + f2(pw) + "\" height=\"" + f2(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double vx = ax.log ? std::pow(10.0, fx) : fx;
        const double vy = ay.log ? std::pow(10.0, fy) : fy;
        const double X = kLeft + pw * k / 4.0, Y = kTop + ph * (1.0 - k / 4.0);
        out += "<line x1=\"" + f2(X) + "\" y1=\"" + f2(kTop + ph) + "\" x2=\"" + f2(X) + "\" y2=\"" + f2(kTop + ph + 5) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + f2(X) + "\" y=\"" + f2(kTop + ph + 18) + "\" text-anchor=\"middle\">" + tick(vx) +
               "</text>\n";
        out += "<line x1=\"" + f2(kLeft - 5) + "\" y1=\"" + f2(Y) + "\" x2=\"" + f2(kLeft) + "\" y2=\"" + f2(Y) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + f2(kLeft - 8) + "\" y=\"" + f2(Y + 4) + "\" text-anchor=\"end\">" + tick(vy) +
               "</text>\n";
    }
    out += "<text x=\"" + f2(kLeft + pw / 2) + "\" y=\"" + f2(kHeight - 10) + "\" text-anchor=\"middle\">" +
           escape(style.x_label) + (style.log_x ? " (log)" : "") + "</text>\n";
    out += "<text x=\"16\" y=\"" + f2(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           f2(kTop + ph / 2) + ")\">" + escape(style.y_label) + (style.log_y ? " (log)" : "") + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::string color = kColors[si % (sizeof kColors / sizeof kColors[0])];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], style.log_x) && usable(s.y[i], style.log_y)) pts.emplace_back(px(s.x[i]), py(s.y[i]));
        if (!style.scatter && pts.size() > 1) {
            out += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"";
            for (const auto& [X, Y] : pts) out += f2(X) + "," + f2(Y) + " ";
            out += "\"/>\n";
        }
        for (const auto& [X, Y] : pts)
            out += "<circle cx=\"" + f2(X) + "\" cy=\"" + f2(Y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + f2(kLeft + 10) + "\" y=\"" + f2(kTop + 16 + 14.0 * si) + "\" fill=\"" + color + "\">" +
               escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const std::string& path, const std::vector<PlotSeries>& series, const PlotStyle& style) {
    const std::string doc = render_svg(series, style);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open plot file", path);
    out << doc;
    if (!out) throw IoError("failed writing plot file", path);
}

}  // namespace fraclab
