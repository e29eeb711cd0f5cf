#include "fraclab/geometry.hpp"

#include <algorithm>
#include <cstdio>

#include "fraclab/errors.hpp"

namespace fraclab {

Point::Point(std::initializer_list<double> xs) : dim(static_cast<int>(xs.size())) {
    if (xs.size() == 0 || xs.size() > kMaxDim)
        throw ValidationError("point dimension must be in 1.." + std::to_string(kMaxDim));
    std::copy(xs.begin(), xs.end(), c.begin());
}

Point Point::from(std::span<const double> xs) {
    if (xs.empty() || xs.size() > kMaxDim)
        throw ValidationError("point dimension must be in 1.." + std::to_string(kMaxDim));
    Point p(static_cast<int>(xs.size()));
    std::copy(xs.begin(), xs.end(), p.c.begin());
    return p;
}

std::vector<double> Point::to_vector() const {
    return {c.begin(), c.begin() + dim};
}

std::string Point::to_string() const {
    std::string s = "(";
    char buf[32];
    for (int i = 0; i < dim; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", c[static_cast<std::size_t>(i)]);
        if (i) s += ", ";
        s += buf;
    }
    return s + ")";
}

bool Point::finite() const {
    for (int i = 0; i < dim; ++i)
        if (!std::isfinite(c[static_cast<std::size_t>(i)])) return false;
    return true;
}

Point operator+(const Point& a, const Point& b) {
    Point r(a.dim);
    for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
    return r;
}

Point operator-(const Point& a, const Point& b) {
    Point r(a.dim);
    for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
    return r;
}

Point operator*(double s, const Point& a) {
    Point r(a.dim);
    for (int i = 0; i < a.dim; ++i) r[i] = s * a[i];
    return r;
}

bool operator==(const Point& a, const Point& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(const Point& a) { return dot(a, a); }

double norm(const Point& a) {
    if (a.dim == 1) return std::abs(a[0]);
    return std::sqrt(norm_sq(a));
}

double Box::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
}

bool Box::contains(const Point& x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

bool Box::contains(const Box& other) const {
    for (int i = 0; i < dim(); ++i)
        if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
    return true;
}

Box Box::hull(const Box& other) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
        b.lo[i] = std::min(lo[i], other.lo[i]);
        b.hi[i] = std::max(hi[i], other.hi[i]);
    }
    return b;
}

Box combine(double a, const Box& A, double b, const Box& B) {
    Box r{Point(A.dim()), Point(A.dim())};
    for (int i = 0; i < A.dim(); ++i) {
        r.lo[i] = a * A.lo[i] + b * B.lo[i];
        r.hi[i] = a * A.hi[i] + b * B.hi[i];
    }
    return r;
}

double unit_sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
    }
}

double unit_ball_volume(int d) { return unit_sphere_area(d) / d; }

}  // namespace fraclab
