#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fraclab {

inline constexpr int kMaxDim = 3;
inline constexpr double kPi = 3.14159265358979323846;

// Point in R^d for d <= kMaxDim. Value type, no allocation.
struct Point {
    std::array<double, kMaxDim> c{};
    int dim = 1;

    Point() = default;
    explicit Point(int d) : dim(d) {}
    Point(std::initializer_list<double> xs);

    static Point from(std::span<const double> xs);
    static Point zero(int d) { return Point(d); }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    std::vector<double> to_vector() const;
    std::string to_string() const;
    bool finite() const;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
bool operator==(const Point& a, const Point& b);

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double norm_sq(const Point& a);

struct Box {
    Point lo;
    Point hi;

    int dim() const { return lo.dim; }
    double volume() const;
    bool contains(const Point& x) const;
    bool contains(const Box& other) const;
    Box hull(const Box& other) const;
};

// Minkowski combination a*A + b*B of two boxes with a, b >= 0.
Box combine(double a, const Box& A, double b, const Box& B);

// |B(1)| and |S^{d-1}| in R^d.
double unit_ball_volume(int d);
double unit_sphere_area(int d);

}  // namespace fraclab
