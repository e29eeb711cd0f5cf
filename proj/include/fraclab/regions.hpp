#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace fraclab {

using Rational = boost::rational<long long>;

// A real number that may also be known exactly.
struct Exact {
    double value = 0.0;
    std::optional<Rational> exact;
};

// "inf", integers, "a/b" and plain decimals are exact; anything else numeric is not.
// Returns 1/x for an exponent text x in [1, inf].
Exact reciprocal_of_exponent(const std::string& text);
Exact exact_from_text(const std::string& text);

// Integrability point (1/p, 1/q) together with a = alpha/d.
struct ExponentPoint {
    Exact inv_p;
    Exact inv_q;
    Exact a;
    double alpha = 0.5;
    int d = 1;

    double p() const;
    double q() const;
};

ExponentPoint make_point(double p, double q, double alpha, int d);
// Exact comparisons whenever the texts are exact.
ExponentPoint make_point(const std::string& p, const std::string& q, const std::string& alpha, int d);

// Throws ValidationError unless p, q in [1, inf] and 0 < alpha < d.
void validate(const ExponentPoint& pt);

struct RExponent {
    enum class Status { Finite, Infinite, Invalid };
    Status status = Status::Invalid;
    double r = 0.0;       // meaningful for Finite
    double inv_r = 0.0;   // 1/p + 1/q - alpha/d
};
std::string status_name(RExponent::Status s);

// 1/p + 1/q = 1/r + alpha/d
RExponent compute_r(const ExponentPoint& pt);
RExponent compute_r(double p, double q, double alpha, int d);

enum class Region {
    SquareInterior,
    EdgeTop,
    EdgeRight,
    EdgeBottom,
    EdgeLeft,
    CornerSW,
    CornerNE,
    PentagonInterior,
    PentagonBoundaryLower,
    Outside
};

enum class Bound {
    UniformStrong,
    UniformWeak,
    WeakUniformAwayFromTheta1,
    WeakUniformAwayFromTheta0,
    WeakUniformAwayFromBoth,
    StrongNonuniform,
    LorentzRestrictedUniform,
    None
};

std::string region_name(Region r);
std::string bound_name(Bound b);
Region region_from_name(const std::string& name);

// Restricted weak-type endpoint with a theta-dependent constant.
struct EndpointNote {
    std::string name;
    std::string constant;  // e.g. "(1-theta)^(-alpha)"
};

struct RegionClass {
    Region region = Region::Outside;
    Bound bound = Bound::None;
    // Restricted (Lorentz L^{p,1} / L^{q,1}) bounds hold uniformly in theta here.
    bool lorentz_uniform = false;
    std::string estimate;    // name of the governing estimate
    std::string uniformity;  // plain-language theta dependence
    std::string note;
    std::vector<EndpointNote> endpoints;
};

RegionClass classify(const ExponentPoint& pt);

// Mirror image (p, q) -> (q, p).
Region mirror(Region r);

struct AtlasEntry {
    double inv_p = 0.0;
    double inv_q = 0.0;
    Region expected = Region::Outside;
};
// Hand-labeled points for a = 1/2, one per region tag that appears in the plane picture.
std::vector<AtlasEntry> reference_atlas();

struct SeriesSum {
    double value = 0.0;
    int j_lo = 0;
    int j_hi = 0;
};

// (sum_j 2^{(alpha - d/p) j / 2} min(2^{dj}, R)^{1/(2p)})^2; DivergentSeries if p >= d/alpha.
SeriesSum series_A1(double p, double alpha, int d, double R);
// sum_j 2^{alpha(1-p) j} min(2^{alpha p j} S, R); DivergentSeries if p <= 1.
SeriesSum series_A2(double p, double alpha, double S, double R);

}  // namespace fraclab
