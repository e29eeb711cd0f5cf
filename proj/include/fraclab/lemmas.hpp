#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclab/functions.hpp"

namespace fraclab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// c * chi_[lo, hi]
struct WeightedInterval {
    double coefficient = 1.0;
    double lo = 0.0;
    double hi = 0.0;
};

// One-dimensional indicator data (balls, boxes, simple functions with
// nonnegative coefficients) as weighted intervals; ValidationError otherwise.
std::vector<WeightedInterval> intervals_of(const FunctionSpec& f);

// x -> int_{|y| <= 2^j} f(x + (theta-1) y) g(x + theta y) dy for d = 1
// indicator data. The profile is piecewise linear (with jumps when theta
// is 0 or 1), so its norms are integrated exactly segment by segment.
class DyadicProfile {
public:
    DyadicProfile(const FunctionSpec& f, const FunctionSpec& g, double theta, int j);

    double operator()(double x) const;
    const std::vector<double>& knots() const { return knots_; }

    // (int |I|^q)^{1/q}, q > 0
    double lebesgue(double q) const;
    // (int_E |I|^q)^{1/q} over a union of disjoint intervals
    double lebesgue_on(double q, const std::vector<Interval>& E) const;
    double integral_on(const std::vector<Interval>& E) const;

private:
    double pair_length(const WeightedInterval& a, const WeightedInterval& b, double x) const;
    double integrate_power(double q, const std::vector<double>& cuts) const;

    std::vector<WeightedInterval> f_, g_;
    double theta_ = 0.5;
    double radius_ = 1.0;
    std::vector<double> knots_;
};

enum class Inequality { Aux0, Aux1, Aux20, Aux21, L0, L00, L000, L0000, Aux1Lor, Aux2Lor };

std::string inequality_name(Inequality k);
Inequality inequality_from_name(const std::string& name);
// Group names: dyadic_basic, dyadic_mixed, dyadic_localized, dyadic_lorentz, all;
// or a single inequality name.
std::vector<Inequality> inequalities_for(const std::string& name);
// Inequalities whose constant is claimed independent of theta.
bool theta_uniform(Inequality k);

struct LemmaInstance {
    FunctionSpec f = zero_function(1);
    FunctionSpec g = zero_function(1);
    double theta = 0.5;
    int j = 0;
    std::vector<Interval> E;
    double p = 1.5;
    double alpha = 0.5;
};

struct InstanceResult {
    std::size_t instance = 0;
    double lhs = 0.0;
    double rhs_base = 0.0;  // right-hand side without its constant
    double ratio = 0.0;     // lhs / rhs_base (0 when lhs = 0)
};

struct InequalityReport {
    Inequality which = Inequality::Aux0;
    std::vector<InstanceResult> rows;
    double best_constant = 0.0;
    std::map<double, double> constant_by_theta;
    bool pass = false;  // a single finite constant covers every instance
};

struct LemmaReport {
    std::string name;
    std::vector<InequalityReport> items;
    bool pass = false;
};

double lhs_value(Inequality k, const LemmaInstance& in);
double rhs_base_value(Inequality k, const LemmaInstance& in);

LemmaReport lemma_suite(const std::string& name, const std::vector<LemmaInstance>& instances);

// Indicator pairs x j in {-3,-1,0,1,3} x theta in {0, 1/4, 1/2, 3/4, 1} x three sets E, p = 3/2, alpha = 1/2.
std::vector<LemmaInstance> default_suite();
std::vector<LemmaInstance> suite_by_name(const std::string& name);

}  // namespace fraclab
