#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fraclab/functions.hpp"

namespace fraclab {

// Values on the uniform cells of a box, last axis fastest.
struct SampledField {
    Box box;
    std::array<std::size_t, kMaxDim> cells{1, 1, 1};
    std::vector<double> values;
    std::vector<double> measures;

    int dim() const { return box.dim(); }
    std::size_t size() const { return values.size(); }
    Point center(std::size_t flat) const;
};

// Throws ValidationError unless measures are positive, sum to the box volume
// and values are finite and nonnegative.
void validate(const SampledField& field);

// Evaluates fn at every cell center (in parallel, order independent).
SampledField sample_field(const std::function<double(const Point&)>& fn, const Box& box,
                          const std::array<std::size_t, kMaxDim>& cells);
SampledField sample_function(const FunctionSpec& f, const Box& box, const std::array<std::size_t, kMaxDim>& cells);

// Uniform cell counts: n along every axis of a d-dimensional box.
std::array<std::size_t, kMaxDim> uniform_cells(int d, std::size_t n);

struct NormKind {
    enum class Kind { Lebesgue, WeakLebesgue, LorentzP1 };
    Kind kind = Kind::Lebesgue;
    double exponent = 1.0;
};
std::string norm_name(NormKind::Kind k);
NormKind::Kind norm_kind_from_name(const std::string& name);

// |{value > lambda}|
double distribution_function(const SampledField& field, double lambda);
double distribution_function(const FunctionSpec& f, double lambda);

double lebesgue_norm(const SampledField& field, double p);
double lebesgue_norm(const FunctionSpec& f, double p);

// sup over lambda of lambda |{value > lambda}|^{1/r}
double weak_norm(const SampledField& field, double r);
double weak_norm(const FunctionSpec& f, double r);
// sup_t t^{1/r} f*(t)
double weak_norm(const Rearrangement& rearr, double r);

// int_0^inf t^{1/p - 1} f*(t) dt
double lorentz_p1_norm(const SampledField& field, double p);
double lorentz_p1_norm(const FunctionSpec& f, double p);
double lorentz_p1_norm(const Rearrangement& rearr, double p);

double norm(const SampledField& field, const NormKind& kind);
double norm(const FunctionSpec& f, const NormKind& kind);

struct SetBound {
    double estimator = 0.0;  // max over the family of |E|^{1/r - 1/s} ||f chi_E||_s
    double weak = 0.0;       // weak_norm(field, r)
    std::size_t sets = 0;
};

// Family of superlevel sets {value >= level} for each given level.
SetBound weak_norm_set_lower_bound(const SampledField& field, double r, double s, const std::vector<double>& levels);
// Every distinct positive value of the field.
std::vector<double> superlevel_family(const SampledField& field);

// Columns: one center coordinate per axis, cell_measure, value.
void write_field_csv(const SampledField& field, const std::string& path);

}  // namespace fraclab
