#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/functions.hpp"
#include "fraclab/lemmas.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/regions.hpp"

namespace fraclab {

// One output row. Absent parameters stay empty and are written as empty fields.
struct ExperimentRecord {
    std::string experiment;
    std::optional<double> alpha;
    std::optional<int> d;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<double> r;
    std::optional<double> theta;
    std::optional<double> t;
    std::optional<int> j;
    std::optional<std::uint64_t> seed;
    std::string quantity;
    double value = 0.0;
    std::optional<double> stderr_value;
    double walltime_ms = 0.0;

    bool operator==(const ExperimentRecord& o) const;
};

// ---- persistence ----

enum class Format { Csv, Json };
Format format_from_name(const std::string& name);
std::string format_name(Format f);

extern const char* const kCsvHeader;

std::string to_csv(const std::vector<ExperimentRecord>& records);
std::string to_json(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_csv(const std::string& text);
std::vector<ExperimentRecord> parse_json(const std::string& text);

// Writes the records to path; IoError names the path on failure.
void persist(const std::vector<ExperimentRecord>& records, const std::string& path, Format format);
std::vector<ExperimentRecord> load_records(const std::string& path, Format format);

// ---- operator sampling ----

struct SampledOperator {
    SampledField field;
    double max_error = 0.0;   // largest error_bound among the samples
    double max_stderr = 0.0;  // largest MC standard error among the samples
    std::vector<double> errors;  // per cell: max(error_bound, std_error)
};

// theta * supp f + (1 - theta) * supp g, which contains the support of I^theta(f, g).
Box output_support(const FunctionSpec& f, const FunctionSpec& g, double theta);

// Default cell count per axis for operator outputs: 2^14 (d = 1), 2^9 (d = 2), 2^6 (d = 3).
std::size_t default_cells(int d);

SampledOperator sample_bilinear(const FunctionSpec& f, const FunctionSpec& g, double alpha, int d, double theta,
                                const Box& box, std::size_t cells, const QuadratureConfig& cfg);

// ---- theta sweeps ----

struct SweepPlan {
    std::string id = "theta_sweep";
    FunctionSpec f = zero_function(1);
    FunctionSpec g = zero_function(1);
    ExponentPoint point = make_point(1.5, 1.0, 0.5, 1);
    std::vector<double> thetas;
    std::optional<Box> box;  // default: output_support per theta
    std::size_t cells = 0;   // 0: default_cells(d)
    QuadratureConfig cfg;
    bool timing = false;
};

// Rows per theta: weak_norm, denominator (||f||_p ||g||_q) and ratio; at
// theta = 1/2 also weak_norm_via_B, from 2^alpha B_alpha(f, g).
std::vector<ExperimentRecord> theta_sweep(const SweepPlan& plan);

// ---- sharpness ----

enum class SharpCase { I, II, III, IV, V };
SharpCase sharp_case_from_name(const std::string& name);
std::string sharp_case_name(SharpCase c);

struct SharpnessPlan {
    SharpCase which = SharpCase::I;
    double alpha = 0.5;
    int d = 1;
    double p = 1.5;  // exponent of psi_t in Cases III and IV
    std::vector<double> t_grid;
    // In the coordinates of Cases I and III; Cases II and IV evaluate at 1 - theta.
    // Empty: the limiting endpoint only (0 for Case I, 1 for Cases III and V).
    std::vector<double> theta_grid;
    std::size_t cells = 0;
    QuadratureConfig cfg;
    bool timing = false;
};

struct SharpnessReport {
    std::vector<ExperimentRecord> records;
    double theta = 0.0;  // theta of the series below
    std::vector<double> t, value, prediction, ratio;
    double predicted_exponent = 0.0;  // (1 - kappa)/2
    double fitted_exponent = 0.0;     // least squares of log value on log log(1/t)
    bool strictly_increasing = false; // as t decreases
    bool diverges = false;
    double ratio_band = 0.0;          // max ratio / min ratio
};

SharpnessReport sharpness_case(const SharpnessPlan& plan);

// "diverges": last >= 1.5 first and at most one decrease along the sequence.
bool diverges(const std::vector<double>& seq);
double fit_log_growth(const std::vector<double>& t, const std::vector<double>& value);

// ---- pointwise lower bound for the Riesz potential of h ----

struct LowerBoundReport {
    std::vector<ExperimentRecord> records;
    std::vector<double> x, value, ratio;  // ratio = value / (log 1/|x|)^{1 - kappa}
    double fitted_c = 0.0;                // min ratio
};

LowerBoundReport h_lower_bound(double alpha, int d, const std::vector<int>& k_values, const QuadratureConfig& cfg);

// ---- lemma suites ----

std::vector<ExperimentRecord> lemma_records(const LemmaReport& report, const std::vector<LemmaInstance>& instances);

// ---- divergence identity ----

// exp(-16 x^2) on N cells of [-1, 1].
GridFunction gaussian_density(std::size_t cells);

struct DivergenceExperiment {
    std::vector<ExperimentRecord> records;
    std::vector<std::size_t> cells;
    std::vector<double> residual;  // relative L2 per cell count
    std::vector<double> halving;   // residual[k+1] / residual[k]
};

DivergenceExperiment divergence_experiment(double alpha, const std::vector<std::size_t>& cells,
                                           const QuadratureConfig& cfg);

}  // namespace fraclab
