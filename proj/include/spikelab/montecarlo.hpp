#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spikelab/quadrature.hpp"
#include "spikelab/theory.hpp"

namespace spikelab {

enum class Statistic {
    eigenvalue_clt,
    alignment_clt,
    ortho_clt,
    martingale_clt,
    field_clt,
    delocalization,
    mean_expansion,
    resolvent_oracle,
    concentration,
};

const char* statistic_name(Statistic s);
Statistic statistic_from_name(const std::string& name);

/// Every pass/fail threshold used by the verdicts. Defaults match the
/// reference tolerances; all values are serialized into the run manifest.
struct Thresholds {
    double resolvent_rel_tol = 1e-7;
    double identity_rel_tol = 1e-9;
    double eigen_var_band = 0.08;
    double align_var_band = 0.12;
    double mart_var_band = 0.10;
    double ortho_var_band = 0.15;
    double field_var_band = 0.15;
    double ks_min_p = 1e-3;
    double mean_gap_slack = 0.5;
    double vn_band = 0.06;
    double tightness_max_factor = 4.0;
    double tightness_spread_max = 25.0;
    double hneg_tail_ratio_max = 0.05;
    double hneg_exponent = 0.75;
    double first_order_band = 0.02;
    double moment_bound_factor = 4.0;
};

struct ExperimentConfig {
    EnsembleSpec ensemble;
    int replicates = 100;
    uint64_t master_seed = 1;
    std::vector<Statistic> statistics;
    QuadratureGrid grid;
    int workers = 0;  // <= 0: library default
    int field_max_mode = 32;
    Thresholds thresholds;
    bool keep_samples = false;       // retain raw per-replicate columns
    std::string resolved_json;       // canonical config text, set by the parser
};

struct StatisticSummary {
    std::string name;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, double>> theory;  // keyed by theory-op name
    bool pass = true;

    double value(const std::string& key) const;
};

struct ExperimentSummary {
    // Deterministic metadata only: identical (config, master_seed) must give a
    // byte-identical serialization for any worker count.
    std::vector<std::pair<std::string, double>> meta;
    std::string master_seed_text;
    std::vector<StatisticSummary> stats;
    bool all_pass = true;

    // Raw per-replicate samples (kept only when keep_samples is set).
    std::vector<std::string> sample_names;
    std::vector<std::vector<double>> samples;  // [replicate][column]

    const StatisticSummary* find(const std::string& name) const;
};

/// Runs R independent realizations and reduces every enabled statistic.
/// Deterministic given (config, master_seed) for any worker count; a solver
/// failure is propagated with the replicate seed for reproduction.
ExperimentSummary run(const ExperimentConfig& config);

/// One-sample Kolmogorov-Smirnov statistic against N(0, sigma^2) and its
/// asymptotic p-value. Throws DegenerateSamples on zero sample variance.
std::pair<double, double> ks_gaussian(const std::vector<double>& samples, double sigma);

/// (sample_var - theory_var) / se with se = theory_var sqrt(2/(R-1)).
double variance_z(const std::vector<double>& samples, double theory_var);

}  // namespace spikelab
