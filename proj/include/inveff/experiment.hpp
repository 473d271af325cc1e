#pragma once

// Seeded Monte Carlo harness: runs R replications of (generate -> estimate)
// for each sample size in a grid, summarizes the scaled deviations
// sqrt(n) (estimate - truth) for both the uncorrected and the one-step
// estimator, and compares the empirical variances against the closed-form
// bounds. Replications carry private derived seeds and results are reduced in
// replication order, so output is identical for every worker count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inveff/error_model.hpp"
#include "inveff/estimator.hpp"
#include "inveff/operator_model.hpp"
#include "inveff/simulate.hpp"

namespace inveff {

struct TruthSpec {
    enum class Kind { Coefficients, PowerDecay };
    Kind kind = Kind::Coefficients;
    std::vector<double> coefficients{0.0}; // Kind::Coefficients
    double s = 3.0;                        // Kind::PowerDecay
    double amplitude = 1.0;
    int k_max = 16;
};

struct TargetSpec {
    enum class Kind { Coefficient, Functional };
    Kind kind = Kind::Coefficient;
    int k = 0;          // Kind::Coefficient
    FunctionalSpec phi; // Kind::Functional
};

struct TruncationRule {
    enum class Kind { Rate, Fixed };
    Kind kind = Kind::Rate;
    double r = 0.3; // Kind::Rate: m = ceil(n^r)
    int m = 0;      // Kind::Fixed
};

struct ExperimentConfig {
    std::string operator_name = "identity";
    std::string error_name = "logistic";
    double sigma = 1.0; // gaussian only
    TruthSpec truth;
    TargetSpec target;
    std::vector<std::size_t> n_grid;
    std::size_t replications = 0;
    TruncationRule truncation;
    int k_max = 64;
    std::uint64_t master_seed = 0;
    bool keep_replicates = false;
    // Runtime-only knob; never serialized and never allowed to change results.
    int workers = 1;
};

struct NormalityDiagnostic {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double skewness_se = 0.0; // sqrt(6/R)
    double kurtosis_se = 0.0; // sqrt(24/R)
    std::size_t count = 0;
    bool degenerate = false;
};

// Standardized third and fourth moments of the replicate estimates. Requires
// at least 100 replicates; a (numerically) constant vector is reported as
// degenerate instead of dividing by zero.
NormalityDiagnostic normality_diagnostic(std::span<const double> replicates);

struct EstimatorSummary {
    std::size_t n = 0;
    std::string estimator; // "naive" | "one_step"
    double mean_estimate = 0.0;
    double bias = 0.0;            // mean_estimate - truth
    double variance_scaled = 0.0; // Var(sqrt(n) (estimate - truth))
    double jackknife_se = 0.0;    // of variance_scaled
    double ratio_to_optimal = 0.0;
    double ratio_to_plugin = 0.0;
    NormalityDiagnostic normality;
    std::size_t replications = 0;
};

struct VarianceGap {
    std::size_t n = 0;
    double naive_minus_one_step = 0.0;
    double jackknife_se = 0.0; // paired delete-one jackknife
};

struct ReplicateBlock {
    std::size_t n = 0;
    std::vector<double> naive;
    std::vector<double> one_step;
};

struct ExperimentResult {
    ExperimentConfig config;
    double truth_value = 0.0;
    double optimal_variance = 0.0;
    double plugin_variance = 0.0;
    std::vector<EstimatorSummary> summaries; // naive and one_step per n
    std::vector<VarianceGap> gaps;           // per n
    std::vector<ReplicateBlock> replicates;  // filled when config.keep_replicates
    std::uint64_t master_seed = 0;
    // Wall-clock diagnostic only; excluded from the serialized payload so
    // identical configs produce identical files.
    double wall_seconds = 0.0;
};

InputFunction build_truth(const TruthSpec& truth);

// Validates the configuration (including the representer summability gate for
// functional targets), then runs the full grid. Deterministic in
// config.master_seed for every worker count.
ExperimentResult run_monte_carlo(const ExperimentConfig& cfg);

struct BoundRow {
    std::size_t n = 0;
    double naive_variance = 0.0;
    double one_step_variance = 0.0;
    double plugin_variance = 0.0;     // asymptotic variance of the plug-in estimator
    double noise_only_variance = 0.0; // sigma^2 ||gamma||^2: plug-in variance with degenerate signal
    double optimal_variance = 0.0;    // information bound
    bool theory_ordering_ok = false;
    bool naive_within_bars = false;
    bool one_step_within_bars = false;
    bool empirical_ordering_ok = false;
};

struct BoundReport {
    std::vector<BoundRow> rows;
    bool all_ok = false;
};

// Tabulates, per sample size, the empirical variances next to the three
// theoretical levels and flags the orderings within 4 jackknife standard
// errors.
BoundReport compare_to_bound(const ExperimentResult& res, const SpectralOperator& op,
                             const ErrorModel& em, const InputFunction& f);

} // namespace inveff
