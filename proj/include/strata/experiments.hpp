#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strata/dataset.hpp"
#include "strata/dp.hpp"
#include "strata/value_function.hpp"

namespace strata {

// Synthetic binary-classification data: features drawn from N(0, I_d),
// labels from a random linear rule with `noise_rate` flips, then min-max
// normalized to [0,1] per feature.
Dataset gen_synthetic(int n, int d, std::uint64_t seed, double noise_rate = 0.1);

enum class RemovalOrder { HighestFirst, LowestFirst, Random };

std::string to_string(RemovalOrder order);

// Held-out accuracy as points are removed in value order and the logistic
// model is retrained on the remainder.
struct RemovalCurve {
    RemovalOrder order = RemovalOrder::Random;
    std::vector<double> fractions_removed;  // strictly increasing from 0
    std::vector<double> accuracies;
    std::string method;

    double accuracy_at(double fraction) const;  // exact fraction lookup
};

struct RemovalCurveOptions {
    double lambda = 1.0;
    double step = 0.05;
    double max_fraction = 0.5;
    std::uint64_t shuffle_seed = 0;  // used by RemovalOrder::Random
    std::string method = "layered";
};

// Ties in `values` break by ascending index; each step retrains on the
// remaining points. Throws when a step would empty the training set.
RemovalCurve removal_curve(const std::vector<double>& values, const Dataset& train,
                           const Dataset& heldout, RemovalOrder order,
                           const RemovalCurveOptions& options = {});

// Mean of 5 random-order curves, the dotted-baseline convention.
RemovalCurve random_baseline_curve(const Dataset& train, const Dataset& heldout,
                                   const RemovalCurveOptions& options,
                                   std::uint64_t seed, int repeats = 5);

// Spearman rank correlation with average ranks for ties. Throws on length
// mismatch and on constant input (undefined correlation).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// ---- Batch drivers behind the CLI ----

struct ExperimentConfig {
    int n = 100;
    int d = 50;
    int heldout_n = 100;
    double alpha = 0.05;
    double beta = 0.05;
    double epsilon = 1.0;
    double lambda = 1.0;
    // Stability kappa used for the privacy calibration of the synthetic
    // experiments. The documented model bound is sqrt(d+1); the protocol
    // default 1.0 is what makes epsilon = 1 releases carry usable signal.
    double kappa = 1.0;
    double noise_rate = 0.1;
    double baseline_filter = -0.6931471805599453;  // -ln 2, random-guessing value
    bool use_baseline_filter = true;
    int runs = 5;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Marginal-bound constant for the configured logistic game: L^2 kappa^2 / (2 lambda).
double logistic_bound_c(const ExperimentConfig& cfg);

ValueFunction make_config_game(const ExperimentConfig& cfg, const Dataset& train,
                               const Dataset& heldout);

// Layered values for every point; per-point seeds derive from `run_seed`.
ShapleyEstimate layered_all(const ValueFunction& v, int n, double alpha,
                            double beta, double c, std::uint64_t run_seed,
                            int threads = 1);

struct RankCorrelationRun {
    std::vector<double> values;
    std::vector<double> private_values;
    double rho = 0.0;
    double sigma = 0.0;
    double p = 1.0;
    double sens = 0.0;
};

struct RankCorrelationResult {
    std::vector<RankCorrelationRun> runs;
    double mean_rho = 0.0;
};

// Private vs non-private layered values on fresh synthetic data per run.
RankCorrelationResult rank_correlation_experiment(const ExperimentConfig& cfg);

struct RemovalExperimentRun {
    RemovalCurve highest;
    RemovalCurve lowest;
    RemovalCurve random_baseline;
};

struct RemovalExperimentResult {
    std::vector<RemovalExperimentRun> runs;
    int highest_below_baseline = 0;  // runs where highest-first < baseline at 10/20/30%
    int lowest_above_baseline = 0;   // runs where lowest-first > baseline at 10/20%
};

RemovalExperimentResult removal_experiment(const ExperimentConfig& cfg);

struct TouchStats {
    int n = 0;
    double bound = 1.0;
    double mean_touched_fraction = 0.0;
    double mean_sampled_coalitions = 0.0;
    double mean_points_read_per_eval = 0.0;
};

// Data-access statistics of layered queries against a free synthetic game.
TouchStats touch_stats(int n, double alpha, double beta, double c,
                       std::uint64_t seed, int repeats = 3);

// CSV rows: fraction,accuracy,method,order,seed
void write_curves_csv(const std::string& path,
                      const std::vector<RemovalExperimentRun>& runs,
                      std::uint64_t base_seed);

}  // namespace strata
