#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "strata/coalition.hpp"
#include "strata/dataset.hpp"
#include "strata/value_function.hpp"

namespace strata {

// L2-regularized logistic regression trained to a fixed gradient tolerance.
// Weight layout: [w_0 .. w_{d-1}, bias]; the bias is part of the regularized
// vector, matching the kernel bound kappa^2 = d + 1 for inputs in [0,1]^d.
struct LogRegModel {
    std::vector<double> weights;  // d+1 entries, bias last; empty for prior models
    double lambda = 1.0;
    double lipschitz_L = 1.0;
    double kernel_bound_kappa = 1.0;

    // Single-class fallback: emit the class prior as a constant probability.
    bool prior_only = false;
    double prior_p = 0.5;

    int iterations = 0;
    double grad_norm = 0.0;

    double predict_p(std::span<const double> x) const;
    int predict_label(std::span<const double> x) const { return predict_p(x) >= 0.5 ? 1 : 0; }

    StabilityCertificate certificate() const {
        return StabilityCertificate{lipschitz_L, kernel_bound_kappa, lambda};
    }
};

// Thrown when the solver hits the iteration cap before reaching tolerance.
struct TrainingDiagnosticsError : std::runtime_error {
    TrainingDiagnosticsError(double g, int iters)
        : std::runtime_error("logistic training did not converge: |grad| = " +
                             std::to_string(g) + " after " + std::to_string(iters) +
                             " iterations"),
          grad_norm(g),
          iterations(iters) {}
    double grad_norm;
    int iterations;
};

inline constexpr double kLogRegGradTol = 1e-6;
inline constexpr int kLogRegMaxIters = 10000;

// Full-batch damped Newton on the coalition's rows. Deterministic for a given
// (coalition, lambda); `seed` is reserved for stochastic trainers and unused
// by this solver. Single-class coalitions fall back to the prior predictor.
LogRegModel train_logreg(const Dataset& data, const Coalition& coalition,
                         double lambda, std::uint64_t seed = 0);

// Average logistic loss of the model on the given rows (all of `data` when
// `subset` is absent). Prior-model probabilities are clipped to
// [1e-15, 1 - 1e-15] before taking logs.
double average_log_loss(const LogRegModel& model, const Dataset& data,
                        const Coalition* subset = nullptr);

// Negative average logistic loss on a held-out set.
double heldout_value(const LogRegModel& model, const Dataset& heldout);
double heldout_accuracy(const LogRegModel& model, const Dataset& heldout);

// Optimal 0-1 loss over 1-D threshold classifiers (both orientations,
// m+1 split positions) for the labeled sample (xs, ys).
double erm01_optimal_loss(std::span<const double> xs, std::span<const int> ys);
// Same, over a coalition of a 1-D dataset. Throws on dim != 1.
double erm01_optimal_loss(const Dataset& data, const Coalition& coalition);

struct LogisticGameOptions {
    double lambda = 1.0;
    ValueFunction::Kind kind = ValueFunction::Kind::NegativeHeldoutLoss;
    // Coalition values below this threshold contribute marginal gain 0
    // (the experimental protocol's random-guessing cutoff). Disabled when unset.
    std::optional<double> baseline_filter;
    // Declared stability constants; defaults to (L=1, kappa=sqrt(d+1), lambda).
    std::optional<StabilityCertificate> certificate;
    std::uint64_t train_seed = 0;
    bool enable_cache = true;
};

// v(C) = -(heldout or training loss) of the logistic model trained on C.
// v(empty) anchors at the baseline predictor: the held-out class prior for
// held-out games, the uninformative p = 0.5 (loss ln 2) for training games.
ValueFunction make_logistic_game(const Dataset& train, const Dataset& heldout,
                                 const LogisticGameOptions& options = {});

// v(C) = -erm01_optimal_loss(C) on a 1-D dataset; v(empty) = -0.5.
// Observation-3.1 bound gives c = 1.
ValueFunction make_erm01_game(const Dataset& train);

}  // namespace strata
