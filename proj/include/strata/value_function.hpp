#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "strata/coalition.hpp"

namespace strata {

enum class Method { Exact, MonteCarlo, Layered, LayeredPrivate };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Constants of a gamma-uniformly-stable trainer: gamma(k) = L^2 kappa^2 / (2 lambda k).
struct StabilityCertificate {
    double lipschitz_L = 1.0;
    double kappa = 1.0;
    double lambda = 1.0;

    double gamma(int k) const;
    // Marginal-bound constant c such that |v_i(C)| <= c / |C|.
    double marginal_bound_c() const { return lipschitz_L * lipschitz_L * kappa * kappa / (2.0 * lambda); }
    bool matches(double L, double k, double l, double rel_tol = 1e-9) const;
};

// Per-point value estimate plus estimator bookkeeping.
struct ShapleyEstimate {
    std::vector<double> values;      // length n for all-point queries, else 1
    int point = -1;                  // queried index, -1 when values covers all points
    Method method = Method::Exact;

    long long evaluations_used = 0;  // raw value-function evaluations (cache misses)
    long long cache_hits = 0;
    long long points_read = 0;       // sum of |C| over raw evaluations
    long long sampled_coalitions = 0;
    long long filtered_coalitions = 0;
    std::set<int> points_touched;    // indices appearing in any evaluated coalition

    double value() const {
        if (values.size() != 1)
            throw std::logic_error("ShapleyEstimate::value: not a single-point estimate");
        return values[0];
    }
    double touched_fraction(int n) const {
        return static_cast<double>(points_touched.size()) / n;
    }
};

// Raw evaluation counters; estimators snapshot before/after to attribute work.
struct EvalCounters {
    long long evaluations = 0;
    long long cache_hits = 0;
    long long points_read = 0;
};

// A coalition value v(C) with the artifact's bookkeeping: memoization keyed on
// the member set, evaluation counters, and the optional baseline filter used by
// the experimental protocol (coalitions valued below the random-guessing
// baseline contribute marginal gain 0).
class ValueFunction {
public:
    enum class Kind { NegativeTrainingLoss, NegativeHeldoutLoss, Synthetic };

    using Evaluator = std::function<double(const Coalition&)>;

    ValueFunction(Evaluator evaluate, double marginal_bound_c, Kind kind,
                  std::optional<double> baseline_filter = std::nullopt,
                  std::optional<StabilityCertificate> certificate = std::nullopt,
                  bool enable_cache = true);

    double evaluate(const Coalition& c) const;

    double marginal_bound_c() const { return marginal_bound_c_; }
    Kind kind() const { return kind_; }
    const std::optional<double>& baseline_filter() const { return baseline_filter_; }
    const std::optional<StabilityCertificate>& certificate() const { return certificate_; }

    EvalCounters counters() const;
    void reset_counters();

private:
    Evaluator evaluate_;
    double marginal_bound_c_;
    Kind kind_;
    std::optional<double> baseline_filter_;
    std::optional<StabilityCertificate> certificate_;
    bool enable_cache_;

    mutable std::mutex mu_;
    mutable std::unordered_map<Coalition, double, CoalitionHash> cache_;
    mutable EvalCounters counters_;
};

// v(C u {i}) - v(C). Throws std::invalid_argument when i is already in C and
// std::out_of_range when i is outside [0, n). With a baseline filter set,
// a filtered C yields 0 without evaluating the grown coalition; `filtered`
// (when non-null) reports whether that happened.
double marginal_gain(const ValueFunction& v, const Coalition& c, int i, int n,
                     bool* filtered = nullptr);

}  // namespace strata
