#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strata/value_function.hpp"

namespace strata {

// Per-layer sampling budget. Layer k holds the C(n-1, k) coalitions of size k
// drawn from the other points; m_k = c^2/(2 alpha^2 k^2) * ln(2n/beta).
struct Layer {
    int k = 0;
    double m_k = 0.0;     // expected number of sampled coalitions
    double log_w_k = 0.0; // ln C(n-1, k)
    double p_k = 0.0;     // min(1, m_k / w_k)
    bool exhaustive = false;  // m_k >= w_k: enumerate the layer instead
};

struct LayerPlan {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double c = 0.0;
    double log_term = 0.0;  // ln(2n / beta_effective)
    std::vector<Layer> layers;  // k = 1 .. n-1

    // Sum of m_k; stays below sample_bound() = c^2/(2 alpha^2) ln(2n/beta) pi^2/6.
    double expected_samples() const;
    // Expected coalition draws, counting exhaustive layers at their true size.
    double expected_draws() const;
    double sample_bound() const;
    const Layer& layer(int k) const { return layers.at(static_cast<std::size_t>(k - 1)); }
};

// beta_divisor > 1 tightens the per-layer failure budget to beta/divisor;
// group valuation uses divisor = group size (ln(2nw/beta) in m_k).
LayerPlan build_plan(int n, double alpha, double beta, double c,
                     double beta_divisor = 1.0);

// One layer's coalition sample, never containing i. Exhaustive layers return
// every size-k coalition (lexicographic); Poisson layers draw
// K ~ Poisson(m_k) coalitions uniformly i.i.d.
std::vector<Coalition> sample_layer(const LayerPlan& plan, int k, int i,
                                    std::uint64_t seed);

// Saved sample trace: the S_k core set, reusable for later queries on the
// same dataset without touching the rest of the data.
struct CoreSet {
    int n = 0;
    int point = -1;
    double alpha = 0.0, beta = 0.0, c = 0.0;
    std::uint64_t seed = 0;
    struct LayerSample {
        int k = 0;
        double m_k = 0.0;
        bool exhaustive = false;
        std::vector<Coalition> coalitions;
    };
    std::vector<LayerSample> layers;

    void save_json(const std::string& path) const;
    static CoreSet load_json(const std::string& path);
};

// The Layered Shapley estimate: per-layer means combined as (1/n) sum_k.
// Layer seeds derive from `seed`, one child per k. When `trace` is non-null
// the sampled coalitions are recorded for core-set reuse.
ShapleyEstimate layered_estimate(const ValueFunction& v, int n, int i,
                                 double alpha, double beta, double c,
                                 std::uint64_t seed, CoreSet* trace = nullptr);

// Same, against a prebuilt plan (all-point sweeps build the plan once).
ShapleyEstimate layered_estimate_with_plan(const ValueFunction& v,
                                           const LayerPlan& plan, int i,
                                           std::uint64_t seed,
                                           CoreSet* trace = nullptr);

// Re-answer a query from a saved core set. For the recorded point this
// replays the original estimate exactly; for another point the stored
// coalitions containing it are dropped and Poisson layers are rescaled by
// the keep probability, an approximate reuse of the sample.
ShapleyEstimate estimate_from_coreset(const ValueFunction& v, const CoreSet& cs,
                                      int i);

// Upper bound on the probability that a given other point is read while
// answering one query: c^2 ln(n) / (2 alpha^2 n) * ln(2n/beta), clamped to 1.
double data_touch_bound(int n, double alpha, double beta, double c);

// Total value of a set of points, each member estimated with failure budget
// beta/|group| so the sum misses by more than |group| * alpha with
// probability at most beta.
double group_estimate(const ValueFunction& v, int n, const std::vector<int>& group,
                      double alpha, double beta, double c, std::uint64_t seed);

}  // namespace strata
