#include "strata/exact.hpp"

#include <stdexcept>
#include <string>

#include "strata/combinatorics.hpp"

namespace strata {

namespace {

void check_inputs(int n, int i, int cap) {
    if (n < 2) throw std::invalid_argument("exact_value: need n >= 2");
    if (i < 0 || i >= n) throw std::out_of_range("exact_value: player index out of range");
    if (n > cap)
        throw std::domain_error(
            "exact enumeration capped at n = " + std::to_string(cap) +
            " (got " + std::to_string(n) +
            "); use mc_estimate or layered_estimate instead");
}

}  // namespace

double exact_value(const ValueFunction& v, int n, int i, int enumeration_cap) {
    check_inputs(n, i, enumeration_cap);

    std::vector<int> pool;
    pool.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 0; j < n; ++j)
        if (j != i) pool.push_back(j);

    // Eq-by-layer: phi_i = (1/n) * sum_k mean over size-k coalitions of v_i.
    double phi = 0.0;
    for (int k = 0; k <= n - 1; ++k) {
        double layer_sum = 0.0;
        long long count = 0;
        for_each_combination(pool, k, [&](const std::vector<int>& subset) {
            Coalition c(subset);
            layer_sum += marginal_gain(v, c, i, n);
            ++count;
        });
        phi += layer_sum / static_cast<double>(count);
    }
    return phi / n;
}

ShapleyEstimate exact_single(const ValueFunction& v, int n, int i,
                             int enumeration_cap) {
    EvalCounters before = v.counters();
    ShapleyEstimate est;
    est.method = Method::Exact;
    est.point = i;
    est.values = {exact_value(v, n, i, enumeration_cap)};
    for (int j = 0; j < n; ++j) est.points_touched.insert(j);
    EvalCounters after = v.counters();
    est.evaluations_used = after.evaluations - before.evaluations;
    est.cache_hits = after.cache_hits - before.cache_hits;
    est.points_read = after.points_read - before.points_read;
    return est;
}

ShapleyEstimate exact_all(const ValueFunction& v, int n, int enumeration_cap) {
    check_inputs(n, 0, enumeration_cap);

    EvalCounters before = v.counters();
    ShapleyEstimate est;
    est.method = Method::Exact;
    est.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        est.values[static_cast<std::size_t>(i)] = exact_value(v, n, i, enumeration_cap);
        est.points_touched.insert(i);
    }
    EvalCounters after = v.counters();
    est.evaluations_used = after.evaluations - before.evaluations;
    est.cache_hits = after.cache_hits - before.cache_hits;
    est.points_read = after.points_read - before.points_read;
    return est;
}

}  // namespace strata
