#include "strata/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "strata/seeds.hpp"

namespace strata {

long long mc_sample_size(double alpha, double beta, double c) {
    if (!(alpha > 0.0)) throw std::domain_error("mc_sample_size: alpha must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("mc_sample_size: beta must be in (0,1)");
    if (!(c > 0.0)) throw std::domain_error("mc_sample_size: c must be > 0");
    return static_cast<long long>(
        std::ceil(std::log(2.0 / beta) * c * c / (2.0 * alpha * alpha)));
}

ShapleyEstimate mc_estimate(const ValueFunction& v, int n, int i, long long m,
                            std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("mc_estimate: need n >= 2");
    if (i < 0 || i >= n) throw std::out_of_range("mc_estimate: player index out of range");
    if (m < 1) throw std::invalid_argument("mc_estimate: need m >= 1");

    EvalCounters before = v.counters();
    auto rng = seeds::rng(seed);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    ShapleyEstimate est;
    est.method = Method::MonteCarlo;
    est.point = i;
    est.points_touched.insert(i);

    double sum = 0.0;
    std::vector<int> predecessors;
    predecessors.reserve(static_cast<std::size_t>(n));
    for (long long s = 0; s < m; ++s) {
        // Fisher-Yates
        for (int j = n - 1; j > 0; --j) {
            std::uniform_int_distribution<int> pick(0, j);
            std::swap(perm[static_cast<std::size_t>(j)],
                      perm[static_cast<std::size_t>(pick(rng))]);
        }
        predecessors.clear();
        for (int p : perm) {
            if (p == i) break;
            predecessors.push_back(p);
        }
        for (int p : predecessors) est.points_touched.insert(p);
        sum += marginal_gain(v, Coalition(predecessors), i, n);
        ++est.sampled_coalitions;
    }

    est.values = {sum / static_cast<double>(m)};
    EvalCounters after = v.counters();
    est.evaluations_used = after.evaluations - before.evaluations;
    est.cache_hits = after.cache_hits - before.cache_hits;
    est.points_read = after.points_read - before.points_read;
    return est;
}

}  // namespace strata
