#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// Shapley by permutation enumeration, threshold ERM by direct hypothesis
// evaluation.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "strata/dataset.hpp"
#include "strata/value_function.hpp"

namespace testutil {

inline strata::Dataset make_1d(std::vector<double> xs, std::vector<int> ys) {
    return strata::Dataset(std::move(xs), std::move(ys), 1);
}

// Shapley value as the average marginal contribution over all n! orderings.
inline double perm_shapley(const strata::ValueFunction& v, int n, int i) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    long long count = 0;
    do {
        std::vector<int> before;
        for (int p : perm) {
            if (p == i) break;
            before.push_back(p);
        }
        strata::Coalition c(before);
        sum += v.evaluate(c.with(i)) - v.evaluate(c);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum / static_cast<double>(count);
}

// 0-1 loss of the best threshold classifier, by evaluating every candidate
// hypothesis point by point. Candidates: thresholds below, between, and above
// the distinct sorted values, in both orientations.
inline double naive_threshold_loss(const std::vector<double>& xs,
                                   const std::vector<int>& ys) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<double> thresholds;
    thresholds.push_back(sorted.front() - 1.0);
    for (std::size_t j = 0; j + 1 < sorted.size(); ++j)
        thresholds.push_back((sorted[j] + sorted[j + 1]) / 2.0);
    thresholds.push_back(sorted.back() + 1.0);

    const int m = static_cast<int>(xs.size());
    int best = m;
    for (double t : thresholds) {
        int err_right = 0;  // predict 1 iff x >= t
        int err_left = 0;   // predict 1 iff x < t
        for (int j = 0; j < m; ++j) {
            int pred_right = xs[static_cast<std::size_t>(j)] >= t ? 1 : 0;
            err_right += pred_right != ys[static_cast<std::size_t>(j)];
            err_left += (1 - pred_right) != ys[static_cast<std::size_t>(j)];
        }
        best = std::min({best, err_right, err_left});
    }
    return static_cast<double>(best) / m;
}

inline std::vector<double> random_table(std::mt19937_64& rng, int n, double lo,
                                        double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> table(1ull << n);
    for (double& x : table) x = u(rng);
    return table;
}

}  // namespace testutil
