#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace strata {

// ln C(n, k) via lgamma; valid for large n where the count itself overflows.
inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(n, k) capped at `cap`; returns cap when the true count meets or exceeds it.
inline double binomial_capped(int n, int k, double cap) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result *= static_cast<double>(n - k + i) / i;
        if (result >= cap) return cap;
    }
    return result;
}

// Visits every k-subset of `pool` in lexicographic order.
template <typename Fn>
void for_each_combination(const std::vector<int>& pool, int k, Fn&& visit) {
    const int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = j;
    std::vector<int> subset(static_cast<std::size_t>(k));
    while (true) {
        for (int j = 0; j < k; ++j)
            subset[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        visit(subset);
        // advance to the next combination
        int j = k - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == n - k + j) --j;
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
        for (int t = j + 1; t < k; ++t)
            idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    }
}

}  // namespace strata
