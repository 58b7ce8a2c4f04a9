#pragma once

#include <cstdint>

#include "strata/value_function.hpp"

namespace strata {

// Sample count for an (alpha, beta)-approximation with marginals bounded by c:
// ceil(ln(2/beta) * c^2 / (2 alpha^2)).
long long mc_sample_size(double alpha, double beta, double c);

// Permutation-sampling baseline: average marginal gain of i over its
// predecessor set in m uniform permutations. Touches most of the dataset per
// query, which is what the layered estimator is measured against.
ShapleyEstimate mc_estimate(const ValueFunction& v, int n, int i, long long m,
                            std::uint64_t seed);

}  // namespace strata
