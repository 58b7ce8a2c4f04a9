#pragma once

#include "strata/value_function.hpp"

namespace strata {

inline constexpr int kDefaultEnumerationCap = 15;

// Brute-force Shapley value by full enumeration, summed layer by layer
// (coalition sizes 0..n-1, lexicographic within a layer) so results are
// reproducible to the last bit. Ground truth for every approximation test.
//
// Throws std::domain_error above the enumeration cap; callers should switch
// to mc_estimate or layered_estimate there.
double exact_value(const ValueFunction& v, int n, int i,
                   int enumeration_cap = kDefaultEnumerationCap);

// All players at once, sharing the coalition cache across i.
ShapleyEstimate exact_all(const ValueFunction& v, int n,
                          int enumeration_cap = kDefaultEnumerationCap);

// Single player, with instrumentation attached.
ShapleyEstimate exact_single(const ValueFunction& v, int n, int i,
                             int enumeration_cap = kDefaultEnumerationCap);

}  // namespace strata
