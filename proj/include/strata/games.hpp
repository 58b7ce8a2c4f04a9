#pragma once

#include <vector>

#include "strata/value_function.hpp"

namespace strata {

// Synthetic cooperative games used for estimator verification and cheap
// large-n instrumentation runs. Each declares an honest marginal-bound c.

// v(C) = |C|. Every marginal gain is exactly 1, so c = n.
ValueFunction make_additive_game(int n, bool enable_cache = false);

// v(C) = 1 iff C = N. The only nonzero marginal completes the grand coalition.
ValueFunction make_unanimity_game(int n);

// 3-player glove game: player 0 holds a left glove, players 1 and 2 right
// gloves; v = 1 iff the coalition holds both kinds. phi = (2/3, 1/6, 1/6).
ValueFunction make_glove_game();

// v(C) = mean of per-point scores in C (v(empty) = 0), scores in [0,1].
// |v_i(C)| <= 1/(|C|+1), so the diminishing-returns bound holds with c = 1.
ValueFunction make_average_score_game(std::vector<double> scores,
                                      bool enable_cache = false);

// Arbitrary game from a table over bitmask coalitions (n <= 20); test plumbing
// for the axiom checks.
ValueFunction make_table_game(int n, std::vector<double> table, double bound_c);

}  // namespace strata
