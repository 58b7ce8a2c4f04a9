#include "strata/games.hpp"

#include <stdexcept>
#include <utility>

namespace strata {

ValueFunction make_additive_game(int n, bool enable_cache) {
    return ValueFunction(
        [](const Coalition& c) { return static_cast<double>(c.size()); },
        /*marginal_bound_c=*/static_cast<double>(n), ValueFunction::Kind::Synthetic,
        std::nullopt, std::nullopt, enable_cache);
}

ValueFunction make_unanimity_game(int n) {
    return ValueFunction(
        [n](const Coalition& c) { return c.size() == n ? 1.0 : 0.0; },
        static_cast<double>(n), ValueFunction::Kind::Synthetic);
}

ValueFunction make_glove_game() {
    return ValueFunction(
        [](const Coalition& c) {
            bool left = c.contains(0);
            bool right = c.contains(1) || c.contains(2);
            return left && right ? 1.0 : 0.0;
        },
        /*marginal_bound_c=*/3.0, ValueFunction::Kind::Synthetic);
}

ValueFunction make_average_score_game(std::vector<double> scores, bool enable_cache) {
    for (double s : scores)
        if (s < 0.0 || s > 1.0)
            throw std::invalid_argument("average_score_game: scores must be in [0,1]");
    return ValueFunction(
        [scores = std::move(scores)](const Coalition& c) {
            if (c.is_empty()) return 0.0;
            double sum = 0.0;
            for (int i : c) sum += scores[static_cast<std::size_t>(i)];
            return sum / c.size();
        },
        /*marginal_bound_c=*/1.0, ValueFunction::Kind::Synthetic, std::nullopt,
        std::nullopt, enable_cache);
}

ValueFunction make_table_game(int n, std::vector<double> table, double bound_c) {
    if (n > 20) throw std::invalid_argument("table_game: n too large");
    if (table.size() != (1ull << n))
        throw std::invalid_argument("table_game: table must have 2^n entries");
    return ValueFunction(
        [table = std::move(table)](const Coalition& c) {
            unsigned mask = 0;
            for (int i : c) mask |= 1u << i;
            return table[mask];
        },
        bound_c, ValueFunction::Kind::Synthetic);
}

}  // namespace strata
