#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"

#include "strata/dataset.hpp"
#include "strata/exact.hpp"
#include "strata/games.hpp"
#include "strata/models.hpp"
#include "strata/value_function.hpp"

using namespace strata;

TEST_SUITE_BEGIN("core_types");

TEST_CASE("coalition invariants") {
    Coalition c{3, 1, 2};
    CHECK(c.size() == 3);
    CHECK(c.members() == std::vector<int>{1, 2, 3});
    CHECK(c.contains(2));
    CHECK(!c.contains(0));

    CHECK_THROWS_AS(Coalition({1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Coalition({-1, 2}), std::invalid_argument);

    Coalition grown = c.with(0);
    CHECK(grown.members() == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(c.with(2), std::invalid_argument);

    CHECK(Coalition::all_but(4, 2).members() == std::vector<int>{0, 1, 3});
    CHECK(Coalition::empty().is_empty());
}

TEST_CASE("dataset invariants") {
    CHECK_THROWS_AS(Dataset({0.0}, {0}, 1), std::invalid_argument);       // n < 2
    CHECK_THROWS_AS(Dataset({0.0, 1.0}, {0, 2}, 1), std::invalid_argument);  // bad label
    CHECK_THROWS_AS(Dataset({0.0, 1.0, 2.0}, {0, 1}, 2), std::invalid_argument);

    Dataset d({0.0, 10.0, 5.0, 10.0, 10.0, -10.0}, {0, 1, 1}, 2);
    CHECK(d.n() == 3);
    CHECK(d.dim() == 2);
    CHECK(d.positive_fraction() == doctest::Approx(2.0 / 3.0));

    Dataset norm = d.min_max_normalized();
    CHECK(norm.is_normalized());
    CHECK(norm.row(0)[0] == 0.0);
    CHECK(norm.row(1)[0] == 1.0);
    // column 1 is constant after the first two rows differ; spot check range
    for (int i = 0; i < norm.n(); ++i)
        for (int j = 0; j < norm.dim(); ++j) {
            CHECK(norm.row(i)[j] >= 0.0);
            CHECK(norm.row(i)[j] <= 1.0);
        }
}

TEST_CASE("csv round trip and errors") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "strata_test_roundtrip.csv";

    Dataset d({0.25, 1.0, 0.5, 0.0, 0.75, 0.5}, {0, 1, 1}, 2);
    d.save_csv(path.string(), /*header=*/true);
    Dataset loaded = Dataset::load_csv(path.string(), /*header=*/true);
    CHECK(loaded.n() == d.n());
    CHECK(loaded.dim() == d.dim());
    for (int i = 0; i < d.n(); ++i) {
        CHECK(loaded.label(i) == d.label(i));
        for (int j = 0; j < d.dim(); ++j)
            CHECK(loaded.row(i)[j] == doctest::Approx(d.row(i)[j]).epsilon(1e-15));
    }
    fs::remove(path);

    CHECK_THROWS(Dataset::load_csv("/nonexistent/x.csv"));

    fs::path bad = fs::temp_directory_path() / "strata_test_bad.csv";
    std::ofstream(bad.string()) << "1.0,2.0,7\n";  // label outside {0,1}
    CHECK_THROWS(Dataset::load_csv(bad.string()));
    fs::remove(bad);
}

TEST_CASE("marginal gain: additive and unanimity examples") {
    ValueFunction additive = make_additive_game(5);
    CHECK(marginal_gain(additive, Coalition{1, 2}, 0, 5) == doctest::Approx(1.0));

    ValueFunction unanimity = make_unanimity_game(3);
    CHECK(marginal_gain(unanimity, Coalition{1, 2}, 0, 3) == doctest::Approx(1.0));
    CHECK(marginal_gain(unanimity, Coalition{1}, 0, 3) == doctest::Approx(0.0));
}

TEST_CASE("marginal gain errors") {
    ValueFunction additive = make_additive_game(4);
    CHECK_THROWS_AS(marginal_gain(additive, Coalition{1, 2}, 2, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(marginal_gain(additive, Coalition{1}, 4, 4), std::out_of_range);
    CHECK_THROWS_AS(marginal_gain(additive, Coalition{1}, -1, 4), std::out_of_range);
}

TEST_CASE("marginal gain on the threshold-ERM game stays within 1/k") {
    // 4-point linearly separable toy set
    Dataset d = testutil::make_1d({0.0, 0.1, 0.8, 1.0}, {0, 0, 1, 1});
    ValueFunction game = make_erm01_game(d);

    for (int i = 0; i < 4; ++i) {
        std::vector<int> others;
        for (int j = 0; j < 4; ++j)
            if (j != i) others.push_back(j);
        // all coalitions of size 2 drawn from the others
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                Coalition c{others[static_cast<std::size_t>(a)],
                            others[static_cast<std::size_t>(b)]};
                double gain = marginal_gain(game, c, i, 4);
                CHECK(gain >= -0.5);
                CHECK(gain <= 0.5);
            }
    }
}

TEST_CASE("instrumentation: evaluations = 2 * calls - cache hits") {
    ValueFunction game = make_average_score_game({0.1, 0.5, 0.9, 0.3}, true);
    int calls = 0;
    for (int i = 0; i < 4; ++i)
        for (int rep = 0; rep < 3; ++rep) {
            marginal_gain(game, Coalition::all_but(4, i), i, 4);
            ++calls;
        }
    EvalCounters counters = game.counters();
    CHECK(counters.evaluations == 2 * calls - counters.cache_hits);
    CHECK(counters.cache_hits > 0);
}

TEST_CASE("baseline filter zeroes marginals below the cutoff") {
    // v(C) = |C|; coalitions smaller than 2 fall below the filter 2.0
    ValueFunction filtered(
        [](const Coalition& c) { return static_cast<double>(c.size()); }, 4.0,
        ValueFunction::Kind::Synthetic, /*baseline_filter=*/2.0);

    bool was_filtered = false;
    CHECK(marginal_gain(filtered, Coalition{1}, 0, 4, &was_filtered) == 0.0);
    CHECK(was_filtered);
    CHECK(marginal_gain(filtered, Coalition{1, 2}, 0, 4, &was_filtered) == 1.0);
    CHECK(!was_filtered);
}

TEST_CASE("marginal-bound property holds for every shipped game (brute force)") {
    auto check_bound = [](const ValueFunction& v, int n) {
        double c_bound = v.marginal_bound_c();
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < n; ++i) {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                if (mask & (1u << i)) continue;
                std::vector<int> members;
                for (int j = 0; j < n; ++j)
                    if (mask & (1u << j)) members.push_back(j);
                if (members.empty()) continue;  // bound is stated for k >= 1
                Coalition c(members);
                double gain = marginal_gain(v, c, i, n);
                CHECK(std::abs(gain) <= c_bound / c.size() + 1e-12);
            }
        }
    };

    SUBCASE("additive") { check_bound(make_additive_game(6), 6); }
    SUBCASE("unanimity") { check_bound(make_unanimity_game(6), 6); }
    SUBCASE("glove") { check_bound(make_glove_game(), 3); }
    SUBCASE("average score") {
        check_bound(make_average_score_game({0.2, 0.9, 0.4, 0.7, 0.1, 1.0}), 6);
    }
    SUBCASE("threshold ERM") {
        auto rng = strata::seeds::rng(11);
        std::uniform_real_distribution<double> ux(0.0, 1.0);
        std::vector<double> xs;
        std::vector<int> ys;
        for (int i = 0; i < 9; ++i) {
            xs.push_back(ux(rng));
            ys.push_back(rng() % 2 == 0 ? 0 : 1);
        }
        check_bound(make_erm01_game(testutil::make_1d(xs, ys)), 9);
    }
    SUBCASE("logistic with protocol filter") {
        Dataset train = gen_synthetic_for_test();
        Dataset heldout = gen_synthetic_for_test(77);
        LogisticGameOptions options;
        options.baseline_filter = -std::log(2.0);
        check_bound(make_logistic_game(train, heldout, options), train.n());
    }
}

TEST_SUITE_END();
