#include "strata/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>

#include "strata/games.hpp"
#include "strata/layered.hpp"
#include "strata/models.hpp"
#include "strata/seeds.hpp"

namespace strata {

Dataset gen_synthetic(int n, int d, std::uint64_t seed, double noise_rate) {
    if (n < 2) throw std::invalid_argument("gen_synthetic: need n >= 2");
    if (d < 1) throw std::invalid_argument("gen_synthetic: need d >= 1");
    if (noise_rate < 0.0 || noise_rate >= 0.5)
        throw std::invalid_argument("gen_synthetic: noise rate must be in [0, 0.5)");

    auto rng = seeds::rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> features(static_cast<std::size_t>(n) * d);
    for (double& x : features) x = gauss(rng);

    // Labeling rule drawn from its own child seed so the same features can be
    // relabeled reproducibly.
    auto rule_rng = seeds::rng(seeds::derive(seed, seeds::kLabelRuleTag));
    std::vector<double> rule(static_cast<std::size_t>(d));
    for (double& w : rule) w = gauss(rule_rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double margin = 0.0;
        for (int j = 0; j < d; ++j)
            margin += rule[static_cast<std::size_t>(j)] *
                      features[static_cast<std::size_t>(i) * d + j];
        int y = margin >= 0.0 ? 1 : 0;
        if (unit(rule_rng) < noise_rate) y = 1 - y;
        labels[static_cast<std::size_t>(i)] = y;
    }

    return Dataset(std::move(features), std::move(labels), d).min_max_normalized();
}

std::string to_string(RemovalOrder order) {
    switch (order) {
        case RemovalOrder::HighestFirst: return "highest-first";
        case RemovalOrder::LowestFirst: return "lowest-first";
        case RemovalOrder::Random: return "random";
    }
    return "unknown";
}

double RemovalCurve::accuracy_at(double fraction) const {
    for (std::size_t s = 0; s < fractions_removed.size(); ++s)
        if (std::abs(fractions_removed[s] - fraction) < 1e-12) return accuracies[s];
    throw std::invalid_argument("RemovalCurve: fraction not on the grid");
}

namespace {

std::vector<int> removal_ranking(const std::vector<double>& values,
                                 RemovalOrder order, std::uint64_t shuffle_seed) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    switch (order) {
        case RemovalOrder::HighestFirst:
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                return values[static_cast<std::size_t>(a)] >
                       values[static_cast<std::size_t>(b)];
            });
            break;
        case RemovalOrder::LowestFirst:
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                return values[static_cast<std::size_t>(a)] <
                       values[static_cast<std::size_t>(b)];
            });
            break;
        case RemovalOrder::Random: {
            auto rng = seeds::rng(seeds::derive(shuffle_seed, seeds::kShuffleTag));
            std::shuffle(idx.begin(), idx.end(), rng);
            break;
        }
    }
    return idx;
}

}  // namespace

RemovalCurve removal_curve(const std::vector<double>& values, const Dataset& train,
                           const Dataset& heldout, RemovalOrder order,
                           const RemovalCurveOptions& options) {
    const int n = train.n();
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("removal_curve: values length must equal train.n");
    if (!(options.step > 0.0 && options.max_fraction > 0.0))
        throw std::invalid_argument("removal_curve: bad step configuration");
    if (options.max_fraction / options.step < 1.0)
        throw std::invalid_argument("removal_curve: need at least two curve points");

    std::vector<int> ranking = removal_ranking(values, order, options.shuffle_seed);

    RemovalCurve curve;
    curve.order = order;
    curve.method = options.method;
    for (double f = 0.0; f <= options.max_fraction + 1e-12; f += options.step) {
        int removed = static_cast<int>(std::floor(f * n + 1e-9));
        if (removed >= n)
            throw std::invalid_argument("removal_curve: step would remove every point");
        std::vector<int> keep(ranking.begin() + removed, ranking.end());
        LogRegModel model = train_logreg(train, Coalition(keep), options.lambda);
        curve.fractions_removed.push_back(f);
        curve.accuracies.push_back(heldout_accuracy(model, heldout));
    }
    return curve;
}

RemovalCurve random_baseline_curve(const Dataset& train, const Dataset& heldout,
                                   const RemovalCurveOptions& options,
                                   std::uint64_t seed, int repeats) {
    std::vector<double> dummy(static_cast<std::size_t>(train.n()), 0.0);
    RemovalCurve mean;
    for (int r = 0; r < repeats; ++r) {
        RemovalCurveOptions opt = options;
        opt.shuffle_seed = seeds::derive(seed, static_cast<std::uint64_t>(r));
        opt.method = options.method;
        RemovalCurve c = removal_curve(dummy, train, heldout, RemovalOrder::Random, opt);
        if (r == 0) {
            mean = c;
            continue;
        }
        for (std::size_t s = 0; s < mean.accuracies.size(); ++s)
            mean.accuracies[s] += c.accuracies[s];
    }
    for (double& a : mean.accuracies) a /= repeats;
    return mean;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("spearman: need at least 2 entries");

    auto ranks = [](const std::vector<double>& x) {
        std::vector<int> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int p, int q) {
            return x[static_cast<std::size_t>(p)] < x[static_cast<std::size_t>(q)];
        });
        std::vector<double> r(x.size());
        std::size_t s = 0;
        while (s < idx.size()) {
            std::size_t e = s;
            while (e + 1 < idx.size() &&
                   x[static_cast<std::size_t>(idx[e + 1])] ==
                       x[static_cast<std::size_t>(idx[s])])
                ++e;
            double avg_rank = (static_cast<double>(s) + e) / 2.0 + 1.0;
            for (std::size_t t = s; t <= e; ++t)
                r[static_cast<std::size_t>(idx[t])] = avg_rank;
            s = e + 1;
        }
        return r;
    };

    std::vector<double> ra = ranks(a);
    std::vector<double> rb = ranks(b);
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) {
        double da = ra[j] - ma;
        double db = rb[j] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0)
        throw std::domain_error("spearman: correlation undefined for constant input");
    return cov / std::sqrt(va * vb);
}

double logistic_bound_c(const ExperimentConfig& cfg) {
    StabilityCertificate cert{1.0, cfg.kappa, cfg.lambda};
    return cert.marginal_bound_c();
}

ValueFunction make_config_game(const ExperimentConfig& cfg, const Dataset& train,
                               const Dataset& heldout) {
    LogisticGameOptions options;
    options.lambda = cfg.lambda;
    options.kind = ValueFunction::Kind::NegativeHeldoutLoss;
    if (cfg.use_baseline_filter) options.baseline_filter = cfg.baseline_filter;
    options.certificate = StabilityCertificate{1.0, cfg.kappa, cfg.lambda};
    return make_logistic_game(train, heldout, options);
}

ShapleyEstimate layered_all(const ValueFunction& v, int n, double alpha,
                            double beta, double c, std::uint64_t run_seed,
                            int threads) {
    LayerPlan plan = build_plan(n, alpha, beta, c);

    EvalCounters before = v.counters();
    ShapleyEstimate all;
    all.method = Method::Layered;
    all.values.resize(static_cast<std::size_t>(n));

    auto estimate_point = [&](int i) {
        return layered_estimate_with_plan(v, plan, i, seeds::for_point(run_seed, i));
    };

    if (threads <= 1) {
        for (int i = 0; i < n; ++i) {
            ShapleyEstimate e = estimate_point(i);
            all.values[static_cast<std::size_t>(i)] = e.value();
            all.sampled_coalitions += e.sampled_coalitions;
            all.filtered_coalitions += e.filtered_coalitions;
            all.points_touched.insert(e.points_touched.begin(), e.points_touched.end());
        }
    } else {
        std::vector<std::future<ShapleyEstimate>> futures;
        futures.reserve(static_cast<std::size_t>(n));
        // bounded fan-out: at most `threads` estimates in flight
        for (int start = 0; start < n; start += threads) {
            int stop = std::min(n, start + threads);
            for (int i = start; i < stop; ++i)
                futures.push_back(std::async(std::launch::async, estimate_point, i));
            for (int i = start; i < stop; ++i) {
                ShapleyEstimate e = futures[static_cast<std::size_t>(i)].get();
                all.values[static_cast<std::size_t>(i)] = e.value();
                all.sampled_coalitions += e.sampled_coalitions;
                all.filtered_coalitions += e.filtered_coalitions;
                all.points_touched.insert(e.points_touched.begin(),
                                          e.points_touched.end());
            }
        }
    }

    EvalCounters after = v.counters();
    all.evaluations_used = after.evaluations - before.evaluations;
    all.cache_hits = after.cache_hits - before.cache_hits;
    all.points_read = after.points_read - before.points_read;
    return all;
}

RankCorrelationResult rank_correlation_experiment(const ExperimentConfig& cfg) {
    RankCorrelationResult result;
    result.runs.resize(static_cast<std::size_t>(cfg.runs));

    StabilityCertificate cert{1.0, cfg.kappa, cfg.lambda};
    const double c = logistic_bound_c(cfg);
    PrivacyParams params =
        PrivacyParams::derive(cfg.epsilon, cert, cfg.n, cfg.alpha, cfg.beta, c);

    auto run_one = [&](int r) {
        RankCorrelationRun run;
        std::uint64_t run_seed = seeds::derive(cfg.seed, static_cast<std::uint64_t>(r));
        Dataset train = gen_synthetic(cfg.n, cfg.d, run_seed, cfg.noise_rate);
        Dataset heldout = gen_synthetic(cfg.heldout_n, cfg.d,
                                        seeds::derive(run_seed, seeds::kHeldoutTag),
                                        cfg.noise_rate);
        ValueFunction game = make_config_game(cfg, train, heldout);

        ShapleyEstimate base = layered_all(game, cfg.n, cfg.alpha, cfg.beta, c,
                                           run_seed, 1);
        run.values = base.values;
        run.private_values.resize(base.values.size());
        for (int i = 0; i < cfg.n; ++i) {
            std::uint64_t noise_seed = seeds::for_noise(seeds::for_point(run_seed, i));
            run.private_values[static_cast<std::size_t>(i)] =
                base.values[static_cast<std::size_t>(i)] +
                laplace_sample(params.sigma, noise_seed);
        }
        run.sigma = params.sigma;
        run.p = params.p;
        run.sens = params.sens;
        run.rho = spearman(run.values, run.private_values);
        return run;
    };

    if (cfg.threads <= 1) {
        for (int r = 0; r < cfg.runs; ++r)
            result.runs[static_cast<std::size_t>(r)] = run_one(r);
    } else {
        std::vector<std::future<RankCorrelationRun>> futures;
        for (int r = 0; r < cfg.runs; ++r)
            futures.push_back(std::async(std::launch::async, run_one, r));
        for (int r = 0; r < cfg.runs; ++r)
            result.runs[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
    }

    double total = 0.0;
    for (const auto& run : result.runs) total += run.rho;
    result.mean_rho = total / cfg.runs;
    return result;
}

RemovalExperimentResult removal_experiment(const ExperimentConfig& cfg) {
    RemovalExperimentResult result;
    result.runs.resize(static_cast<std::size_t>(cfg.runs));

    const double c = logistic_bound_c(cfg);

    auto run_one = [&](int r) {
        RemovalExperimentRun run;
        std::uint64_t run_seed = seeds::derive(cfg.seed, static_cast<std::uint64_t>(r));
        Dataset train = gen_synthetic(cfg.n, cfg.d, run_seed, cfg.noise_rate);
        Dataset heldout = gen_synthetic(cfg.heldout_n, cfg.d,
                                        seeds::derive(run_seed, seeds::kHeldoutTag),
                                        cfg.noise_rate);
        ValueFunction game = make_config_game(cfg, train, heldout);
        ShapleyEstimate values = layered_all(game, cfg.n, cfg.alpha, cfg.beta, c,
                                             run_seed, 1);

        RemovalCurveOptions options;
        options.lambda = cfg.lambda;
        run.highest = removal_curve(values.values, train, heldout,
                                    RemovalOrder::HighestFirst, options);
        run.lowest = removal_curve(values.values, train, heldout,
                                   RemovalOrder::LowestFirst, options);
        run.random_baseline =
            random_baseline_curve(train, heldout, options, run_seed, 5);
        return run;
    };

    if (cfg.threads <= 1) {
        for (int r = 0; r < cfg.runs; ++r)
            result.runs[static_cast<std::size_t>(r)] = run_one(r);
    } else {
        std::vector<std::future<RemovalExperimentRun>> futures;
        for (int r = 0; r < cfg.runs; ++r)
            futures.push_back(std::async(std::launch::async, run_one, r));
        for (int r = 0; r < cfg.runs; ++r)
            result.runs[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
    }

    for (const auto& run : result.runs) {
        bool below = true;
        for (double f : {0.10, 0.20, 0.30})
            below = below && run.highest.accuracy_at(f) <
                                 run.random_baseline.accuracy_at(f);
        bool above = true;
        for (double f : {0.10, 0.20})
            above = above && run.lowest.accuracy_at(f) >
                                 run.random_baseline.accuracy_at(f);
        result.highest_below_baseline += below;
        result.lowest_above_baseline += above;
    }
    return result;
}

TouchStats touch_stats(int n, double alpha, double beta, double c,
                       std::uint64_t seed, int repeats) {
    TouchStats stats;
    stats.n = n;
    stats.bound = data_touch_bound(n, alpha, beta, c);

    ValueFunction game = make_additive_game(n);
    double touched = 0.0, coalitions = 0.0, read_per_eval = 0.0;
    for (int r = 0; r < repeats; ++r) {
        std::uint64_t run_seed = seeds::derive(seed, static_cast<std::uint64_t>(r));
        int i = static_cast<int>(run_seed % static_cast<std::uint64_t>(n));
        ShapleyEstimate est = layered_estimate(game, n, i, alpha, beta, c, run_seed);
        // exclude the queried point itself: the bound speaks about others
        touched += static_cast<double>(est.points_touched.size() - 1) / (n - 1);
        coalitions += static_cast<double>(est.sampled_coalitions);
        if (est.evaluations_used > 0)
            read_per_eval += static_cast<double>(est.points_read) /
                             static_cast<double>(est.evaluations_used);
    }
    stats.mean_touched_fraction = touched / repeats;
    stats.mean_sampled_coalitions = coalitions / repeats;
    stats.mean_points_read_per_eval = read_per_eval / repeats;
    return stats;
}

void write_curves_csv(const std::string& path,
                      const std::vector<RemovalExperimentRun>& runs,
                      std::uint64_t base_seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "fraction,accuracy,method,order,seed\n";
    out.precision(12);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::uint64_t seed = seeds::derive(base_seed, static_cast<std::uint64_t>(r));
        auto emit = [&](const RemovalCurve& curve) {
            for (std::size_t s = 0; s < curve.fractions_removed.size(); ++s)
                out << curve.fractions_removed[s] << "," << curve.accuracies[s] << ","
                    << curve.method << "," << to_string(curve.order) << "," << seed
                    << "\n";
        };
        emit(runs[r].highest);
        emit(runs[r].lowest);
        emit(runs[r].random_baseline);
    }
}

}  // namespace strata
