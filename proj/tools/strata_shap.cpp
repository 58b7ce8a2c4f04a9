// strata_shap: data valuation via exact, Monte Carlo, and layered Shapley
// estimators, with optional differentially private release.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "strata/dataset.hpp"
#include "strata/dp.hpp"
#include "strata/exact.hpp"
#include "strata/experiments.hpp"
#include "strata/games.hpp"
#include "strata/json_io.hpp"
#include "strata/layered.hpp"
#include "strata/models.hpp"
#include "strata/monte_carlo.hpp"
#include "strata/seeds.hpp"
#include "strata/value_function.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitIo = 2;
constexpr int kExitEstimator = 3;

struct ValueArgs {
    std::string data_path;
    std::string heldout_path;
    std::string out_path;
    std::string method = "layered";
    std::string point = "all";
    std::string game = "logistic";
    std::string value_kind = "heldout";
    std::string save_coreset;
    std::string from_coreset;
    double alpha = 0.05;
    double beta = 0.05;
    double c = 0.0;  // 0: derive from the game
    double epsilon = 1.0;
    double lambda = 1.0;
    double kappa = 0.0;  // 0: sqrt(d+1)
    double baseline_filter = -std::log(2.0);
    bool no_baseline_filter = false;
    bool header = false;
    bool normalize = false;
    long long mc_samples = 0;  // 0: from mc_sample_size
    std::uint64_t seed = 1;
    int threads = 1;
};

void emit(const nlohmann::json& doc, const std::string& out_path) {
    if (out_path.empty())
        std::cout << doc.dump(2) << "\n";
    else
        strata::write_json(out_path, doc);
}

int parse_point(const std::string& point, int n) {
    if (point == "all") return -1;
    int i = std::stoi(point);
    if (i < 0 || i >= n)
        throw std::out_of_range("--point must be 'all' or an index in [0, n)");
    return i;
}

int run_value(const ValueArgs& args) {
    std::optional<strata::Dataset> train;
    std::optional<strata::Dataset> heldout;
    try {
        train = strata::Dataset::load_csv(args.data_path, args.header);
        if (args.normalize) train = train->min_max_normalized();
        if (!args.heldout_path.empty()) {
            heldout = strata::Dataset::load_csv(args.heldout_path, args.header);
            if (args.normalize) heldout = heldout->min_max_normalized();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    const int n = train->n();
    nlohmann::json doc;
    try {
        int point = parse_point(args.point, n);
        strata::Method method = strata::method_from_string(args.method);

        // Build the requested game.
        std::optional<strata::ValueFunction> game;
        double c = args.c;
        if (args.game == "additive") {
            game.emplace(strata::make_additive_game(n, /*enable_cache=*/true));
            if (c <= 0.0) c = static_cast<double>(n);
        } else if (args.game == "logistic") {
            strata::LogisticGameOptions options;
            options.lambda = args.lambda;
            if (!args.no_baseline_filter)
                options.baseline_filter = args.baseline_filter;
            double kappa = args.kappa > 0.0
                               ? args.kappa
                               : std::sqrt(static_cast<double>(train->dim()) + 1.0);
            options.certificate =
                strata::StabilityCertificate{1.0, kappa, args.lambda};
            if (args.value_kind == "training") {
                options.kind = strata::ValueFunction::Kind::NegativeTrainingLoss;
                game.emplace(strata::make_logistic_game(*train, *train, options));
            } else if (args.value_kind == "heldout") {
                if (!heldout) {
                    std::cerr << "error: --value-kind heldout requires --heldout\n";
                    return kExitBadArgs;
                }
                game.emplace(strata::make_logistic_game(*train, *heldout, options));
            } else {
                std::cerr << "error: --value-kind must be heldout or training\n";
                return kExitBadArgs;
            }
            if (!train->is_normalized())
                std::cerr << "warning: features outside [0,1]; the stability "
                             "constants assume normalized data (see --normalize)\n";
            if (c <= 0.0) c = options.certificate->marginal_bound_c();
        } else {
            std::cerr << "error: --game must be logistic or additive\n";
            return kExitBadArgs;
        }

        nlohmann::json params;
        params["alpha"] = args.alpha;
        params["beta"] = args.beta;
        params["c"] = c;
        params["lambda"] = args.lambda;
        params["seed"] = args.seed;
        params["game"] = args.game;

        strata::ShapleyEstimate est;
        std::optional<strata::PrivateEstimate> private_single;
        std::vector<double> private_values;

        switch (method) {
            case strata::Method::Exact: {
                est = point < 0 ? strata::exact_all(*game, n)
                                : strata::exact_single(*game, n, point);
                break;
            }
            case strata::Method::MonteCarlo: {
                long long m = args.mc_samples > 0
                                  ? args.mc_samples
                                  : strata::mc_sample_size(args.alpha, args.beta, c);
                params["mc_samples"] = m;
                if (point >= 0) {
                    est = strata::mc_estimate(*game, n, point, m,
                                              strata::seeds::for_point(args.seed, point));
                } else {
                    est.method = strata::Method::MonteCarlo;
                    est.values.resize(static_cast<std::size_t>(n));
                    for (int i = 0; i < n; ++i) {
                        auto e = strata::mc_estimate(
                            *game, n, i, m, strata::seeds::for_point(args.seed, i));
                        est.values[static_cast<std::size_t>(i)] = e.value();
                        est.evaluations_used += e.evaluations_used;
                        est.cache_hits += e.cache_hits;
                        est.points_read += e.points_read;
                        est.sampled_coalitions += e.sampled_coalitions;
                        est.points_touched.insert(e.points_touched.begin(),
                                                  e.points_touched.end());
                    }
                }
                break;
            }
            case strata::Method::Layered: {
                if (!args.from_coreset.empty()) {
                    auto cs = strata::CoreSet::load_json(args.from_coreset);
                    if (point < 0) point = cs.point;
                    est = strata::estimate_from_coreset(*game, cs, point);
                } else if (point >= 0) {
                    strata::CoreSet trace;
                    bool want_trace = !args.save_coreset.empty();
                    est = strata::layered_estimate(
                        *game, n, point, args.alpha, args.beta, c,
                        strata::seeds::for_point(args.seed, point),
                        want_trace ? &trace : nullptr);
                    if (want_trace) trace.save_json(args.save_coreset);
                } else {
                    est = strata::layered_all(*game, n, args.alpha, args.beta, c,
                                              args.seed);
                }
                strata::LayerPlan plan = strata::build_plan(n, args.alpha, args.beta, c);
                params["expected_samples"] = plan.expected_samples();
                params["expected_samples_bound"] = plan.sample_bound();
                break;
            }
            case strata::Method::LayeredPrivate: {
                if (!game->certificate())
                    throw strata::CertificateMismatchError(
                        "layered-private requires a game with a stability "
                        "certificate (use --game logistic)");
                auto privacy_params = strata::PrivacyParams::derive(
                    args.epsilon, *game->certificate(), n, args.alpha, args.beta, c);
                if (point >= 0) {
                    private_single = strata::private_layered_estimate(
                        *game, n, point, args.alpha, args.beta, c, privacy_params,
                        strata::seeds::for_point(args.seed, point));
                    est = private_single->base;
                    est.values = {private_single->value};
                } else {
                    est = strata::layered_all(*game, n, args.alpha, args.beta, c,
                                              args.seed);
                    est.method = strata::Method::LayeredPrivate;
                    for (int i = 0; i < n; ++i) {
                        std::uint64_t noise_seed = strata::seeds::for_noise(
                            strata::seeds::for_point(args.seed, i));
                        est.values[static_cast<std::size_t>(i)] +=
                            strata::laplace_sample(privacy_params.sigma, noise_seed);
                    }
                    strata::PrivateEstimate rec;
                    rec.sigma = privacy_params.sigma;
                    rec.p = privacy_params.p;
                    rec.sens = privacy_params.sens;
                    rec.epsilon = privacy_params.epsilon;
                    private_single = rec;
                }
                params["epsilon"] = args.epsilon;
                params["expected_samples_bound"] =
                    strata::build_plan(n, args.alpha, args.beta, c).sample_bound();
                break;
            }
        }

        doc = strata::estimate_json(est, n);
        doc["command"] = "value";
        doc["data"] = {{"path", args.data_path}, {"n", n}, {"dim", train->dim()}};
        doc["params"] = params;
        if (private_single) doc["privacy"] = strata::privacy_json(*private_single);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "estimator error: " << e.what() << "\n";
        return kExitEstimator;
    }

    try {
        emit(doc, args.out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

struct ExperimentArgs {
    strata::ExperimentConfig cfg;
    std::string out_path;
    std::string out_csv;
    double c_override = 0.0;
    int touch_n = 1000;
    int touch_repeats = 3;
};

int run_plan(const ExperimentArgs& args) {
    try {
        double c = args.c_override > 0.0 ? args.c_override : 1.0;
        strata::LayerPlan plan =
            strata::build_plan(args.cfg.n, args.cfg.alpha, args.cfg.beta, c);
        std::printf("layer plan: n=%d alpha=%g beta=%g c=%g\n", plan.n, plan.alpha,
                    plan.beta, plan.c);
        std::printf("%6s %14s %14s %12s %s\n", "k", "m_k", "ln(w_k)", "p_k", "mode");
        const int n_layers = static_cast<int>(plan.layers.size());
        for (int idx = 0; idx < n_layers; ++idx) {
            if (n_layers > 24 && idx == 12) {
                std::printf("   ... %d layers elided ...\n", n_layers - 24);
                idx = n_layers - 12;
            }
            const strata::Layer& l = plan.layers[static_cast<std::size_t>(idx)];
            std::printf("%6d %14.4f %14.4f %12.4g %s\n", l.k, l.m_k, l.log_w_k, l.p_k,
                        l.exhaustive ? "exhaustive" : "poisson");
        }
        std::printf("expected samples %.4f  (bound %.4f)\n", plan.expected_samples(),
                    plan.sample_bound());
        if (!args.out_path.empty()) strata::write_json(args.out_path, strata::plan_json(plan));
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_rank_correlation(const ExperimentArgs& args) {
    try {
        strata::RankCorrelationResult result =
            strata::rank_correlation_experiment(args.cfg);
        for (std::size_t r = 0; r < result.runs.size(); ++r)
            std::printf("run %zu: rho = %.4f (sigma = %.5f, p = %.4f)\n", r,
                        result.runs[r].rho, result.runs[r].sigma, result.runs[r].p);
        std::printf("mean spearman rho over %d runs: %.4f\n", args.cfg.runs,
                    result.mean_rho);

        if (!args.out_path.empty()) {
            nlohmann::json doc;
            doc["version"] = strata::kSchemaVersion;
            doc["command"] = "rank-correlation";
            doc["mean_rho"] = result.mean_rho;
            auto& runs = doc["runs"] = nlohmann::json::array();
            for (const auto& run : result.runs) {
                nlohmann::json rj;
                rj["rho"] = run.rho;
                rj["sigma"] = run.sigma;
                rj["p"] = run.p;
                rj["sens"] = run.sens;
                rj["values"] = run.values;
                rj["private_values"] = run.private_values;
                runs.push_back(std::move(rj));
            }
            strata::write_json(args.out_path, doc);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "estimator error: " << e.what() << "\n";
        return kExitEstimator;
    }
    return kExitOk;
}

int run_removal_curve(const ExperimentArgs& args) {
    try {
        strata::RemovalExperimentResult result = strata::removal_experiment(args.cfg);
        std::printf("highest-first below random baseline at 10/20/30%%: %d of %d runs\n",
                    result.highest_below_baseline, args.cfg.runs);
        std::printf("lowest-first above random baseline at 10/20%%: %d of %d runs\n",
                    result.lowest_above_baseline, args.cfg.runs);

        if (!args.out_csv.empty())
            strata::write_curves_csv(args.out_csv, result.runs, args.cfg.seed);
        if (!args.out_path.empty()) {
            nlohmann::json doc;
            doc["version"] = strata::kSchemaVersion;
            doc["command"] = "removal-curve";
            doc["highest_below_baseline"] = result.highest_below_baseline;
            doc["lowest_above_baseline"] = result.lowest_above_baseline;
            doc["runs"] = args.cfg.runs;
            strata::write_json(args.out_path, doc);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "estimator error: " << e.what() << "\n";
        return kExitEstimator;
    }
    return kExitOk;
}

int run_touch_stats(const ExperimentArgs& args) {
    try {
        double c = args.c_override > 0.0 ? args.c_override : 1.0;
        strata::TouchStats stats =
            strata::touch_stats(args.touch_n, args.cfg.alpha, args.cfg.beta, c,
                                args.cfg.seed, args.touch_repeats);
        std::printf("n = %d\n", stats.n);
        std::printf("theoretical bound (clamped): %.6f\n", stats.bound);
        std::printf("empirical touched fraction:  %.6f\n", stats.mean_touched_fraction);
        std::printf("mean sampled coalitions:     %.1f\n", stats.mean_sampled_coalitions);
        std::printf("mean points read per eval:   %.2f\n",
                    stats.mean_points_read_per_eval);
        if (!args.out_path.empty()) {
            nlohmann::json doc;
            doc["version"] = strata::kSchemaVersion;
            doc["command"] = "touch-stats";
            doc["n"] = stats.n;
            doc["bound"] = stats.bound;
            doc["touched_fraction"] = stats.mean_touched_fraction;
            doc["sampled_coalitions"] = stats.mean_sampled_coalitions;
            doc["points_read_per_eval"] = stats.mean_points_read_per_eval;
            strata::write_json(args.out_path, doc);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "estimator error: " << e.what() << "\n";
        return kExitEstimator;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shapley values of training data: exact, Monte Carlo, and "
                 "layered estimators with differentially private release"};
    app.set_config("--config", "", "key=value config file overriding flags");

    unsigned default_threads = std::max(1u, std::thread::hardware_concurrency());

    // ---- value ----
    ValueArgs value_args;
    value_args.threads = static_cast<int>(default_threads);
    CLI::App* value = app.add_subcommand("value", "estimate Shapley values of points");
    value->add_option("--data", value_args.data_path, "training CSV (features, label)")
        ->required();
    value->add_flag("--header", value_args.header, "CSV has a header row");
    value->add_option("--method", value_args.method,
                      "exact | mc | layered | layered-private")
        ->check(CLI::IsMember({"exact", "mc", "layered", "layered-private"}));
    value->add_option("--point", value_args.point, "point index or 'all'");
    value->add_option("--alpha", value_args.alpha, "approximation error")
        ->check(CLI::PositiveNumber);
    value->add_option("--beta", value_args.beta, "failure probability")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    value->add_option("--c", value_args.c, "marginal bound constant (default: game's)");
    value->add_option("--epsilon", value_args.epsilon, "privacy budget")
        ->check(CLI::PositiveNumber);
    value->add_option("--lambda", value_args.lambda, "L2 regularization strength")
        ->check(CLI::PositiveNumber);
    value->add_option("--kappa", value_args.kappa,
                      "stability kappa (default sqrt(d+1))");
    value->add_option("--seed", value_args.seed, "run seed");
    value->add_option("--heldout", value_args.heldout_path, "held-out CSV");
    value->add_option("--out", value_args.out_path, "output JSON path (default stdout)");
    value->add_option("--game", value_args.game, "logistic | additive")
        ->check(CLI::IsMember({"logistic", "additive"}));
    value->add_option("--value-kind", value_args.value_kind, "heldout | training")
        ->check(CLI::IsMember({"heldout", "training"}));
    value->add_option("--baseline-filter", value_args.baseline_filter,
                      "coalition value cutoff (default -ln 2)");
    value->add_flag("--no-baseline-filter", value_args.no_baseline_filter,
                    "disable the random-guessing cutoff");
    value->add_flag("--normalize", value_args.normalize,
                    "min-max normalize features to [0,1]");
    value->add_option("--mc-samples", value_args.mc_samples,
                      "permutations for --method mc (default: sample bound)");
    value->add_option("--save-coreset", value_args.save_coreset,
                      "persist sampled coalitions (single-point layered only)");
    value->add_option("--from-coreset", value_args.from_coreset,
                      "answer from a saved core set instead of sampling");
    value->add_option("--threads", value_args.threads, "worker thread cap")
        ->envname("STRATA_SHAP_THREADS");

    // ---- experiment ----
    ExperimentArgs exp_args;
    exp_args.cfg.threads = static_cast<int>(default_threads);
    CLI::App* experiment =
        app.add_subcommand("experiment", "batch protocol drivers");
    experiment->require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", exp_args.cfg.n, "training points")->check(CLI::PositiveNumber);
        sub->add_option("--d", exp_args.cfg.d, "feature dimension")->check(CLI::PositiveNumber);
        sub->add_option("--heldout-n", exp_args.cfg.heldout_n, "held-out points")
            ->check(CLI::PositiveNumber);
        sub->add_option("--alpha", exp_args.cfg.alpha)->check(CLI::PositiveNumber);
        sub->add_option("--beta", exp_args.cfg.beta)->check(CLI::Range(1e-12, 1.0 - 1e-12));
        sub->add_option("--epsilon", exp_args.cfg.epsilon)->check(CLI::PositiveNumber);
        sub->add_option("--lambda", exp_args.cfg.lambda)->check(CLI::PositiveNumber);
        sub->add_option("--kappa", exp_args.cfg.kappa, "stability kappa for privacy")
            ->check(CLI::PositiveNumber);
        sub->add_option("--noise-rate", exp_args.cfg.noise_rate, "label flip rate")
            ->check(CLI::Range(0.0, 0.49));
        sub->add_option("--runs", exp_args.cfg.runs)->check(CLI::PositiveNumber);
        sub->add_option("--seed", exp_args.cfg.seed);
        sub->add_option("--threads", exp_args.cfg.threads)
            ->envname("STRATA_SHAP_THREADS");
        sub->add_option("--out", exp_args.out_path, "output JSON path");
    };

    CLI::App* plan = experiment->add_subcommand("plan", "print the layer sampling plan");
    add_common(plan);
    plan->add_option("--c", exp_args.c_override, "marginal bound constant (default 1)");

    CLI::App* rank = experiment->add_subcommand(
        "rank-correlation", "spearman rho between private and non-private values");
    add_common(rank);

    CLI::App* removal = experiment->add_subcommand(
        "removal-curve", "accuracy curves for value-ranked point removal");
    add_common(removal);
    removal->add_option("--out-csv", exp_args.out_csv, "curve CSV path");

    CLI::App* touch = experiment->add_subcommand(
        "touch-stats", "empirical data-access fraction vs the theoretical bound");
    add_common(touch);
    touch->add_option("--c", exp_args.c_override, "marginal bound constant (default 1)");
    touch->get_option("--n")->default_val(1000);
    touch->add_option("--repeats", exp_args.touch_repeats, "queries to average");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    if (value->parsed()) return run_value(value_args);
    if (experiment->parsed()) {
        if (plan->parsed()) return run_plan(exp_args);
        if (rank->parsed()) return run_rank_correlation(exp_args);
        if (removal->parsed()) return run_removal_curve(exp_args);
        if (touch->parsed()) {
            exp_args.touch_n = exp_args.cfg.n;
            return run_touch_stats(exp_args);
        }
    }
    return kExitBadArgs;
}
