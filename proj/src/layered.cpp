#include "strata/layered.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "strata/combinatorics.hpp"
#include "strata/seeds.hpp"

namespace strata {

namespace {

constexpr double kPiSquaredOverSix = 1.6449340668482264;

void check_params(int n, double alpha, double beta, double c) {
    if (n < 2) throw std::domain_error("layered: need n >= 2");
    if (!(alpha > 0.0)) throw std::domain_error("layered: alpha must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("layered: beta must be in (0,1)");
    if (!(c > 0.0)) throw std::domain_error("layered: c must be > 0");
}

// Floyd's sampling: k distinct values from [0, pool_size), uniform over
// subsets, O(k) time. Returned sorted, remapped to skip `excluded`.
std::vector<int> sample_subset(int pool_size, int k, int excluded,
                               std::mt19937_64& rng) {
    std::unordered_set<int> picked;
    picked.reserve(static_cast<std::size_t>(k) * 2);
    for (int j = pool_size - k; j < pool_size; ++j) {
        std::uniform_int_distribution<int> pick(0, j);
        int t = pick(rng);
        if (!picked.insert(t).second) picked.insert(j);
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int e : picked) out.push_back(e >= excluded ? e + 1 : e);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

double LayerPlan::expected_samples() const {
    double total = 0.0;
    for (const Layer& l : layers) total += l.m_k;
    return total;
}

double LayerPlan::expected_draws() const {
    double total = 0.0;
    for (const Layer& l : layers)
        total += l.exhaustive ? std::exp(l.log_w_k) : l.m_k;
    return total;
}

double LayerPlan::sample_bound() const {
    return c * c / (2.0 * alpha * alpha) * log_term * kPiSquaredOverSix;
}

LayerPlan build_plan(int n, double alpha, double beta, double c,
                     double beta_divisor) {
    check_params(n, alpha, beta, c);
    if (!(beta_divisor >= 1.0))
        throw std::domain_error("layered: beta divisor must be >= 1");

    LayerPlan plan;
    plan.n = n;
    plan.alpha = alpha;
    plan.beta = beta;
    plan.c = c;
    plan.log_term = std::log(2.0 * n * beta_divisor / beta);

    const double m_scale = c * c / (2.0 * alpha * alpha) * plan.log_term;
    plan.layers.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 1; k <= n - 1; ++k) {
        Layer layer;
        layer.k = k;
        layer.m_k = m_scale / (static_cast<double>(k) * k);
        layer.log_w_k = log_binomial(n - 1, k);
        // w_k computed exactly while it is small enough to matter; the capped
        // value only has to witness w_k > m_k.
        double w_capped = binomial_capped(n - 1, k, layer.m_k * 2.0 + 2.0);
        layer.exhaustive = layer.m_k >= w_capped;
        layer.p_k = layer.exhaustive ? 1.0
                                     : std::min(1.0, std::exp(std::log(layer.m_k) -
                                                              layer.log_w_k));
        plan.layers.push_back(layer);
    }
    return plan;
}

std::vector<Coalition> sample_layer(const LayerPlan& plan, int k, int i,
                                    std::uint64_t seed) {
    if (k < 1 || k > plan.n - 1)
        throw std::out_of_range("sample_layer: k outside 1..n-1");
    if (i < 0 || i >= plan.n)
        throw std::out_of_range("sample_layer: point index out of range");

    const Layer& layer = plan.layer(k);
    std::vector<Coalition> out;

    if (layer.exhaustive) {
        std::vector<int> pool;
        pool.reserve(static_cast<std::size_t>(plan.n - 1));
        for (int j = 0; j < plan.n; ++j)
            if (j != i) pool.push_back(j);
        for_each_combination(pool, k, [&](const std::vector<int>& subset) {
            out.push_back(Coalition(subset));
        });
        return out;
    }

    auto rng = seeds::rng(seed);
    std::poisson_distribution<long long> draw_count(layer.m_k);
    long long draws = draw_count(rng);
    out.reserve(static_cast<std::size_t>(draws));
    for (long long s = 0; s < draws; ++s)
        out.push_back(Coalition(sample_subset(plan.n - 1, k, i, rng)));
    return out;
}

namespace {

struct LayerEstimate {
    double value = 0.0;
    long long draws = 0;
    long long filtered = 0;
};

LayerEstimate evaluate_layer(const ValueFunction& v, int n, int i,
                             const Layer& layer,
                             const std::vector<Coalition>& sample) {
    LayerEstimate le;
    le.draws = static_cast<long long>(sample.size());
    double sum = 0.0;
    for (const Coalition& c : sample) {
        bool filtered = false;
        sum += marginal_gain(v, c, i, n, &filtered);
        if (filtered) ++le.filtered;
    }
    if (layer.exhaustive) {
        le.value = sample.empty() ? 0.0 : sum / static_cast<double>(sample.size());
    } else {
        le.value = sum / layer.m_k;  // Poisson estimator: E[K]/m_k = 1
    }
    return le;
}

}  // namespace

ShapleyEstimate layered_estimate_with_plan(const ValueFunction& v,
                                           const LayerPlan& plan, int i,
                                           std::uint64_t seed, CoreSet* trace) {
    const int n = plan.n;
    if (i < 0 || i >= n)
        throw std::out_of_range("layered_estimate: point index out of range");

    EvalCounters before = v.counters();
    ShapleyEstimate est;
    est.method = Method::Layered;
    est.point = i;
    est.points_touched.insert(i);

    if (trace) {
        *trace = CoreSet{};
        trace->n = n;
        trace->point = i;
        trace->alpha = plan.alpha;
        trace->beta = plan.beta;
        trace->c = plan.c;
        trace->seed = seed;
    }

    double phi_sum = 0.0;
    for (const Layer& layer : plan.layers) {
        std::vector<Coalition> sample =
            sample_layer(plan, layer.k, i, seeds::for_layer(seed, layer.k));
        LayerEstimate le = evaluate_layer(v, n, i, layer, sample);
        phi_sum += le.value;
        est.sampled_coalitions += le.draws;
        est.filtered_coalitions += le.filtered;
        for (const Coalition& c : sample)
            for (int member : c) est.points_touched.insert(member);
        if (trace)
            trace->layers.push_back(
                {layer.k, layer.m_k, layer.exhaustive, std::move(sample)});
    }

    est.values = {phi_sum / n};
    EvalCounters after = v.counters();
    est.evaluations_used = after.evaluations - before.evaluations;
    est.cache_hits = after.cache_hits - before.cache_hits;
    est.points_read = after.points_read - before.points_read;
    return est;
}

ShapleyEstimate layered_estimate(const ValueFunction& v, int n, int i,
                                 double alpha, double beta, double c,
                                 std::uint64_t seed, CoreSet* trace) {
    LayerPlan plan = build_plan(n, alpha, beta, c);
    return layered_estimate_with_plan(v, plan, i, seed, trace);
}

ShapleyEstimate estimate_from_coreset(const ValueFunction& v, const CoreSet& cs,
                                      int i) {
    if (i < 0 || i >= cs.n)
        throw std::out_of_range("estimate_from_coreset: point index out of range");

    EvalCounters before = v.counters();
    ShapleyEstimate est;
    est.method = Method::Layered;
    est.point = i;
    est.points_touched.insert(i);

    double phi_sum = 0.0;
    for (const CoreSet::LayerSample& ls : cs.layers) {
        double sum = 0.0;
        long long kept = 0;
        for (const Coalition& c : ls.coalitions) {
            if (i != cs.point && c.contains(i)) continue;
            bool filtered = false;
            sum += marginal_gain(v, c, i, cs.n, &filtered);
            if (filtered) ++est.filtered_coalitions;
            ++kept;
            for (int member : c) est.points_touched.insert(member);
        }
        est.sampled_coalitions += kept;
        if (ls.exhaustive) {
            phi_sum += kept > 0 ? sum / static_cast<double>(kept) : 0.0;
        } else {
            double effective_m = ls.m_k;
            if (i != cs.point) {
                double keep_prob = 1.0 - static_cast<double>(ls.k) / (cs.n - 1);
                if (keep_prob <= 0.0) continue;  // layer fully excluded for i
                effective_m = ls.m_k * keep_prob;
            }
            phi_sum += sum / effective_m;
        }
    }

    est.values = {phi_sum / cs.n};
    EvalCounters after = v.counters();
    est.evaluations_used = after.evaluations - before.evaluations;
    est.cache_hits = after.cache_hits - before.cache_hits;
    est.points_read = after.points_read - before.points_read;
    return est;
}

double data_touch_bound(int n, double alpha, double beta, double c) {
    check_params(n, alpha, beta, c);
    double bound = c * c * std::log(static_cast<double>(n)) /
                   (2.0 * alpha * alpha * n) * std::log(2.0 * n / beta);
    return std::min(1.0, bound);
}

double group_estimate(const ValueFunction& v, int n, const std::vector<int>& group,
                      double alpha, double beta, double c, std::uint64_t seed) {
    if (group.empty()) throw std::invalid_argument("group_estimate: empty group");
    std::vector<int> members = group;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() != group.size())
        throw std::invalid_argument("group_estimate: duplicate indices in group");
    for (int i : members)
        if (i < 0 || i >= n)
            throw std::out_of_range("group_estimate: index out of range");

    // Failure budget beta/w per member turns ln(2n/beta) into ln(2nw/beta).
    const double w = static_cast<double>(members.size());
    LayerPlan plan = build_plan(n, alpha, beta, c, w);
    double total = 0.0;
    for (int i : members)
        total += layered_estimate_with_plan(v, plan, i, seeds::for_point(seed, i))
                     .value();
    return total;
}

void CoreSet::save_json(const std::string& path) const {
    nlohmann::json j;
    j["version"] = "strata-shap/1";
    j["n"] = n;
    j["point"] = point;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["c"] = c;
    j["seed"] = seed;
    auto& layer_array = j["layers"] = nlohmann::json::array();
    for (const LayerSample& ls : layers) {
        nlohmann::json lj;
        lj["k"] = ls.k;
        lj["m_k"] = ls.m_k;
        lj["exhaustive"] = ls.exhaustive;
        auto& coalitions = lj["coalitions"] = nlohmann::json::array();
        for (const Coalition& c : ls.coalitions) coalitions.push_back(c.members());
        layer_array.push_back(std::move(lj));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write core set: " + path);
    out << j.dump(2) << "\n";
}

CoreSet CoreSet::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open core set: " + path);
    nlohmann::json j;
    in >> j;

    CoreSet cs;
    cs.n = j.at("n").get<int>();
    cs.point = j.at("point").get<int>();
    cs.alpha = j.at("alpha").get<double>();
    cs.beta = j.at("beta").get<double>();
    cs.c = j.at("c").get<double>();
    cs.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& lj : j.at("layers")) {
        CoreSet::LayerSample ls;
        ls.k = lj.at("k").get<int>();
        ls.m_k = lj.at("m_k").get<double>();
        ls.exhaustive = lj.at("exhaustive").get<bool>();
        for (const auto& cj : lj.at("coalitions"))
            ls.coalitions.push_back(Coalition(cj.get<std::vector<int>>()));
        cs.layers.push_back(std::move(ls));
    }
    return cs;
}

}  // namespace strata
