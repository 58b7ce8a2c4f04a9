#include "strata/json_io.hpp"

#include <fstream>

namespace strata {

nlohmann::json instrumentation_json(const ShapleyEstimate& est, int n) {
    nlohmann::json j;
    j["evaluations_used"] = est.evaluations_used;
    j["cache_hits"] = est.cache_hits;
    j["points_read"] = est.points_read;
    j["sampled_coalitions"] = est.sampled_coalitions;
    j["filtered_coalitions"] = est.filtered_coalitions;
    j["points_touched_count"] = est.points_touched.size();
    j["points_touched_fraction"] = est.touched_fraction(n);
    if (n <= 1000) j["points_touched"] = est.points_touched;
    return j;
}

nlohmann::json estimate_json(const ShapleyEstimate& est, int n) {
    nlohmann::json j;
    j["version"] = kSchemaVersion;
    j["method"] = to_string(est.method);
    j["n"] = n;
    if (est.point >= 0)
        j["point"] = est.point;
    else
        j["point"] = "all";
    j["values"] = est.values;
    j["instrumentation"] = instrumentation_json(est, n);
    return j;
}

nlohmann::json privacy_json(const PrivateEstimate& est) {
    nlohmann::json j;
    j["epsilon"] = est.epsilon;
    j["sigma"] = est.sigma;
    j["p"] = est.p;
    j["sens"] = est.sens;
    return j;
}

nlohmann::json plan_json(const LayerPlan& plan) {
    nlohmann::json j;
    j["version"] = kSchemaVersion;
    j["n"] = plan.n;
    j["alpha"] = plan.alpha;
    j["beta"] = plan.beta;
    j["c"] = plan.c;
    j["expected_samples"] = plan.expected_samples();
    j["expected_draws"] = plan.expected_draws();
    j["sample_bound"] = plan.sample_bound();
    auto& layers = j["layers"] = nlohmann::json::array();
    for (const Layer& l : plan.layers) {
        nlohmann::json lj;
        lj["k"] = l.k;
        lj["m_k"] = l.m_k;
        lj["log_w_k"] = l.log_w_k;
        lj["p_k"] = l.p_k;
        lj["mode"] = l.exhaustive ? "exhaustive" : "poisson";
        layers.push_back(std::move(lj));
    }
    return j;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write JSON: " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace strata
