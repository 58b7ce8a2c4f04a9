#include "strata/value_function.hpp"

#include <cmath>

namespace strata {

std::string to_string(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::MonteCarlo: return "monte-carlo";
        case Method::Layered: return "layered";
        case Method::LayeredPrivate: return "layered-private";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    if (s == "exact") return Method::Exact;
    if (s == "mc" || s == "monte-carlo") return Method::MonteCarlo;
    if (s == "layered") return Method::Layered;
    if (s == "layered-private") return Method::LayeredPrivate;
    throw std::invalid_argument("unknown method: " + s);
}

double StabilityCertificate::gamma(int k) const {
    if (k < 1) throw std::domain_error("StabilityCertificate::gamma: k must be >= 1");
    return lipschitz_L * lipschitz_L * kappa * kappa / (2.0 * lambda * k);
}

bool StabilityCertificate::matches(double L, double k, double l, double rel_tol) const {
    auto close = [rel_tol](double a, double b) {
        return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
    };
    return close(lipschitz_L, L) && close(kappa, k) && close(lambda, l);
}

ValueFunction::ValueFunction(Evaluator evaluate, double marginal_bound_c, Kind kind,
                             std::optional<double> baseline_filter,
                             std::optional<StabilityCertificate> certificate,
                             bool enable_cache)
    : evaluate_(std::move(evaluate)),
      marginal_bound_c_(marginal_bound_c),
      kind_(kind),
      baseline_filter_(baseline_filter),
      certificate_(std::move(certificate)),
      enable_cache_(enable_cache) {
    if (!evaluate_) throw std::invalid_argument("ValueFunction: null evaluator");
    if (!(marginal_bound_c_ > 0.0))
        throw std::invalid_argument("ValueFunction: marginal_bound_c must be positive");
}

double ValueFunction::evaluate(const Coalition& c) const {
    if (enable_cache_) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(c);
        if (it != cache_.end()) {
            ++counters_.cache_hits;
            return it->second;
        }
    }
    double value = evaluate_(c);  // may be slow (model training); not under the lock
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++counters_.evaluations;
        counters_.points_read += c.size();
        if (enable_cache_) cache_.emplace(c, value);
    }
    return value;
}

EvalCounters ValueFunction::counters() const {
    std::lock_guard<std::mutex> lock(mu_);
    return counters_;
}

void ValueFunction::reset_counters() {
    std::lock_guard<std::mutex> lock(mu_);
    counters_ = EvalCounters{};
}

double marginal_gain(const ValueFunction& v, const Coalition& c, int i, int n,
                     bool* filtered) {
    if (i < 0 || i >= n)
        throw std::out_of_range("marginal_gain: point index " + std::to_string(i) +
                                " outside [0, " + std::to_string(n) + ")");
    if (c.contains(i))
        throw std::invalid_argument("marginal_gain: point " + std::to_string(i) +
                                    " is already in the coalition");
    if (filtered) *filtered = false;
    double base = v.evaluate(c);
    if (v.baseline_filter() && base < *v.baseline_filter()) {
        if (filtered) *filtered = true;
        return 0.0;
    }
    return v.evaluate(c.with(i)) - base;
}

}  // namespace strata
