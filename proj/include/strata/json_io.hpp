#pragma once

#include <string>

#include "json.hpp"

#include "strata/dp.hpp"
#include "strata/layered.hpp"
#include "strata/value_function.hpp"

namespace strata {

inline constexpr const char* kSchemaVersion = "strata-shap/1";

// Instrumentation block shared by every estimate record.
nlohmann::json instrumentation_json(const ShapleyEstimate& est, int n);

nlohmann::json estimate_json(const ShapleyEstimate& est, int n);

// (value, sigma, p, sens, epsilon) release record.
nlohmann::json privacy_json(const PrivateEstimate& est);

nlohmann::json plan_json(const LayerPlan& plan);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace strata
