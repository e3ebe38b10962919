#pragma once

// JSON forms of model specifications and analysis reports.
//
// A model document is {"model": "<name>", "lambda1": ..., "lambda2": ..., ...}
// using exactly the fields of the named model, drawn from lambda1, lambda2,
// lambda12, alpha, m, theta, theta1, theta2.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "seriesdep/error_analysis.hpp"
#include "seriesdep/exception.hpp"
#include "seriesdep/measures.hpp"
#include "seriesdep/models.hpp"
#include "seriesdep/oracle.hpp"

namespace seriesdep {

inline constexpr std::array<std::string_view, 8> kParameterFields = {
    "lambda1", "lambda2", "lambda12", "alpha", "m", "theta", "theta1", "theta2"};

inline nlohmann::json model_to_json(const ModelParams& params) {
  nlohmann::json j;
  j["model"] = std::string(model_name(params));
  for (const auto& [key, value] : fields_of(params)) j[key] = value;
  return j;
}

inline ModelParams model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw DomainError("model document must be a JSON object");
  }
  if (!j.contains("model") || !j["model"].is_string()) {
    throw DomainError("model document needs a string field 'model'");
  }
  FieldMap fields;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") continue;
    if (std::find(kParameterFields.begin(), kParameterFields.end(), key) == kParameterFields.end()) {
      throw DomainError("unknown field '" + key + "' in model document");
    }
    if (!value.is_number()) {
      throw DomainError("field '" + key + "' must be a number");
    }
    fields[key] = value.get<double>();
  }
  return params_from_fields(j["model"].get<std::string>(), fields);
}

inline ModelParams model_from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("malformed model document: ") + e.what());
  }
  return model_from_json(j);
}

inline nlohmann::json to_json(const CrossingReport& r) {
  return {{"t", r.t_root},
          {"value", r.value_at_root},
          {"bracket", {r.bracket.lo, r.bracket.hi}},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"at_boundary", r.at_boundary}};
}

inline nlohmann::json to_json(const SignVerdict& v) {
  nlohmann::json j = {{"verdict", std::string(to_string(v.kind))}, {"label", v.label()}};
  j["threshold"] = v.threshold ? nlohmann::json(*v.threshold) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const OracleReport& r) {
  return {{"model", model_to_json(r.model)},
          {"kind", std::string(to_string(r.kind))},
          {"grid", {{"t_min", r.grid.front()}, {"t_max", r.grid.back()}, {"points", r.grid.size()}}},
          {"max_rel_dev", r.max_rel_dev},
          {"worst_t", r.worst_t},
          {"tolerance", r.tolerance},
          {"passed", r.passed()}};
}

}  // namespace seriesdep
