#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlqm/bounds.hpp"
#include "mlqm/deformation.hpp"
#include "mlqm/distribution.hpp"

namespace mlqm::config {

using json = nlohmann::ordered_json;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw config_error(std::string(what) + ": expected a JSON object");
}

/// Unknown keys are schema violations: they usually mean a typo that would
/// otherwise silently fall back to a default.
inline void check_keys(const json& j, const char* what, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw config_error(std::string(what) + ": unknown key '" + key + "'");
}

inline double number(const json& j, const char* what, const std::string& key) {
  if (!j.contains(key)) throw config_error(std::string(what) + ": missing key '" + key + "'");
  if (!j[key].is_number()) throw config_error(std::string(what) + ": key '" + key + "' must be a number");
  return j[key].get<double>();
}

inline double number_or(const json& j, const char* what, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw config_error(std::string(what) + ": key '" + key + "' must be a number");
  return j[key].get<double>();
}

/// Model record: {"kind": "linear"|"quadratic"|"custom_series", "beta": x}
/// or {"kind": "custom_series", "series_c": [1, ...], "c_half": x, "u_max": x}.
/// u_max is optional and computed from the commutativity condition if absent.
/// "id" optionally names the model for output rows.
inline DeformationModel model_from_json(const json& j) {
  require_object(j, "model");
  check_keys(j, "model", {"kind", "beta", "series_c", "c_half", "u_max", "id"});
  if (!j.contains("kind") || !j["kind"].is_string())
    throw config_error("model: missing or non-string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "linear" || kind == "quadratic") {
      for (const char* banned : {"series_c", "c_half", "u_max"})
        if (j.contains(banned))
          throw config_error(std::string("model: key '") + banned + "' is only valid for custom_series");
      const double beta = number(j, "model", "beta");
      return kind == "linear" ? DeformationModel::linear(beta) : DeformationModel::quadratic(beta);
    }
    if (kind == "custom_series") {
      if (j.contains("beta")) throw config_error("model: 'beta' is not used by custom_series");
      if (!j.contains("series_c") || !j["series_c"].is_array())
        throw config_error("model: custom_series needs an array 'series_c'");
      std::vector<double> c;
      for (const auto& v : j["series_c"]) {
        if (!v.is_number()) throw config_error("model: series_c entries must be numbers");
        c.push_back(v.get<double>());
      }
      const double c_half = number_or(j, "model", "c_half", 0.0);
      std::optional<double> u_max;
      if (j.contains("u_max")) u_max = number(j, "model", "u_max");
      return DeformationModel::custom_series(std::move(c), c_half, u_max);
    }
  } catch (const domain_error& e) {
    throw config_error(std::string("model: ") + e.what());
  }
  throw config_error("model: kind must be linear, quadratic or custom_series");
}

inline json model_to_json(const DeformationModel& m) {
  json j;
  j["kind"] = to_string(m.kind());
  switch (m.kind()) {
    case ModelKind::Linear:
    case ModelKind::Quadratic:
      j["beta"] = m.beta();
      break;
    case ModelKind::CustomSeries:
      j["series_c"] = m.series_c();
      if (m.c_half() != 0.0) j["c_half"] = m.c_half();
      if (std::isfinite(m.u_max())) j["u_max"] = m.u_max();
      break;
  }
  return j;
}

inline std::string id_or(const json& j, const std::string& fallback) {
  if (j.is_object() && j.contains("id")) {
    if (!j["id"].is_string()) throw config_error("config: 'id' must be a string");
    return j["id"].get<std::string>();
  }
  return fallback;
}

/// Distribution record, one of:
///   {"kind": "monoenergetic", "M_GeV": x, "E_kin_GeV": x}
///   {"kind": "custom", "points": [[pi_GeV, weight], ...]}
///   {"kind": "gaussian_radial", "mean_GeV": x, "sigma_GeV": x, "n_points": n}
inline MomentumDistribution distribution_from_json(const json& j) {
  require_object(j, "distribution");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw config_error("distribution: missing or non-string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "monoenergetic") {
      check_keys(j, "distribution", {"kind", "M_GeV", "E_kin_GeV", "id"});
      return MomentumDistribution::monoenergetic(number(j, "distribution", "M_GeV"),
                                                 number(j, "distribution", "E_kin_GeV"));
    }
    if (kind == "custom") {
      check_keys(j, "distribution", {"kind", "points", "id"});
      if (!j.contains("points") || !j["points"].is_array())
        throw config_error("distribution: custom needs an array 'points'");
      std::vector<MomentumDistribution::Point> pts;
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw config_error("distribution: points entries must be [pi_GeV, weight] pairs");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return MomentumDistribution::from_points(std::move(pts));
    }
    if (kind == "gaussian_radial") {
      check_keys(j, "distribution", {"kind", "mean_GeV", "sigma_GeV", "n_points", "id"});
      if (!j.contains("n_points") || !j["n_points"].is_number_integer())
        throw config_error("distribution: gaussian_radial needs an integer 'n_points'");
      return MomentumDistribution::gaussian_radial(number(j, "distribution", "mean_GeV"),
                                                   number(j, "distribution", "sigma_GeV"),
                                                   j["n_points"].get<int>());
    }
  } catch (const domain_error& e) {
    throw config_error(std::string("distribution: ") + e.what());
  }
  throw config_error("distribution: kind must be monoenergetic, custom or gaussian_radial");
}

/// Beam record: {"M_GeV": x, "E_kin_GeV": x, "N_constituents": n, "alpha_scaling": a},
/// the last two optional (1 and 2).
inline BeamSpec beam_from_json(const json& j) {
  require_object(j, "beam");
  check_keys(j, "beam", {"M_GeV", "E_kin_GeV", "N_constituents", "alpha_scaling"});
  BeamSpec beam{number(j, "beam", "M_GeV"), number(j, "beam", "E_kin_GeV")};
  if (j.contains("N_constituents")) {
    if (!j["N_constituents"].is_number_integer())
      throw config_error("beam: 'N_constituents' must be an integer");
    beam.N_constituents = j["N_constituents"].get<int>();
  }
  beam.alpha_scaling = number_or(j, "beam", "alpha_scaling", 2.0);
  try {
    beam.validate();
  } catch (const domain_error& e) {
    throw config_error(std::string("beam: ") + e.what());
  }
  return beam;
}

}  // namespace mlqm::config
