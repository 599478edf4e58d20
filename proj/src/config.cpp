#include "heatchan/config.hpp"

#include <fstream>

#include "heatchan/errors.hpp"

namespace heatchan {

namespace {

double require_number(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw ConfigError("missing or non-numeric field: " + field);
  }
  return j[field].get<double>();
}

}  // namespace

ProfileSpec parse_profile(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw ConfigError("profile requires a string field: type");
  }
  const std::string type = spec["type"].get<std::string>();
  ProfileSpec out;
  try {
    if (type == "geometric") {
      const double rho = require_number(spec, "rho");
      const double scale =
          spec.contains("scale") ? require_number(spec, "scale") : 1.0;
      out.profile = HeatProfile::geometric(rho, scale);
    } else if (type == "subgeometric") {
      out.profile = HeatProfile::subgeometric(require_number(spec, "rho"),
                                              require_number(spec, "kappa"));
    } else if (type == "even_ones") {
      out.profile = HeatProfile::even_ones();
    } else if (type == "odd_ones") {
      out.profile = HeatProfile::odd_ones();
    } else if (type == "zero") {
      out.profile = HeatProfile::zero();
    } else if (type == "explicit") {
      if (!spec.contains("coefficients") || !spec["coefficients"].is_array()) {
        throw ConfigError("explicit profile requires an array field: coefficients");
      }
      std::vector<double> coeffs;
      for (const auto& c : spec["coefficients"]) {
        if (!c.is_number()) {
          throw ConfigError("non-numeric entry in field: coefficients");
        }
        coeffs.push_back(c.get<double>());
      }
      std::optional<TailMajorant> majorant;
      if (spec.contains("tail_majorant")) {
        const auto& m = spec["tail_majorant"];
        majorant = TailMajorant{require_number(m, "c"), require_number(m, "q")};
      }
      out.profile = HeatProfile::from_coefficients(std::move(coeffs), majorant);
    } else if (type == "physics") {
      ThermalParams params{require_number(spec, "tau"),
                           require_number(spec, "c_h"),
                           require_number(spec, "rho_th"),
                           require_number(spec, "t_e"),
                           require_number(spec, "lambda_w"),
                           require_number(spec, "eta")};
      auto [profile, sigma2] = profile_from_physics(params);
      out.profile = profile;
      out.sigma2 = sigma2;
    } else {
      throw ConfigError("unknown profile type: " + type);
    }
  } catch (const InvalidParamsError& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
  out.text = out.profile.describe();
  return out;
}

NoiseModel parse_noise(const nlohmann::json& spec) {
  if (spec.is_null()) return NoiseModel::iid_gaussian();
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw ConfigError("noise requires a string field: type");
  }
  const std::string type = spec["type"].get<std::string>();
  if (type == "iid") return NoiseModel::iid_gaussian();
  if (type == "ar1") {
    try {
      return NoiseModel::ar1_gaussian(require_number(spec, "a"));
    } catch (const InvalidParamsError& e) {
      throw ConfigError(std::string("noise: ") + e.what());
    }
  }
  throw ConfigError("unknown noise type: " + type);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  ExperimentConfig cfg;
  cfg.path = path;
  try {
    in >> cfg.raw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.raw.is_object()) {
    throw ConfigError("config root must be an object");
  }
  if (cfg.raw.contains("command")) {
    if (!cfg.raw["command"].is_string()) {
      throw ConfigError("non-string field: command");
    }
    cfg.command = cfg.raw["command"].get<std::string>();
  }
  return cfg;
}

}  // namespace heatchan
