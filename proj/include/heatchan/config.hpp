#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "heatchan/channel.hpp"
#include "heatchan/profiles.hpp"

namespace heatchan {

/// Parsed profile specification. Physics-derived profiles also carry the
/// ambient noise variance implied by the thermal parameters.
struct ProfileSpec {
  HeatProfile profile = HeatProfile::zero();
  std::optional<double> sigma2;  // set by {"type": "physics", ...}
  std::string text;              // echo for CSV/summaries
};

/// Profile grammar:
///   {"type":"geometric","rho":0.5}            (optional "scale")
///   {"type":"subgeometric","rho":0.5,"kappa":2}
///   {"type":"even_ones"} | {"type":"odd_ones"} | {"type":"zero"}
///   {"type":"explicit","coefficients":[...],
///    "tail_majorant":{"c":...,"q":...}}       (majorant optional)
///   {"type":"physics","tau":...,"c_h":...,"rho_th":...,"t_e":...,
///    "lambda_w":...,"eta":...}
/// Throws ConfigError naming the offending field.
ProfileSpec parse_profile(const nlohmann::json& spec);

/// {"type":"iid"} or {"type":"ar1","a":0.4}; defaults to IID Gaussian.
NoiseModel parse_noise(const nlohmann::json& spec);

struct ExperimentConfig {
  std::string command;
  nlohmann::json raw;
  std::string path;  // where the config was loaded from, for messages
};

ExperimentConfig load_config(const std::string& path);

}  // namespace heatchan
