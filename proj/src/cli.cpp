#include "heatchan/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "heatchan/bounds.hpp"
#include "heatchan/codec.hpp"
#include "heatchan/errors.hpp"
#include "heatchan/estimate.hpp"
#include "heatchan/rng.hpp"

namespace heatchan::cli {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

double req_number(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw ConfigError("missing or non-numeric field: " + field);
  }
  return j[field].get<double>();
}

std::int64_t req_int(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    throw ConfigError("missing or non-integer field: " + field);
  }
  return j[field].get<std::int64_t>();
}

std::int64_t opt_int(const nlohmann::json& j, const std::string& field,
                     std::int64_t fallback) {
  return j.contains(field) ? req_int(j, field) : fallback;
}

double opt_number(const nlohmann::json& j, const std::string& field,
                  double fallback) {
  return j.contains(field) ? req_number(j, field) : fallback;
}

bool opt_bool(const nlohmann::json& j, const std::string& field, bool fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_boolean()) throw ConfigError("non-boolean field: " + field);
  return j[field].get<bool>();
}

std::vector<double> req_number_array(const nlohmann::json& j,
                                     const std::string& field) {
  if (!j.contains(field) || !j[field].is_array() || j[field].empty()) {
    throw ConfigError("missing or empty array field: " + field);
  }
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number()) throw ConfigError("non-numeric entry in field: " + field);
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::int64_t> int_array_or_scalar(const nlohmann::json& j,
                                              const std::string& field) {
  if (!j.contains(field)) throw ConfigError("missing field: " + field);
  std::vector<std::int64_t> out;
  if (j[field].is_number_integer()) {
    out.push_back(j[field].get<std::int64_t>());
  } else if (j[field].is_array()) {
    for (const auto& v : j[field]) {
      if (!v.is_number_integer()) {
        throw ConfigError("non-integer entry in field: " + field);
      }
      out.push_back(v.get<std::int64_t>());
    }
  } else {
    throw ConfigError("field must be an integer or integer array: " + field);
  }
  if (out.empty()) throw ConfigError("empty array field: " + field);
  return out;
}

struct Common {
  ProfileSpec profile;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
  std::string output;
  double rate_scale = 1.0;  // 1 for nats, 1/log(2) for bits
};

Common parse_common(const ExperimentConfig& cfg, const RunOptions& opts) {
  Common c;
  if (!cfg.raw.contains("profile")) throw ConfigError("missing field: profile");
  c.profile = parse_profile(cfg.raw["profile"]);
  if (cfg.raw.contains("sigma2")) {
    c.sigma2 = req_number(cfg.raw, "sigma2");
  } else if (c.profile.sigma2) {
    c.sigma2 = *c.profile.sigma2;
  } else {
    throw ConfigError("missing field: sigma2");
  }
  if (!(c.sigma2 > 0.0)) throw ConfigError("field sigma2 must be positive");
  if (opts.seed_override) {
    c.seed = *opts.seed_override;
  } else if (cfg.raw.contains("seed")) {
    if (!cfg.raw["seed"].is_number_integer()) {
      throw ConfigError("non-integer field: seed");
    }
    c.seed = cfg.raw["seed"].get<std::uint64_t>();
  }
  if (opts.output_override) {
    c.output = *opts.output_override;
  } else if (cfg.raw.contains("output") && cfg.raw["output"].is_string()) {
    c.output = cfg.raw["output"].get<std::string>();
  } else {
    throw ConfigError("missing string field: output");
  }
  c.rate_scale = opts.bits ? 1.0 / kLog2 : 1.0;
  return c;
}

void run_bounds(const ExperimentConfig& cfg, const RunOptions& opts,
                std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const auto snr_grid = req_number_array(cfg.raw, "snr_grid");
  const std::int64_t L = opt_int(cfg.raw, "L", 1);
  const double alpha = alpha_sum(c.profile.profile);
  const double alpha_sub = alpha_subsampled(c.profile.profile, L);
  const double eps = opt_number(cfg.raw, "eps", 1e-3 * c.sigma2);

  CsvWriter csv(c.output, {"snr", "fb_upper", "unit_cost", "ach_limit",
                           "ach_rate", "alpha", "alpha_sub"});
  for (double snr : snr_grid) {
    const double P = snr * c.sigma2;
    csv.row({fmt(snr), fmt(c.rate_scale * bounds::fb_upper(snr, alpha)),
             fmt(c.rate_scale * bounds::unit_cost(alpha)),
             fmt(c.rate_scale * bounds::ach_limit(L, alpha_sub)),
             fmt(c.rate_scale * bounds::ach_rate(P, c.sigma2, L, alpha_sub, eps)),
             fmt(alpha), fmt(alpha_sub)});
  }
  summary << "bounds: " << c.profile.text << " alpha=" << fmt(alpha)
          << " alpha_sub(L=" << L << ")=" << fmt(alpha_sub) << " rows="
          << snr_grid.size() << " -> " << c.output << "\n";
}

void run_simulate(const ExperimentConfig& cfg, const RunOptions& opts,
                  std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const std::int64_t n = req_int(cfg.raw, "n");
  if (n < 1) throw ConfigError("field n must be >= 1");
  const NoiseModel noise =
      parse_noise(cfg.raw.contains("noise") ? cfg.raw["noise"] : nlohmann::json());

  std::vector<double> xs(static_cast<std::size_t>(n), 0.0);
  std::string input_kind = "zeros";
  if (cfg.raw.contains("input")) {
    const auto& in = cfg.raw["input"];
    if (!in.is_object() || !in.contains("type") || !in["type"].is_string()) {
      throw ConfigError("input requires a string field: type");
    }
    input_kind = in["type"].get<std::string>();
    if (input_kind == "zeros") {
      // already zero
    } else if (input_kind == "constant") {
      std::fill(xs.begin(), xs.end(), req_number(in, "value"));
    } else if (input_kind == "gaussian") {
      const double power = req_number(in, "power");
      if (!(power > 0.0)) throw ConfigError("input power must be positive");
      auto rng = make_engine(c.seed, streams::kConcentrationInput, 0);
      std::normal_distribution<double> gauss(0.0, std::sqrt(power));
      for (auto& x : xs) x = gauss(rng);
    } else {
      throw ConfigError("unknown input type: " + input_kind);
    }
  }

  Channel chan(c.profile.profile, c.sigma2, noise,
               derive_seed(c.seed, streams::kChannelNoise, 0));
  auto trans = chan.transmit(xs);

  CsvWriter csv(c.output, {"k", "x", "theta", "y"});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    csv.row({fmt(static_cast<std::int64_t>(i + 1)), fmt(xs[i]),
             fmt(trans.theta[i]), fmt(trans.y[i])});
  }
  summary << "simulate: " << c.profile.text << " n=" << n << " input="
          << input_kind << " avg_power=" << fmt(trans.avg_power) << " -> "
          << c.output << "\n";
}

void run_slope(const ExperimentConfig& cfg, const RunOptions& opts,
               std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const auto snr_grid = req_number_array(cfg.raw, "snr_grid");
  const std::int64_t L = req_int(cfg.raw, "L");
  const double r = req_number(cfg.raw, "xi2_over_sigma2");
  const std::int64_t trials = req_int(cfg.raw, "trials");

  const auto slope = estimate::slope_estimate(c.profile.profile, c.sigma2,
                                              snr_grid, L, r, trials, c.seed);

  CsvWriter csv(c.output,
                {"config_hash", "snr", "delta", "estimate", "stderr", "trials",
                 "seed", "clamped", "ratio", "fb_ratio", "unit_cost"});
  const std::string hash = std::to_string(slope.best.config_hash());
  for (const auto& pt : slope.points) {
    csv.row({hash, fmt(pt.snr), fmt(pt.delta),
             fmt(c.rate_scale * pt.bound), fmt(c.rate_scale * pt.std_error),
             fmt(trials), fmt(c.seed), pt.clamped ? "1" : "0",
             fmt(c.rate_scale * pt.ratio), fmt(c.rate_scale * pt.fb_ratio),
             fmt(c.rate_scale * slope.unit_cost_upper)});
  }
  summary << "slope: " << c.profile.text << " estimate="
          << fmt(c.rate_scale * slope.best.value) << " stderr="
          << fmt(c.rate_scale * slope.best.std_error) << " upper="
          << fmt(c.rate_scale * slope.unit_cost_upper) << " -> " << c.output
          << "\n";
}

void run_concentration(const ExperimentConfig& cfg, const RunOptions& opts,
                       std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const double P = req_number(cfg.raw, "p");
  const std::int64_t L = req_int(cfg.raw, "L");
  const auto n_grid = int_array_or_scalar(cfg.raw, "n");
  const std::int64_t trials = req_int(cfg.raw, "trials");
  const double alpha_sub = alpha_subsampled(c.profile.profile, L);
  const double eps = cfg.raw.contains("eps")
                         ? req_number(cfg.raw, "eps")
                         : opt_number(cfg.raw, "eps_frac", 0.05) *
                               (c.sigma2 + P + alpha_sub * P);

  CsvWriter csv(c.output, {"n", "m", "empirical_prob", "stderr_prob",
                           "exact_mean_y", "exact_mean_z", "empirical_mean_y",
                           "empirical_mean_z", "stderr_mean_y", "stderr_mean_z",
                           "trials", "seed"});
  for (std::int64_t n : n_grid) {
    const auto res = estimate::concentration_check(c.profile.profile, P,
                                                   c.sigma2, L, n, eps, trials,
                                                   c.seed);
    csv.row({fmt(n), fmt(res.grid_samples), fmt(res.empirical_prob),
             fmt(res.stderr_prob), fmt(res.exact_mean_y), fmt(res.exact_mean_z),
             fmt(res.empirical_mean_y), fmt(res.empirical_mean_z),
             fmt(res.stderr_mean_y), fmt(res.stderr_mean_z), fmt(trials),
             fmt(c.seed)});
    summary << "concentration: n=" << n << " prob=" << fmt(res.empirical_prob)
            << " exact_mean_y=" << fmt(res.exact_mean_y) << "\n";
  }
  summary << "concentration: eps=" << fmt(eps) << " -> " << c.output << "\n";
}

void run_bler(const ExperimentConfig& cfg, const RunOptions& opts,
              std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const double P = req_number(cfg.raw, "p");
  const std::int64_t L = req_int(cfg.raw, "L");
  const auto n_grid = int_array_or_scalar(cfg.raw, "n");
  std::vector<double> rates;
  if (cfg.raw.contains("rate_nats") && cfg.raw["rate_nats"].is_array()) {
    rates = req_number_array(cfg.raw, "rate_nats");
  } else {
    rates.push_back(req_number(cfg.raw, "rate_nats"));
  }
  const std::int64_t trials = req_int(cfg.raw, "trials");

  codec::BlerOptions bopts;
  bopts.fresh_codebook_per_trial = opt_bool(cfg.raw, "fresh_codebook", false);
  bopts.grid_start = opt_int(cfg.raw, "grid_start", 1);
  bopts.max_messages =
      opt_int(cfg.raw, "max_messages", codec::Codebook::kDefaultMaxMessages);
  bopts.noise =
      parse_noise(cfg.raw.contains("noise") ? cfg.raw["noise"] : nlohmann::json());

  CsvWriter csv(c.output, {"profile", "p", "l", "n", "rate", "bler", "stderr",
                           "power_violation_fraction", "seed"});
  for (std::int64_t n : n_grid) {
    for (double rate : rates) {
      const auto res = codec::bler_sim(c.profile.profile, c.sigma2, P, L, n,
                                       rate, trials, c.seed, bopts);
      csv.row({c.profile.text, fmt(P), fmt(L), fmt(n), fmt(c.rate_scale * rate),
               fmt(res.report.value), fmt(res.report.std_error),
               fmt(res.power_violation_fraction), fmt(c.seed)});
      summary << "bler: n=" << n << " rate=" << fmt(rate) << " |M|="
              << res.num_messages << " bler=" << fmt(res.report.value) << " +/- "
              << fmt(res.report.std_error) << "\n";
    }
  }
  summary << "bler: " << c.profile.text << " -> " << c.output << "\n";
}

void run_classify(const ExperimentConfig& cfg, const RunOptions& opts,
                  std::ostream& summary) {
  const Common c = parse_common(cfg, opts);
  const std::int64_t horizon = opt_int(cfg.raw, "horizon", 64);
  const auto cls = classify(c.profile.profile, horizon);

  CsvWriter csv(c.output,
                {"ell", "alpha", "ratio", "log_rate", "tail_min", "tail_max"});
  for (std::size_t i = 0; i < cls.diagnostics.ratio.size(); ++i) {
    const std::int64_t ell = static_cast<std::int64_t>(i) + 1;
    csv.row({fmt(ell), fmt(c.profile.profile.alpha(ell)),
             fmt(cls.diagnostics.ratio[i]), fmt(cls.diagnostics.log_rate[i]),
             fmt(cls.diagnostics.tail_min[i]), fmt(cls.diagnostics.tail_max[i])});
  }
  const auto verdict_name = [](Verdict v) {
    switch (v) {
      case Verdict::Bounded:
        return "bounded";
      case Verdict::Unbounded:
        return "unbounded";
      default:
        return "indeterminate";
    }
  };
  summary << "classify: " << c.profile.text << " verdict="
          << verdict_name(cls.verdict);
  if (cls.heuristic) summary << " (heuristic)";
  if (cls.known) summary << " known=" << verdict_name(*cls.known);
  summary << "\n  evidence: " << cls.evidence << "\n  -> " << c.output << "\n";
}

}  // namespace

bool is_known_command(const std::string& command) {
  return command == "bounds" || command == "simulate" || command == "slope" ||
         command == "concentration" || command == "bler" ||
         command == "classify";
}

void run(const ExperimentConfig& cfg, const RunOptions& opts,
         std::ostream& summary) {
  if (cfg.command.empty()) {
    throw ConfigError("missing field: command");
  }
  if (cfg.command == "bounds") {
    run_bounds(cfg, opts, summary);
  } else if (cfg.command == "simulate") {
    run_simulate(cfg, opts, summary);
  } else if (cfg.command == "slope") {
    run_slope(cfg, opts, summary);
  } else if (cfg.command == "concentration") {
    run_concentration(cfg, opts, summary);
  } else if (cfg.command == "bler") {
    run_bler(cfg, opts, summary);
  } else if (cfg.command == "classify") {
    run_classify(cfg, opts, summary);
  } else {
    throw ConfigError("unknown command: " + cfg.command);
  }
}

}  // namespace heatchan::cli
