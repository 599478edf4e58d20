#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatchan/profiles.hpp"

namespace heatchan {

/// A Monte Carlo point estimate with its sampling uncertainty.
/// std_error = sample standard deviation / sqrt(trials).
struct EstimateReport {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string config;    // configuration echo, hashed into CSV output
  bool clamped = false;  // value was clipped at 0 (vacuous lower bound)

  std::uint64_t config_hash() const;  // FNV-1a over the config echo
};

/// Blockwise on-off input: within each length-L block the first symbol is
/// xi with probability delta and the whole block is zero otherwise.
/// Consistency with the average-power constraint requires
/// (xi^2/sigma2) * delta = L * snr.
struct OnOffConfig {
  double xi = 0.0;
  double delta = 0.0;
  std::int64_t block_length = 1;
  double sigma2 = 1.0;
  HeatProfile profile = HeatProfile::zero();

  /// Throws ConfigInconsistentError when the power relation is violated
  /// beyond 1e-12 (relative).
  void validate(double snr) const;
};

namespace estimate {

/// Relative entropy D(N(mu1, diag k1) || N(mu2, diag k2)) in nats.
double gaussian_kl(const Eigen::ArrayXd& mu1, const Eigen::ArrayXd& k1,
                   const Eigen::ArrayXd& mu2, const Eigen::ArrayXd& k2);

/// Monte Carlo estimate of D(delta*P1 + (1-delta)*P0 || P0) where
///   P1 = N((xi,0,...,0), diag(sigma2, sigma2+alpha_1 xi^2, ...,
///                             sigma2+alpha_{L-1} xi^2))
///   P0 = N(0, sigma2 * I_L),
/// i.e. the divergence between the one-block output laws with and without
/// the on-symbol, at the all-zero past. `past_power`, when nonempty, adds
/// per-coordinate variance from a frozen nonzero past to both laws.
EstimateReport mixture_kl_mc(double delta, double xi, std::int64_t L,
                             const HeatProfile& profile, double sigma2,
                             std::int64_t trials, std::uint64_t seed,
                             const Eigen::ArrayXd& past_power = Eigen::ArrayXd());

/// Mutual information (nats) of on-off keying {0 w.p. 1-delta, xi w.p. delta}
/// over the memoryless Gaussian channel Y = x + sigma*U, by adaptive
/// quadrature of the output entropy (absolute error < 1e-9).
double onoff_mi(double xi, double delta, double sigma2);

struct MiLowerReport {
  EstimateReport report;  // term_gain - term_penalty - term_mixture, >= 0
  double term_gain = 0.0;
  double term_penalty = 0.0;
  double term_mixture = 0.0;
};

/// Blockwise on-off mutual-information lower bound at the given snr:
///   (1/2) snr sum_{i=1..L} alpha_{i-1}/(1 + alpha L snr)
///   - (1/2) snr sum_{i=2..L} log(1+alpha_{i-1} xi^2/sigma2)/(xi^2/sigma2)
///   - (1/L) * mixture divergence (Monte Carlo, zero-past upper bound).
/// Negative values are clamped to 0 and flagged.
MiLowerReport mi_lower_onoff(const OnOffConfig& cfg, double snr,
                             std::int64_t trials, std::uint64_t seed);

struct SlopePoint {
  double snr = 0.0;
  double delta = 0.0;
  double bound = 0.0;      // mutual-information lower bound, nats
  double std_error = 0.0;
  double ratio = 0.0;      // bound / snr
  double fb_ratio = 0.0;   // fb_upper(snr, alpha) / snr
  bool clamped = false;
};

struct SlopeEstimate {
  EstimateReport best;          // max over the grid of bound/snr
  std::vector<SlopePoint> points;
  double unit_cost_upper = 0.0; // (1+alpha)/2 bracket
};

/// Runs mi_lower_onoff across a decreasing snr grid in (0, 0.1] and reports
/// the largest bound/snr as the unit-cost lower estimate, bracketed by the
/// closed-form upper bounds.
SlopeEstimate slope_estimate(const HeatProfile& profile, double sigma2,
                             std::span<const double> snr_grid, std::int64_t L,
                             double xi2_over_sigma2, std::int64_t trials,
                             std::uint64_t seed);

struct ConcentrationResult {
  double empirical_prob = 0.0;   // fraction of trials inside the typical set
  double exact_mean_y = 0.0;     // finite-n mean of |Y|^2 / m
  double exact_mean_z = 0.0;     // finite-n mean of |Z|^2 / m
  double empirical_mean_y = 0.0;
  double empirical_mean_z = 0.0;
  double stderr_mean_y = 0.0;
  double stderr_mean_z = 0.0;
  double stderr_prob = 0.0;
  std::int64_t grid_samples = 0;  // m = floor(n/L)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Simulates the sparse-grid Gaussian-input scheme (inputs N(0,P) at grid
/// positions 1, L+1, ..., zeros elsewhere) and measures how often the
/// normalized output/noise energies land within eps of their asymptotic
/// means sigma2+P+alpha_sub*P and sigma2+alpha_sub*P. Also returns the
/// exact finite-n means
///   sigma2 + P + (P/m) sum_{k=1..m-1} sum_{l=1..k} alpha_{lL}
/// (and the same without +P for the noise part).
ConcentrationResult concentration_check(const HeatProfile& profile, double P,
                                        double sigma2, std::int64_t L,
                                        std::int64_t n, double eps,
                                        std::int64_t trials, std::uint64_t seed);

}  // namespace estimate
}  // namespace heatchan
