#pragma once

#include <cstdint>

#include "heatchan/profiles.hpp"

namespace heatchan::bounds {

// Closed-form capacity bounds and constants. All rates are in nats per
// channel use; conversion to bits happens at the CLI layer only.

/// Feedback-capacity upper bound (1/2)*log(1 + (1+alpha)*snr).
double fb_upper(double snr, double alpha);

/// Capacity per unit cost (1/2)*(1+alpha), the low-SNR slope.
double unit_cost(double alpha);

/// High-power limit of the sparse-grid achievable rate,
/// (1/(2L))*log(1 + 1/alpha_sub). Returns +inf when alpha_sub == 0
/// (the rate is unbounded for such profiles).
double ach_limit(std::int64_t L, double alpha_sub);

/// Finite-power achievable-rate threshold of the sparse-grid scheme with
/// the Chernoff parameter s = -1/2 * 1/(1 + alpha_sub*P):
///   -(sigma2 + alpha_sub*P + eps) / (2L(1+alpha_sub*P))
///   + (1/(2L)) * log(1 + P/(1+alpha_sub*P))
///   + (sigma2 + P + alpha_sub*P - eps) / (2L(1+alpha_sub*P))
///     * 1/(1 + P/(1+alpha_sub*P)).
double ach_rate(double P, double sigma2, std::int64_t L, double alpha_sub,
                double eps);

struct ScaleConstant {
  double value;      // beta_tilde in (0,1)
  double minus_log;  // -log(beta_tilde): leading term of the capacity ceiling
};

/// Scale constant beta_tilde = min{rho^(ell0-1) * alpha_ell0 / max_{l<ell0}
/// alpha_l, alpha_ell0, rho^ell0} (with alpha_0 = 1), for profiles whose
/// ratio alpha_{ell+1}/alpha_ell stays >= rho from ell0 on. The premise is
/// validated over ell in [ell0, horizon]; PremiseViolatedError otherwise.
/// The returned value also satisfies 0 < beta_tilde < 1 and
/// beta_tilde*alpha_ell <= alpha_{ell+ell0} on the horizon.
ScaleConstant beta_tilde(const HeatProfile& profile, std::int64_t ell0,
                         double rho, std::int64_t horizon = 512);

/// Memory-leakage bound (L/2)*log(1 + L*snr*sum_{ell>b} alpha_ell).
double leakage_bound(std::int64_t b, std::int64_t L, double snr,
                     const HeatProfile& profile, double tol = 1e-12);

struct SlopeTerms {
  double gain;     // (1/2) * sum_{i=1..L} alpha_{i-1}
  double penalty;  // (1/2) * sum_{i=2..L} log(1+alpha_{i-1}*r)/r, r = xi^2/sigma2
};

/// Deterministic pieces of the low-SNR slope lower bound; the slope bound
/// at SNR -> 0 is gain - penalty (the mixture divergence term is estimated
/// separately).
SlopeTerms lowsnr_slope_terms(const HeatProfile& profile, std::int64_t L,
                              double xi2_over_sigma2);

}  // namespace heatchan::bounds
