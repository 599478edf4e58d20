#include "heatchan/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatchan/errors.hpp"

namespace heatchan::bounds {

double fb_upper(double snr, double alpha) {
  if (!(snr >= 0.0) || !(alpha >= 0.0)) {
    throw InvalidParamsError("fb_upper requires snr >= 0 and alpha >= 0");
  }
  return 0.5 * std::log1p((1.0 + alpha) * snr);
}

double unit_cost(double alpha) {
  if (!(alpha >= 0.0)) {
    throw InvalidParamsError("unit_cost requires alpha >= 0");
  }
  return 0.5 * (1.0 + alpha);
}

double ach_limit(std::int64_t L, double alpha_sub) {
  if (L < 1 || !(alpha_sub >= 0.0)) {
    throw InvalidParamsError("ach_limit requires L >= 1 and alpha_sub >= 0");
  }
  if (alpha_sub == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::log1p(1.0 / alpha_sub) / (2.0 * static_cast<double>(L));
}

double ach_rate(double P, double sigma2, std::int64_t L, double alpha_sub,
                double eps) {
  if (!(P > 0.0) || !(sigma2 > 0.0) || L < 1 || !(alpha_sub >= 0.0) ||
      !(eps >= 0.0)) {
    throw InvalidParamsError("ach_rate parameter out of range");
  }
  if (!(eps < sigma2 + P)) {
    throw InvalidParamsError("ach_rate requires eps < sigma2 + P");
  }
  const double denom = 1.0 + alpha_sub * P;
  const double twoL = 2.0 * static_cast<double>(L) * denom;
  const double growth = P / denom;  // equals 1 - 2sP at the chosen s
  return -(sigma2 + alpha_sub * P + eps) / twoL +
         std::log1p(growth) / (2.0 * static_cast<double>(L)) +
         (sigma2 + P + alpha_sub * P - eps) / twoL / (1.0 + growth);
}

ScaleConstant beta_tilde(const HeatProfile& profile, std::int64_t ell0,
                         double rho, std::int64_t horizon) {
  if (ell0 < 1 || !(rho > 0.0 && rho < 1.0) || horizon < ell0 + 1) {
    throw InvalidParamsError("beta_tilde parameter out of range");
  }
  const double a0 = profile.alpha(ell0);
  if (!(a0 > 0.0)) {
    throw PremiseViolatedError("alpha_ell0 must be positive");
  }
  // Ratio premise alpha_{ell+1} >= rho * alpha_ell on the validation horizon
  // (with a sliver of float slack for exact-geometric equality).
  constexpr double kSlack = 1.0 - 1e-12;
  double prev = a0;
  for (std::int64_t ell = ell0; ell < horizon; ++ell) {
    const double next = profile.alpha(ell + 1);
    if (next < rho * prev * kSlack) {
      throw PremiseViolatedError("ratio premise fails at ell = " +
                                 std::to_string(ell));
    }
    prev = next;
  }
  // max over alpha_0..alpha_{ell0-1} with alpha_0 = 1.
  double head_max = 1.0;
  for (std::int64_t ell = 1; ell < ell0; ++ell) {
    head_max = std::max(head_max, profile.alpha(ell));
  }
  const double value =
      std::min({std::pow(rho, static_cast<double>(ell0 - 1)) * a0 / head_max,
                a0, std::pow(rho, static_cast<double>(ell0))});
  if (!(value > 0.0 && value < 1.0)) {
    throw PremiseViolatedError("scale constant fell outside (0,1)");
  }
  // beta_tilde * alpha_ell <= alpha_{ell+ell0} must hold on the horizon.
  for (std::int64_t ell = 0; ell + ell0 <= horizon; ++ell) {
    const double lhs = value * (ell == 0 ? 1.0 : profile.alpha(ell));
    if (lhs > profile.alpha(ell + ell0) / kSlack) {
      throw PremiseViolatedError("shift inequality fails at ell = " +
                                 std::to_string(ell));
    }
  }
  return {value, -std::log(value)};
}

double leakage_bound(std::int64_t b, std::int64_t L, double snr,
                     const HeatProfile& profile, double tol) {
  if (b < 0 || L < 1 || !(snr >= 0.0)) {
    throw InvalidParamsError("leakage_bound parameter out of range");
  }
  const double tail = alpha_tail_sum(profile, b, tol);
  return 0.5 * static_cast<double>(L) *
         std::log1p(static_cast<double>(L) * snr * tail);
}

SlopeTerms lowsnr_slope_terms(const HeatProfile& profile, std::int64_t L,
                              double xi2_over_sigma2) {
  if (L < 1 || !(xi2_over_sigma2 > 0.0)) {
    throw InvalidParamsError("lowsnr_slope_terms parameter out of range");
  }
  double gain = 1.0;  // alpha_0 = 1
  double penalty = 0.0;
  for (std::int64_t i = 2; i <= L; ++i) {
    const double a = profile.alpha(i - 1);
    gain += a;
    penalty += std::log1p(a * xi2_over_sigma2) / xi2_over_sigma2;
  }
  return {0.5 * gain, 0.5 * penalty};
}

}  // namespace heatchan::bounds
