#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heatchan {

/// Geometric envelope `alpha_ell <= c * q^ell` valid for every ell >= 1.
struct TailMajorant {
  double c = 0.0;
  double q = 0.0;
};

enum class ProfileKind {
  Geometric,     // alpha_ell = scale * rho^ell
  SubGeometric,  // alpha_ell = rho^(ell^kappa), kappa > 1
  EvenOnes,      // 1 at even ell, 0 at odd ell
  OddOnes,       // 1 at odd ell, 0 at even ell
  Zero,
  Explicit,      // finite list, zero beyond its end
};

enum class DecayClass {
  Geometric,
  FasterThanGeometric,
  Indeterminate,
  FiniteSupport,
};

/// Heat dissipation profile: the nonnegative weights {alpha_ell} coupling
/// the power transmitted ell steps ago to the current noise variance.
/// Immutable after construction; cheap to copy and safe to share.
class HeatProfile {
 public:
  static HeatProfile geometric(double rho, double scale = 1.0);
  static HeatProfile subgeometric(double rho, double kappa);
  static HeatProfile even_ones();
  static HeatProfile odd_ones();
  static HeatProfile zero();
  static HeatProfile from_coefficients(std::vector<double> coefficients,
                                       std::optional<TailMajorant> majorant = {});

  ProfileKind kind() const { return kind_; }

  /// Coefficient alpha_ell, ell >= 1. Total on every valid profile.
  double alpha(std::int64_t ell) const;

  /// Exact value of sup_{ell>=1} alpha_ell.
  double sup_alpha() const;

  DecayClass decay_class() const;

  /// Whether sum alpha_ell converges (conclusive for every kind).
  bool summable() const;

  /// Largest ell with alpha_ell possibly nonzero, when finitely supported.
  std::optional<std::int64_t> support_end() const;

  /// Geometric envelope valid for all ell >= 1, when one is known.
  std::optional<TailMajorant> majorant() const;

  /// True when alpha_ell = scale * rho^ell exactly.
  bool is_scaled_geometric() const { return kind_ == ProfileKind::Geometric; }
  double geometric_ratio() const;
  double geometric_scale() const;

  double rho() const { return rho_; }
  double kappa() const { return kappa_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// Short human-readable form, e.g. "geometric(rho=0.5)".
  std::string describe() const;

 private:
  HeatProfile() = default;

  ProfileKind kind_ = ProfileKind::Zero;
  double rho_ = 0.0;
  double kappa_ = 0.0;
  double scale_ = 1.0;
  std::vector<double> coefficients_;
  std::optional<TailMajorant> majorant_;
};

/// Lumped thermal model of the die: clock period tau [s], heat capacity
/// c_h [J/K], die-to-environment thermal resistance rho_th [K/W], ambient
/// temperature t_e [K], noise-variance-per-kelvin product lambda_w, and the
/// efficiency eta converting squared input symbols to heat power.
struct ThermalParams {
  double tau;
  double c_h;
  double rho_th;
  double t_e;
  double lambda_w;
  double eta;
};

/// Finite-horizon decay evidence for the bounded/unbounded dichotomy.
/// Conventions for the ratio series: a/0 = +inf for a > 0, and 0/0 = 0.
struct DecayDiagnostics {
  std::int64_t horizon = 0;
  std::vector<double> ratio;     // r_ell = alpha_{ell+1}/alpha_ell, ell = 1..horizon
  std::vector<double> log_rate;  // g_ell = log(1/alpha_ell)/ell
  std::vector<double> tail_min;  // min of ratio[j], j >= ell
  std::vector<double> tail_max;  // max of ratio[j], j >= ell
};

enum class Verdict { Bounded, Unbounded, Indeterminate };

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  /// True when the verdict rests on finite-horizon evidence only.
  bool heuristic = false;
  /// Known answer when the ratio test itself is silent.
  std::optional<Verdict> known;
  std::string evidence;
  DecayDiagnostics diagnostics;
};

/// Total coefficient sum alpha = sum_{ell>=1} alpha_ell, within tol.
/// Throws NotSummableError when the tail cannot be certified below tol.
double alpha_sum(const HeatProfile& profile, double tol = 1e-12);

/// Subsampled sum alpha^(L) = sum_{ell>=1} alpha_{ell*L}, within tol.
double alpha_subsampled(const HeatProfile& profile, std::int64_t L,
                        double tol = 1e-12);

/// Tail sum sum_{ell>b} alpha_ell, within tol.
double alpha_tail_sum(const HeatProfile& profile, std::int64_t b,
                      double tol = 1e-12);

DecayDiagnostics decay_diagnostics(const HeatProfile& profile,
                                   std::int64_t horizon);

/// Bounded/unbounded-capacity classification. Built-in kinds answer from
/// analytic metadata; explicit lists get a flagged finite-horizon heuristic.
Classification classify(const HeatProfile& profile, std::int64_t horizon);

/// Converts the lumped thermal model to a (profile, sigma2) pair:
/// alpha_ell = eta*lambda_w*(tau/c_h) * exp(-tau*ell/(rho_th*c_h)) and
/// sigma2 = lambda_w * t_e.
std::pair<HeatProfile, double> profile_from_physics(const ThermalParams& params);

}  // namespace heatchan
