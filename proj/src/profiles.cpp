#include "heatchan/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heatchan/errors.hpp"

namespace heatchan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kSumIterationBudget = 1 << 24;

double require_in_unit_interval(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw InvalidParamsError(std::string(what) + " must lie in (0,1)");
  }
  return rho;
}

}  // namespace

HeatProfile HeatProfile::geometric(double rho, double scale) {
  require_in_unit_interval(rho, "geometric rho");
  if (!(scale > 0.0)) {
    throw InvalidParamsError("geometric scale must be positive");
  }
  HeatProfile p;
  p.kind_ = ProfileKind::Geometric;
  p.rho_ = rho;
  p.scale_ = scale;
  p.majorant_ = TailMajorant{scale, rho};
  return p;
}

HeatProfile HeatProfile::subgeometric(double rho, double kappa) {
  require_in_unit_interval(rho, "subgeometric rho");
  if (!(kappa > 1.0)) {
    throw InvalidParamsError("subgeometric kappa must exceed 1");
  }
  HeatProfile p;
  p.kind_ = ProfileKind::SubGeometric;
  p.rho_ = rho;
  p.kappa_ = kappa;
  // ell^kappa >= ell for ell >= 1, so rho^(ell^kappa) <= rho^ell.
  p.majorant_ = TailMajorant{1.0, rho};
  return p;
}

HeatProfile HeatProfile::even_ones() {
  HeatProfile p;
  p.kind_ = ProfileKind::EvenOnes;
  return p;
}

HeatProfile HeatProfile::odd_ones() {
  HeatProfile p;
  p.kind_ = ProfileKind::OddOnes;
  return p;
}

HeatProfile HeatProfile::zero() {
  HeatProfile p;
  p.kind_ = ProfileKind::Zero;
  return p;
}

HeatProfile HeatProfile::from_coefficients(std::vector<double> coefficients,
                                           std::optional<TailMajorant> majorant) {
  for (double c : coefficients) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidParamsError("explicit coefficients must be finite and nonnegative");
    }
  }
  if (majorant && (!(majorant->c >= 0.0) || !(majorant->q > 0.0 && majorant->q < 1.0))) {
    throw InvalidParamsError("tail majorant requires c >= 0 and q in (0,1)");
  }
  HeatProfile p;
  p.kind_ = ProfileKind::Explicit;
  p.coefficients_ = std::move(coefficients);
  p.majorant_ = majorant;
  return p;
}

double HeatProfile::alpha(std::int64_t ell) const {
  if (ell < 1) {
    throw InvalidParamsError("alpha index must be >= 1");
  }
  switch (kind_) {
    case ProfileKind::Geometric:
      return scale_ * std::pow(rho_, static_cast<double>(ell));
    case ProfileKind::SubGeometric:
      return std::exp(std::pow(static_cast<double>(ell), kappa_) * std::log(rho_));
    case ProfileKind::EvenOnes:
      return (ell % 2 == 0) ? 1.0 : 0.0;
    case ProfileKind::OddOnes:
      return (ell % 2 == 1) ? 1.0 : 0.0;
    case ProfileKind::Zero:
      return 0.0;
    case ProfileKind::Explicit:
      return (ell <= static_cast<std::int64_t>(coefficients_.size()))
                 ? coefficients_[static_cast<std::size_t>(ell - 1)]
                 : 0.0;
  }
  return 0.0;
}

double HeatProfile::sup_alpha() const {
  switch (kind_) {
    case ProfileKind::Geometric:
      return scale_ * rho_;
    case ProfileKind::SubGeometric:
      return rho_;
    case ProfileKind::EvenOnes:
    case ProfileKind::OddOnes:
      return 1.0;
    case ProfileKind::Zero:
      return 0.0;
    case ProfileKind::Explicit:
      return coefficients_.empty()
                 ? 0.0
                 : *std::max_element(coefficients_.begin(), coefficients_.end());
  }
  return 0.0;
}

DecayClass HeatProfile::decay_class() const {
  switch (kind_) {
    case ProfileKind::Geometric:
      return DecayClass::Geometric;
    case ProfileKind::SubGeometric:
      return DecayClass::FasterThanGeometric;
    case ProfileKind::EvenOnes:
    case ProfileKind::OddOnes:
      return DecayClass::Indeterminate;
    case ProfileKind::Zero:
    case ProfileKind::Explicit:
      return DecayClass::FiniteSupport;
  }
  return DecayClass::Indeterminate;
}

bool HeatProfile::summable() const {
  switch (kind_) {
    case ProfileKind::EvenOnes:
    case ProfileKind::OddOnes:
      return false;
    default:
      return true;
  }
}

std::optional<std::int64_t> HeatProfile::support_end() const {
  if (kind_ == ProfileKind::Zero) return 0;
  if (kind_ == ProfileKind::Explicit) {
    return static_cast<std::int64_t>(coefficients_.size());
  }
  return std::nullopt;
}

std::optional<TailMajorant> HeatProfile::majorant() const { return majorant_; }

double HeatProfile::geometric_ratio() const {
  if (!is_scaled_geometric()) {
    throw ModeMismatchError("profile is not scaled-geometric");
  }
  return rho_;
}

double HeatProfile::geometric_scale() const {
  if (!is_scaled_geometric()) {
    throw ModeMismatchError("profile is not scaled-geometric");
  }
  return scale_;
}

std::string HeatProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ProfileKind::Geometric:
      os << "geometric(rho=" << rho_;
      if (scale_ != 1.0) os << ",scale=" << scale_;
      os << ")";
      break;
    case ProfileKind::SubGeometric:
      os << "subgeometric(rho=" << rho_ << ",kappa=" << kappa_ << ")";
      break;
    case ProfileKind::EvenOnes:
      os << "even_ones";
      break;
    case ProfileKind::OddOnes:
      os << "odd_ones";
      break;
    case ProfileKind::Zero:
      os << "zero";
      break;
    case ProfileKind::Explicit:
      os << "explicit[" << coefficients_.size() << "]";
      break;
  }
  return os.str();
}

namespace {

// Certified summation of alpha over the arithmetic progression
// {start, start+stride, ...}. The tail beyond the last evaluated index is
// bounded either by the finite support or by a geometric envelope.
double certified_sum(const HeatProfile& p, std::int64_t start, std::int64_t stride,
                     double tol) {
  switch (p.kind()) {
    case ProfileKind::Zero:
      return 0.0;
    case ProfileKind::Geometric: {
      // scale * sum_{ell = start, start+stride, ...} rho^ell
      const double rho = p.geometric_ratio();
      const double head = std::pow(rho, static_cast<double>(start));
      const double step = std::pow(rho, static_cast<double>(stride));
      return p.geometric_scale() * head / (1.0 - step);
    }
    case ProfileKind::EvenOnes:
      throw NotSummableError("even-indexed coefficients are all 1; sum diverges");
    case ProfileKind::OddOnes:
      if (start % 2 == 0 && stride % 2 == 0) {
        return 0.0;  // every sampled index is even, hence zero
      }
      throw NotSummableError("odd-indexed coefficients are all 1; sum diverges");
    case ProfileKind::Explicit: {
      const std::int64_t end = *p.support_end();
      double s = 0.0;
      for (std::int64_t ell = start; ell <= end; ell += stride) {
        s += p.alpha(ell);
      }
      return s;
    }
    case ProfileKind::SubGeometric: {
      // alpha_ell = rho^(ell^kappa). For ell >= m, ell^kappa >= ell * m^(kappa-1),
      // giving the envelope alpha_ell <= q_m^ell with q_m = rho^(m^(kappa-1)).
      const double log_rho = std::log(p.rho());
      double s = 0.0;
      std::int64_t ell = start;
      for (std::int64_t it = 0; it < kSumIterationBudget; ++it) {
        s += std::exp(std::pow(static_cast<double>(ell), p.kappa()) * log_rho);
        const std::int64_t next = ell + stride;
        const double q = std::exp(std::pow(static_cast<double>(next), p.kappa() - 1.0) *
                                  log_rho);
        const double tail = std::pow(q, static_cast<double>(next)) / (1.0 - q);
        if (tail < tol) {
          return s;
        }
        ell = next;
      }
      throw NotSummableError("tail not certified within iteration budget");
    }
  }
  throw NotSummableError("unknown profile kind");
}

}  // namespace

double alpha_sum(const HeatProfile& profile, double tol) {
  if (!(tol > 0.0)) throw InvalidParamsError("tol must be positive");
  return certified_sum(profile, 1, 1, tol);
}

double alpha_subsampled(const HeatProfile& profile, std::int64_t L, double tol) {
  if (L < 1) throw InvalidParamsError("L must be >= 1");
  if (!(tol > 0.0)) throw InvalidParamsError("tol must be positive");
  return certified_sum(profile, L, L, tol);
}

double alpha_tail_sum(const HeatProfile& profile, std::int64_t b, double tol) {
  if (b < 0) throw InvalidParamsError("b must be >= 0");
  if (!(tol > 0.0)) throw InvalidParamsError("tol must be positive");
  return certified_sum(profile, b + 1, 1, tol);
}

DecayDiagnostics decay_diagnostics(const HeatProfile& profile, std::int64_t horizon) {
  if (horizon < 2) throw InvalidParamsError("horizon must be >= 2");
  DecayDiagnostics d;
  d.horizon = horizon;
  d.ratio.reserve(static_cast<std::size_t>(horizon));
  d.log_rate.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t ell = 1; ell <= horizon; ++ell) {
    const double a = profile.alpha(ell);
    const double b = profile.alpha(ell + 1);
    double r;
    if (a == 0.0) {
      r = (b == 0.0) ? 0.0 : kInf;  // 0/0 = 0, a/0 = inf
    } else {
      r = b / a;
    }
    d.ratio.push_back(r);
    d.log_rate.push_back(a == 0.0 ? kInf
                                  : std::log(1.0 / a) / static_cast<double>(ell));
  }
  d.tail_min.assign(d.ratio.size(), 0.0);
  d.tail_max.assign(d.ratio.size(), 0.0);
  double mn = kInf, mx = -kInf;
  for (std::size_t i = d.ratio.size(); i-- > 0;) {
    mn = std::min(mn, d.ratio[i]);
    mx = std::max(mx, d.ratio[i]);
    d.tail_min[i] = mn;
    d.tail_max[i] = mx;
  }
  return d;
}

Classification classify(const HeatProfile& profile, std::int64_t horizon) {
  Classification c;
  c.diagnostics = decay_diagnostics(profile, horizon);
  switch (profile.kind()) {
    case ProfileKind::Geometric:
      c.verdict = Verdict::Bounded;
      c.evidence = "ratio alpha_{ell+1}/alpha_ell converges to rho > 0";
      return c;
    case ProfileKind::SubGeometric:
      c.verdict = Verdict::Unbounded;
      c.evidence = "ratio alpha_{ell+1}/alpha_ell converges to 0";
      return c;
    case ProfileKind::Zero:
      c.verdict = Verdict::Unbounded;
      c.evidence =
          "all coefficients vanish: sparse-grid signalling sees constant noise";
      return c;
    case ProfileKind::EvenOnes:
      c.verdict = Verdict::Indeterminate;
      c.known = Verdict::Bounded;
      c.evidence =
          "ratio oscillates between 0 and inf; known bounded: the channel splits "
          "into two interleaved subchannels with constant coefficients";
      return c;
    case ProfileKind::OddOnes:
      c.verdict = Verdict::Indeterminate;
      c.known = Verdict::Unbounded;
      c.evidence =
          "ratio oscillates between 0 and inf; known unbounded: signalling on an "
          "even-spaced grid cancels all interference";
      return c;
    case ProfileKind::Explicit:
      break;
  }
  // Finite-horizon heuristic for explicit lists: look at the last quarter of
  // the ratio series.
  c.heuristic = true;
  const std::size_t h = c.diagnostics.ratio.size();
  const std::size_t from = (3 * h) / 4;
  constexpr double kThreshold = 1e-6;
  const double mn = c.diagnostics.tail_min[from];
  const double mx = c.diagnostics.tail_max[from];
  if (mn >= kThreshold) {
    c.verdict = Verdict::Bounded;
    c.evidence = "heuristic: trailing ratios stay above threshold";
  } else if (mx <= kThreshold) {
    c.verdict = Verdict::Unbounded;
    c.evidence = "heuristic: trailing ratios stay below threshold";
  } else {
    c.verdict = Verdict::Indeterminate;
    c.evidence = "heuristic: trailing ratios straddle the threshold";
  }
  return c;
}

std::pair<HeatProfile, double> profile_from_physics(const ThermalParams& params) {
  const double fields[] = {params.tau,      params.c_h,      params.rho_th,
                           params.t_e,      params.lambda_w, params.eta};
  for (double f : fields) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw InvalidParamsError("thermal parameters must be positive and finite");
    }
  }
  const double rho = std::exp(-params.tau / (params.rho_th * params.c_h));
  const double scale = params.eta * params.lambda_w * params.tau / params.c_h;
  const double sigma2 = params.lambda_w * params.t_e;
  return {HeatProfile::geometric(rho, scale), sigma2};
}

}  // namespace heatchan
