#include "heatchan/channel.hpp"

#include <cmath>

#include "heatchan/errors.hpp"

namespace heatchan {

NoiseModel NoiseModel::ar1_gaussian(double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw InvalidParamsError("AR(1) coefficient must lie in [0,1)");
  }
  NoiseModel m;
  m.kind = Kind::AR1Gaussian;
  m.a = a;
  return m;
}

double NoiseProcess::draw(std::mt19937_64& rng) {
  if (model_.kind == NoiseModel::Kind::IIDGaussian) {
    return gauss_(rng);
  }
  if (!started_) {
    started_ = true;
    prev_ = gauss_(rng);  // stationary start: U_1 ~ N(0,1)
    return prev_;
  }
  const double innovation = std::sqrt(1.0 - model_.a * model_.a) * gauss_(rng);
  prev_ = model_.a * prev_ + innovation;
  return prev_;
}

namespace {

// Smallest horizon H with c*q^(H+1)/(1-q) <= bound (per unit of max x^2).
std::int64_t horizon_for_majorant(const TailMajorant& m, double bound) {
  if (m.c <= 0.0) return 0;
  std::int64_t h = 0;
  double tail = m.c * m.q / (1.0 - m.q);
  while (tail > bound && h < (1 << 24)) {
    tail *= m.q;
    ++h;
  }
  return h;
}

}  // namespace

Channel::Channel(HeatProfile profile, double sigma2, NoiseModel noise,
                 std::uint64_t seed, HistoryMode mode)
    : profile_(std::move(profile)),
      sigma2_(sigma2),
      noise_(noise),
      rng_(seed) {
  if (!(sigma2 > 0.0)) {
    throw InvalidParamsError("sigma2 must be positive");
  }
  switch (mode.kind) {
    case HistoryMode::Kind::Recursive:
      if (!profile_.is_scaled_geometric()) {
        throw ModeMismatchError(
            "recursive history requires a scaled-geometric profile");
      }
      recursive_ = true;
      break;
    case HistoryMode::Kind::Direct:
      horizon_ = mode.horizon;
      break;
    case HistoryMode::Kind::Auto:
      if (profile_.is_scaled_geometric()) {
        recursive_ = true;
      } else if (auto end = profile_.support_end()) {
        horizon_ = *end;
      } else if (auto maj = profile_.majorant()) {
        // Truncation tail below 1e-9 * sigma2 per unit of peak input power.
        horizon_ = horizon_for_majorant(*maj, 1e-9 * sigma2_);
      }
      // Otherwise keep the full history.
      break;
  }
  if (!recursive_ && horizon_ && *horizon_ > 0) {
    past_sq_.assign(static_cast<std::size_t>(*horizon_), 0.0);
  }
}

double Channel::noise_var() const {
  if (recursive_) {
    return sigma2_ + accumulator_;
  }
  double acc = 0.0;
  const std::int64_t available =
      horizon_ ? std::min<std::int64_t>(seen_, *horizon_) : seen_;
  if (horizon_ && *horizon_ > 0) {
    const std::size_t cap = past_sq_.size();
    for (std::int64_t j = 1; j <= available; ++j) {
      // x_{k-j}^2 sits j slots behind the ring head.
      const std::size_t idx = (head_ + cap - static_cast<std::size_t>(j)) % cap;
      acc += alpha_cache_[static_cast<std::size_t>(j - 1)] * past_sq_[idx];
    }
  } else {
    for (std::int64_t j = 1; j <= available; ++j) {
      acc += alpha_cache_[static_cast<std::size_t>(j - 1)] *
             past_sq_[static_cast<std::size_t>(seen_ - j)];
    }
  }
  return sigma2_ + acc;
}

double Channel::noise_std() const { return std::sqrt(noise_var()); }

void Channel::push_history(double x) {
  const double x2 = x * x;
  ++seen_;
  ++k_;
  if (recursive_) {
    const double rho = profile_.geometric_ratio();
    const double scale = profile_.geometric_scale();
    accumulator_ = rho * (accumulator_ + scale * x2);
    return;
  }
  if (horizon_) {
    if (*horizon_ == 0) return;
    if (static_cast<std::int64_t>(alpha_cache_.size()) < *horizon_) {
      alpha_cache_.reserve(static_cast<std::size_t>(*horizon_));
      for (std::int64_t j = static_cast<std::int64_t>(alpha_cache_.size()) + 1;
           j <= *horizon_; ++j) {
        alpha_cache_.push_back(profile_.alpha(j));
      }
    }
    past_sq_[head_] = x2;
    head_ = (head_ + 1) % past_sq_.size();
  } else {
    past_sq_.push_back(x2);
    alpha_cache_.push_back(profile_.alpha(static_cast<std::int64_t>(alpha_cache_.size()) + 1));
  }
}

std::pair<double, double> Channel::step(double x) {
  return step_with_noise(x, noise_.draw(rng_));
}

std::pair<double, double> Channel::step_with_noise(double x, double u) {
  const double theta = noise_std();
  const double y = x + theta * u;
  push_history(x);
  return {y, theta};
}

Channel::Transmission Channel::transmit(std::span<const double> xs) {
  Transmission t;
  t.y.reserve(xs.size());
  t.theta.reserve(xs.size());
  double power = 0.0;
  for (double x : xs) {
    auto [y, theta] = step(x);
    t.y.push_back(y);
    t.theta.push_back(theta);
    power += x * x;
  }
  t.avg_power = xs.empty() ? 0.0 : power / static_cast<double>(xs.size());
  return t;
}

std::optional<std::int64_t> Channel::direct_horizon() const {
  return recursive_ ? std::nullopt : horizon_;
}

}  // namespace heatchan
