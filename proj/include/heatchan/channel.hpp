#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "heatchan/profiles.hpp"

namespace heatchan {

/// Zero-mean, unit-marginal-variance stationary noise process.
struct NoiseModel {
  enum class Kind { IIDGaussian, AR1Gaussian };

  Kind kind = Kind::IIDGaussian;
  double a = 0.0;  // AR(1) coefficient, 0 <= a < 1

  static NoiseModel iid_gaussian() { return {}; }
  static NoiseModel ar1_gaussian(double a);
};

/// Stateful sampler for a NoiseModel. AR(1) uses innovation variance 1-a^2
/// so the marginal stays at unit variance from the first sample on.
class NoiseProcess {
 public:
  explicit NoiseProcess(NoiseModel model) : model_(model) {}

  double draw(std::mt19937_64& rng);

 private:
  NoiseModel model_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  double prev_ = 0.0;
  bool started_ = false;
};

/// How the simulator tracks the accumulated past input power.
///
/// Direct keeps past x^2 values and evaluates the weighted sum each step,
/// optionally truncated at a horizon; Recursive keeps a single accumulator
/// and is exact, but only scaled-geometric profiles admit it.
struct HistoryMode {
  enum class Kind { Auto, Direct, Recursive };

  Kind kind = Kind::Auto;
  std::optional<std::int64_t> horizon;  // Direct only; unset keeps everything

  static HistoryMode auto_select() { return {}; }
  static HistoryMode direct(std::optional<std::int64_t> horizon = {}) {
    return {Kind::Direct, horizon};
  }
  static HistoryMode recursive() { return {Kind::Recursive, {}}; }
};

/// Streaming simulator of y_k = x_k + theta(x_1^{k-1}) * u_k with
/// theta^2 = sigma2 + sum_ell alpha_{k-ell} x_ell^2.
///
/// Single-owner mutable state; deterministic given (seed, inputs, config).
class Channel {
 public:
  Channel(HeatProfile profile, double sigma2, NoiseModel noise,
          std::uint64_t seed, HistoryMode mode = {});

  /// theta that will scale the next output's noise.
  double noise_std() const;

  /// Current noise variance theta^2 = sigma2 + accumulated past power.
  double noise_var() const;

  /// Feeds one input, returns (y, theta used).
  std::pair<double, double> step(double x);

  /// Same as step but with the noise sample supplied by the caller.
  std::pair<double, double> step_with_noise(double x, double u);

  struct Transmission {
    std::vector<double> y;
    std::vector<double> theta;
    double avg_power = 0.0;  // (1/n) sum x_k^2, for power-constraint audits
  };

  Transmission transmit(std::span<const double> xs);

  /// Time index of the next output, starting at 1.
  std::int64_t time() const { return k_; }

  const HeatProfile& profile() const { return profile_; }
  double sigma2() const { return sigma2_; }

  /// Horizon actually in use in Direct mode (unset = unbounded or Recursive).
  std::optional<std::int64_t> direct_horizon() const;

 private:
  void push_history(double x);

  HeatProfile profile_;
  double sigma2_;
  NoiseProcess noise_;
  std::mt19937_64 rng_;
  std::int64_t k_ = 1;

  bool recursive_ = false;
  double accumulator_ = 0.0;  // sum_ell scale*rho^ell * x_{k-ell}^2

  std::optional<std::int64_t> horizon_;    // Direct truncation, unset = keep all
  std::vector<double> past_sq_;            // ring buffer when horizon_ is set
  std::size_t head_ = 0;                   // next write slot in the ring
  std::int64_t seen_ = 0;                  // inputs consumed so far
  std::vector<double> alpha_cache_;        // alpha_1..alpha_m, grown on demand
};

}  // namespace heatchan
