#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

#include "heatchan/channel.hpp"
#include "heatchan/estimate.hpp"
#include "heatchan/profiles.hpp"

namespace heatchan::codec {

/// Random Gaussian codebook supported on the sparse grid: entry k of
/// codeword m at position grid_start + k*L (1-based) is N(0, power),
/// independent across (k, m); all other positions are zero.
/// Decoding is exhaustive, so |M| is capped.
class Codebook {
 public:
  static constexpr std::int64_t kDefaultMaxMessages = std::int64_t{1} << 20;

  Codebook(double rate_nats, std::int64_t n, std::int64_t L, double power,
           std::uint64_t seed, std::int64_t grid_start = 1,
           std::int64_t max_messages = kDefaultMaxMessages);

  /// Builds a codebook with caller-supplied grid entries (one row per
  /// message). Used for deterministic fixtures.
  static Codebook from_grid_entries(Eigen::MatrixXd grid, std::int64_t n,
                                    std::int64_t L, double power,
                                    std::int64_t grid_start = 1);

  std::int64_t num_messages() const { return grid_.rows(); }
  std::int64_t block_length() const { return n_; }
  std::int64_t grid_size() const { return grid_.cols(); }  // floor(n/L)
  std::int64_t grid_start() const { return grid_start_; }  // 1-based
  double power() const { return power_; }

  /// Realized rate log|M| / n in nats per channel use.
  double realized_rate() const;

  /// Full length-n input sequence for message m (0-based).
  Eigen::VectorXd encode(std::int64_t m) const;

  /// Grid-restricted codeword matrix, |M| x grid_size.
  const Eigen::MatrixXd& grid_entries() const { return grid_; }

  /// 0-based positions of the grid within 0..n-1.
  std::vector<std::int64_t> grid_positions() const;

  /// Fraction of codewords whose per-use average power exceeds p_limit.
  double power_violation_fraction(double p_limit) const;

 private:
  std::int64_t n_;
  std::int64_t L_;
  std::int64_t grid_start_;
  double power_;
  Eigen::MatrixXd grid_;
  Eigen::VectorXd sq_norms_;  // per-codeword |x_grid|^2, reused by the decoder
  friend std::int64_t nn_decode(const Codebook&, const Eigen::VectorXd&,
                                std::mt19937_64&);
};

/// Nearest-neighbor decoding over the grid samples: argmin_m
/// |y_grid - x_grid(m)|^2, ties resolved uniformly at random with the
/// supplied engine. Returns the 0-based message index.
std::int64_t nn_decode(const Codebook& cb, const Eigen::VectorXd& y_grid,
                       std::mt19937_64& tie_rng);

struct BlerOptions {
  bool fresh_codebook_per_trial = false;
  std::int64_t grid_start = 1;
  std::int64_t max_messages = Codebook::kDefaultMaxMessages;
  NoiseModel noise = NoiseModel::iid_gaussian();
};

struct BlerResult {
  EstimateReport report;  // value = block error frequency
  double power_violation_fraction = 0.0;
  double realized_rate_nats = 0.0;
  std::int64_t num_messages = 0;
};

/// Block-error-rate simulation: per trial draw a uniform message, transmit
/// its codeword through the channel, decode from the grid samples, count
/// errors. Codewords violating the per-message power constraint are sent
/// as-is; the violation fraction is reported alongside.
BlerResult bler_sim(const HeatProfile& profile, double sigma2, double power,
                    std::int64_t L, std::int64_t n, double rate_nats,
                    std::int64_t trials, std::uint64_t seed,
                    const BlerOptions& opts = {});

}  // namespace heatchan::codec
