#include "heatchan/codec.hpp"

#include <cmath>
#include <sstream>

#include "heatchan/errors.hpp"
#include "heatchan/rng.hpp"

namespace heatchan::codec {

Codebook::Codebook(double rate_nats, std::int64_t n, std::int64_t L,
                   double power, std::uint64_t seed, std::int64_t grid_start,
                   std::int64_t max_messages)
    : n_(n), L_(L), grid_start_(grid_start), power_(power) {
  if (n < 1 || L < 1 || !(power > 0.0) || !(rate_nats > 0.0)) {
    throw InvalidParamsError("codebook parameter out of range");
  }
  const std::int64_t m_grid = n / L;
  if (m_grid < 1 || grid_start < 1 ||
      grid_start + (m_grid - 1) * L > n) {
    throw InvalidParamsError("grid does not fit inside the block");
  }
  const double raw = std::exp(rate_nats * static_cast<double>(n));
  if (raw > static_cast<double>(max_messages) + 0.5) {
    throw TooManyMessagesError(
        "codebook size exceeds the exhaustive-decoding cap");
  }
  const std::int64_t num = std::llround(raw);
  if (num < 2) {
    throw InvalidParamsError("rate too small: fewer than 2 messages");
  }
  grid_.resize(num, m_grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(power));
  // Row-major fill: all grid entries of message 0 first, then message 1, ...
  for (std::int64_t m = 0; m < num; ++m) {
    for (std::int64_t k = 0; k < m_grid; ++k) {
      grid_(m, k) = gauss(rng);
    }
  }
  sq_norms_ = grid_.rowwise().squaredNorm();
}

Codebook Codebook::from_grid_entries(Eigen::MatrixXd grid, std::int64_t n,
                                     std::int64_t L, double power,
                                     std::int64_t grid_start) {
  if (grid.rows() < 2 || grid.cols() != n / L) {
    throw InvalidParamsError("grid entries must have >= 2 rows and n/L columns");
  }
  Codebook cb(std::log(2.0) / static_cast<double>(n), n, L, power, 0,
              grid_start);
  cb.grid_ = std::move(grid);
  cb.sq_norms_ = cb.grid_.rowwise().squaredNorm();
  return cb;
}

double Codebook::realized_rate() const {
  return std::log(static_cast<double>(num_messages())) /
         static_cast<double>(n_);
}

Eigen::VectorXd Codebook::encode(std::int64_t m) const {
  if (m < 0 || m >= num_messages()) {
    throw BadMessageError("message index out of range");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  for (std::int64_t k = 0; k < grid_size(); ++k) {
    x(grid_start_ - 1 + k * L_) = grid_(m, k);
  }
  return x;
}

std::vector<std::int64_t> Codebook::grid_positions() const {
  std::vector<std::int64_t> pos;
  pos.reserve(static_cast<std::size_t>(grid_size()));
  for (std::int64_t k = 0; k < grid_size(); ++k) {
    pos.push_back(grid_start_ - 1 + k * L_);
  }
  return pos;
}

double Codebook::power_violation_fraction(double p_limit) const {
  const double limit = p_limit * static_cast<double>(n_);
  std::int64_t violations = 0;
  for (std::int64_t m = 0; m < num_messages(); ++m) {
    if (sq_norms_(m) > limit) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(num_messages());
}

std::int64_t nn_decode(const Codebook& cb, const Eigen::VectorXd& y_grid,
                       std::mt19937_64& tie_rng) {
  if (y_grid.size() != cb.grid_size()) {
    throw DimensionMismatchError("grid sample length mismatch");
  }
  // |y - x_m|^2 = |y|^2 - 2 <x_m, y> + |x_m|^2; the |y|^2 term is common to
  // all messages and dropped.
  Eigen::VectorXd score = cb.sq_norms_ - 2.0 * (cb.grid_ * y_grid);
  std::int64_t best = 0;
  double best_score = score(0);
  std::int64_t tie_count = 1;
  for (std::int64_t m = 1; m < score.size(); ++m) {
    if (score(m) < best_score) {
      best = m;
      best_score = score(m);
      tie_count = 1;
    } else if (score(m) == best_score) {
      // Reservoir choice keeps each minimizer equally likely.
      ++tie_count;
      std::uniform_int_distribution<std::int64_t> pick(1, tie_count);
      if (pick(tie_rng) == 1) best = m;
    }
  }
  return best;
}

BlerResult bler_sim(const HeatProfile& profile, double sigma2, double power,
                    std::int64_t L, std::int64_t n, double rate_nats,
                    std::int64_t trials, std::uint64_t seed,
                    const BlerOptions& opts) {
  if (trials < 1) throw InvalidParamsError("trials must be >= 1");
  std::optional<Codebook> fixed;
  if (!opts.fresh_codebook_per_trial) {
    fixed.emplace(rate_nats, n, L, power,
                  derive_seed(seed, streams::kCodebook, 0), opts.grid_start,
                  opts.max_messages);
  }

  std::int64_t errors = 0;
  double violation_sum = 0.0;
  std::int64_t num_messages = 0;
  double realized = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const Codebook* cb = nullptr;
    std::optional<Codebook> fresh;
    if (opts.fresh_codebook_per_trial) {
      fresh.emplace(rate_nats, n, L, power,
                    derive_seed(seed, streams::kCodebook,
                                static_cast<std::uint64_t>(t)),
                    opts.grid_start, opts.max_messages);
      cb = &*fresh;
    } else {
      cb = &*fixed;
    }
    num_messages = cb->num_messages();
    realized = cb->realized_rate();

    auto msg_rng = make_engine(seed, streams::kMessage,
                               static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<std::int64_t> pick(0, cb->num_messages() - 1);
    const std::int64_t sent = pick(msg_rng);

    Channel chan(profile, sigma2, opts.noise,
                 derive_seed(seed, streams::kBlerChannel,
                             static_cast<std::uint64_t>(t)));
    const Eigen::VectorXd x = cb->encode(sent);
    auto trans = chan.transmit(std::span<const double>(x.data(),
                                                       static_cast<std::size_t>(x.size())));
    Eigen::VectorXd y_grid(cb->grid_size());
    {
      std::int64_t k = 0;
      for (std::int64_t pos : cb->grid_positions()) {
        y_grid(k++) = trans.y[static_cast<std::size_t>(pos)];
      }
    }
    auto tie_rng = make_engine(seed, streams::kDecoderTie,
                               static_cast<std::uint64_t>(t));
    const std::int64_t guessed = nn_decode(*cb, y_grid, tie_rng);
    if (guessed != sent) ++errors;
    if (opts.fresh_codebook_per_trial) {
      violation_sum += (trans.avg_power > power) ? 1.0 : 0.0;
    }
  }

  BlerResult res;
  res.report.value = static_cast<double>(errors) / static_cast<double>(trials);
  res.report.std_error =
      std::sqrt(res.report.value * (1.0 - res.report.value) /
                static_cast<double>(trials));
  res.report.trials = trials;
  res.report.seed = seed;
  std::ostringstream os;
  os << "bler|" << profile.describe() << "|sigma2=" << sigma2 << "|P=" << power
     << "|L=" << L << "|n=" << n << "|rate=" << rate_nats
     << "|trials=" << trials << "|fresh=" << opts.fresh_codebook_per_trial
     << "|grid_start=" << opts.grid_start;
  res.report.config = os.str();
  res.power_violation_fraction =
      opts.fresh_codebook_per_trial
          ? violation_sum / static_cast<double>(trials)
          : fixed->power_violation_fraction(power);
  res.realized_rate_nats = realized;
  res.num_messages = num_messages;
  return res;
}

}  // namespace heatchan::codec
