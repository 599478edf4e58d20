#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "heatchan/config.hpp"

namespace heatchan::cli {

struct RunOptions {
  std::optional<std::string> output_override;
  std::optional<std::uint64_t> seed_override;
  bool bits = false;  // convert rate columns from nats to bits at output
};

/// Executes the experiment described by the config and writes its CSV
/// artifact plus a human-readable summary. Throws ConfigError for malformed
/// configs and other heatchan errors for runtime failures; the binary maps
/// these to exit codes 2 and 3.
void run(const ExperimentConfig& cfg, const RunOptions& opts,
         std::ostream& summary);

/// Known subcommands: bounds, simulate, slope, concentration, bler, classify.
bool is_known_command(const std::string& command);

}  // namespace heatchan::cli
