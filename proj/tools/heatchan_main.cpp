#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "heatchan/cli.hpp"
#include "heatchan/errors.hpp"

namespace {

struct Args {
  std::string config_path;
  heatchan::cli::RunOptions opts;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("config", args.config_path, "experiment config (JSON)")
      ->required();
  sub->add_option_function<std::string>(
      "--output", [&args](const std::string& v) { args.opts.output_override = v; },
      "override the config's output path");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&args](std::uint64_t v) { args.opts.seed_override = v; },
      "override the config's master seed");
  sub->add_flag("--bits", args.opts.bits, "emit rates in bits instead of nats");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heating-up channel simulator and capacity-bound calculator"};
  app.require_subcommand(1);

  Args args;
  const char* commands[] = {"bounds",        "simulate", "slope",
                            "concentration", "bler",     "classify", "run"};
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(
        name, name == std::string("run")
                  ? "run the command named inside the config file"
                  : std::string("run the ") + name + " experiment");
    add_common(sub, args);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    heatchan::ExperimentConfig cfg = heatchan::load_config(args.config_path);
    if (command != "run") {
      if (!cfg.command.empty() && cfg.command != command) {
        throw heatchan::ConfigError("config names command '" + cfg.command +
                                    "' but subcommand '" + command +
                                    "' was invoked");
      }
      cfg.command = command;
    }
    heatchan::cli::run(cfg, args.opts, std::cout);
  } catch (const heatchan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
