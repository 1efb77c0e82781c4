// hrs: simulate, reconstruct, sweep and verify from the command line.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hrs/cli_io.hpp"
#include "hrs/errors.hpp"

namespace cli = hrs::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Helmholtz inverse random source lab"};
  app.require_subcommand(1);

  cli::CommandOptions opt;
  std::string config, out, stats, target;
  std::uint64_t dump = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "YAML run configuration (built-in defaults if omitted)");
    sub->add_option("--threads", opt.threads, "worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_flag("--force", opt.force, "accept input files written under a different config");
  };

  auto* simulate = app.add_subcommand("simulate", "write boundary statistics for the config");
  common(simulate);
  auto* dump_opt = simulate->add_option("--dump-increments", dump,
                                        "also write the increments of this realization");
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct f or g from a stats file");
  common(reconstruct);
  reconstruct->add_option("--stats", stats, "stats CSV (default <out>/stats.csv)");
  reconstruct->add_option("--target", target, "mean, variance or onesided");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over K, N or M");
  common(sweep);
  auto* verify = app.add_subcommand("verify", "numerical identity and bound checks");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  if (!config.empty()) opt.config = config;
  if (!out.empty()) opt.out = out;
  if (!stats.empty()) opt.stats = stats;
  if (*dump_opt) opt.dump_increments = dump;
  if (const char* seed = std::getenv("HRS_SEED")) opt.seed_env = std::string(seed);
  if (!target.empty()) {
    try {
      opt.target = cli::parse_target(target);
    } catch (const hrs::ConfigError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return cli::kExitUsage;
    }
  }

  const cli::CommandIo io{std::cout, std::cerr};
  if (*simulate) return cli::cmd_simulate(opt, io);
  if (*reconstruct) return cli::cmd_reconstruct(opt, io);
  if (*sweep) return cli::cmd_sweep(opt, io);
  return cli::cmd_verify(opt, io);
}
