#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bipsim/commands.hpp"
#include "bipsim/config.hpp"
#include "bipsim/version.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_dir,
        bool seed_given, std::uint64_t seed) {
  const bipsim::Command cmd = bipsim::command_from_name(command);
  bipsim::RunConfig cfg = bipsim::parse_config_file(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed_given) cfg.seed = seed;

  const bipsim::RunResult result = bipsim::run_command(cmd, cfg);
  for (const auto& path : result.outputs) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite wave-function simulator"};
  app.set_version_flag("--version", std::string(bipsim::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;

  const char* names[] = {"eigs", "evolve", "duality-scan", "gap-scan", "collapse-stats"};
  const char* blurbs[] = {
      "solve the lowest energy levels and write spectrum.csv / states.csv",
      "propagate an initial state and write timeseries.csv plus the final state",
      "scan the wave-to-particle family and write duality.csv",
      "measure energy gaps from beat phases and write gaps.csv",
      "sample projective collapses and write collapse.csv",
  };
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", config_path, "path to a key = value config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)")
        ->each([&](const std::string&) { seed_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), config_path, out_dir, seed_given, seed);
  } catch (const std::exception& e) {
    bipsim::print_error_line(std::cerr, e);
    return bipsim::exit_code_for(e);
  }
}
