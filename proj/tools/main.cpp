#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace robinlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Robin-boundary semilinear elliptic and parabolic experiments"};
  std::string command;
  std::string config_path;
  std::string out;
  std::optional<long> workers;
  std::optional<long> seed;
  bool plot = false;
  std::vector<std::string> overrides;

  app.add_option("command", command, "torsion | solve | beta-star | eigen | second | evolve | threshold | suite")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--out", out, "output directory (overrides output.dir)");
  app.add_option("--workers", workers, "concurrent runs in the suite (overrides run.workers)");
  app.add_option("--seed", seed, "seed for randomized checks (overrides run.seed)");
  app.add_flag("--plot", plot, "write SVG plots of max u and energy");
  app.add_option("--set", overrides, "section.key=value, applied after the config file")->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (!out.empty()) cfg.set("output.dir", out, "--out");
    if (workers) cfg.set("run.workers", std::to_string(*workers), "--workers");
    if (seed) cfg.set("run.seed", std::to_string(*seed), "--seed");
    if (plot) cfg.set("run.plot", "true", "--plot");
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "robinlab: config error: " << e.what() << "\n";
    return kConfig;
  }
  return run_reporting(command, cfg, cfg.text("output.dir"));
}
