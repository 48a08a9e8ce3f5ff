#include "majorana/acceptance.hpp"
#include "majorana/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace majorana;
  CLI::App app{"Multi-level control methods from two-level primitives"};
  app.require_subcommand(1);

  std::string scenario;
  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "run one scenario and write its report and CSV files");
  run->add_option("--scenario", scenario, "scenario name (see `list`)");
  run->add_option("--config", config_path, "JSON config file (flat keys, or a previous report)");
  run->add_option("--set", sets, "override key=value (repeatable)")->take_all();
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out_dir, "output directory");

  app.add_subcommand("list", "list the available scenarios");
  app.add_subcommand("acceptance", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("list")) {
    std::cout << cli::list_scenarios();
    return 0;
  }
  if (app.got_subcommand("acceptance")) {
    return acceptance::run_all(std::cout) ? 0 : 1;
  }

  cli::RunConfig config;
  try {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        doc = nlohmann::json::parse(io::read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("malformed JSON config: ") + e.what());
      }
    }
    if (!scenario.empty()) sets.insert(sets.begin(), "scenario=" + scenario);
    if (*seed_opt) sets.push_back("seed=" + std::to_string(seed));
    config = cli::parse_config(doc, sets);
    config.out_dir = out_dir;
    if (config.scenario.empty()) throw ConfigError("scenario", "no scenario given (use --scenario)");
  } catch (const std::exception& e) {
    config.out_dir = out_dir;
    if (config.scenario.empty()) config.scenario = scenario;
    if (*seed_opt) config.seed = seed;
    return cli::report_error(config, e);
  }
  return cli::run(config);
}
