#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "morselab/experiment.hpp"

using namespace morselab;

int main(int argc, char** argv) {
  CLI::App app{"morse-lab: quasi-geodesic experiments on finite Cayley balls"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  std::string config_path;
  std::string out_override;
  int threads_override = 0;
  std::int64_t seed_override = -1;
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_override, "output directory (overrides config)");
  run->add_option("--threads", threads_override, "worker threads (overrides config)");
  run->add_option("--seed-override", seed_override, "seed (overrides config)");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config '" << config_path << "'\n";
      return 2;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    cfg = parse_config_text(text);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (threads_override > 0) cfg.threads = threads_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

  try {
    RunReport report = run_experiment(cfg);
    write_run_outputs(report, cfg.out_dir);
    std::cout << "kind=" << cfg.kind << " status=" << report.exit_status << " out="
              << cfg.out_dir << "\n";
    return report.exit_status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
