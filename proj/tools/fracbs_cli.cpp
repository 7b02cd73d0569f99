#include "fracbs/error.hpp"
#include "fracbs/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace fracbs;

int main(int argc, char** argv) {
  CLI::App app{"Fractional boundary-singularity experiments"};
  std::string config_path, out_dir, experiment;
  std::uint64_t seed = 0;
  double s = 0, p = 0;
  std::vector<double> ks;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option("--experiment", experiment, "Experiment name (overrides experiment)");
  app.add_option("--seed", seed, "Random seed (overrides seed)");
  app.add_option("--s", s, "Order s (overrides s)");
  app.add_option("--p", p, "Exponent p (overrides p)");
  app.add_option("--k", ks, "Values of k (overrides ks)")->delimiter(',');
  bool list = false;
  app.add_flag("--list", list, "List experiment names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (list) {
    for (const auto& n : experiment_names())
      std::cout << n << "\n";
    return 0;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      cfg = config_from_json(j);
    }
    if (app.count("--experiment"))
      cfg.experiment = experiment;
    if (app.count("--out"))
      cfg.output_dir = out_dir;
    if (app.count("--seed"))
      cfg.seed = seed;
    if (app.count("--s"))
      cfg.s = s;
    if (app.count("--p"))
      cfg.p = p;
    if (app.count("--k"))
      cfg.ks = ks;

    const ExperimentReport r = run(cfg);
    for (const auto& c : r.checks)
      std::printf("%s  %s  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    std::printf("%s: %zu files in %s, %.1f s\n", cfg.experiment.c_str(), r.files.size(),
                cfg.output_dir.c_str(), r.wall_seconds);
    return r.all_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
