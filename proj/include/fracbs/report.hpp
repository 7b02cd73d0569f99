#pragma once

#include "fracbs/disc.hpp"
#include "fracbs/params.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fracbs {

/// Latitude grid parameters of the sphere experiments.
struct GridConfig {
  int per_hemisphere = 16;
  double grading = 2.0;
  int beta_points = 20;
};

struct ExperimentConfig {
  std::string experiment;
  int n = 2;
  double s = 0.75;
  double p = 2.0;
  std::vector<double> ks = {1.0};
  GridConfig grid;
  DiscMeshOptions mesh;
  int decades = 12;       ///< ray decades of gmp-check
  int random_starts = 2;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  FracParams params() const { return FracParams::make(n, s); }
};

/// Names accepted by ExperimentConfig::experiment.
const std::vector<std::string>& experiment_names();

/// Throws ConfigError listing every offending field as "field: message".
void validate(const ExperimentConfig& cfg);

/// Parses a config; unknown keys and type mismatches raise ConfigError naming the field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Numeric table with a fixed header row.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

/// Header line and rows, full round-trip precision.
std::string to_csv(const Table& t);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::map<std::string, double> scalars;
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<std::string> files;
  double wall_seconds = 0;

  bool all_pass() const;
  const Table& table(const std::string& name) const;
};

nlohmann::json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& j);

} // namespace fracbs
