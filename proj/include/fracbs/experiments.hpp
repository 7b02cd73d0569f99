#pragma once

#include "fracbs/report.hpp"
#include "fracbs/svg.hpp"

#include <string>
#include <vector>

namespace fracbs {

struct Plot {
  std::string name;
  Axes axes;
  std::vector<Curve> curves;
};

/// Report plus the plots that go with it, before anything touches the disk.
struct ExperimentOutput {
  ExperimentReport report;
  std::vector<Plot> plots;
};

/// Validates the config and runs one experiment in memory.
ExperimentOutput compute(const ExperimentConfig& cfg);

/// compute() followed by writing <experiment>_<table>.csv, <experiment>_<plot>.svg and
/// <experiment>_report.json into cfg.output_dir. File names are listed in the report.
ExperimentReport run(const ExperimentConfig& cfg);

} // namespace fracbs
