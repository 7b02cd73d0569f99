#pragma once

#include <string>
#include <vector>

namespace fracbs {

enum class AxisScale { linear, log };

struct Curve {
  std::string label;
  std::vector<double> x, y;
};

struct Axes {
  std::string title;
  std::string x_label, y_label;
  AxisScale x_scale = AxisScale::linear;
  AxisScale y_scale = AxisScale::linear;
};

/// Self-contained SVG line chart: one polyline per curve, axes with ticks, labels and a
/// legend. Needs at least one curve with two points or more per curve; non-finite
/// coordinates and non-positive values on a log axis raise DomainError naming the point.
std::string emit_svg(const std::vector<Curve>& curves, const Axes& axes);

} // namespace fracbs
