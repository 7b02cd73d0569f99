#pragma once

#include "fracbs/disc.hpp"

namespace fracbs::testing {

/// Small log-polar mesh that assembles in about a second.
inline DiscMeshOptions coarse_mesh() {
  DiscMeshOptions o;
  o.rho_min = 1e-8;
  o.rho_max = 1e3;
  o.ratio_z = 0.5;
  o.theta_min = 1e-2;
  o.ratio_theta = 0.5;
  o.max_theta = 0.3;
  return o;
}

/// Shared operator for N = 2, s = 0.75 on the coarse mesh.
inline const GreenOperator& coarse_operator() {
  static const GreenOperator g(DiscMesh::make(coarse_mesh()), FracParams::make(2, 0.75));
  return g;
}

} // namespace fracbs::testing
