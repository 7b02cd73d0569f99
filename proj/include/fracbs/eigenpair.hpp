#pragma once

#include "fracbs/sphere_ops.hpp"

#include <vector>

namespace fracbs {

struct EigenResult {
  double lambda = 0;
  double beta = 0;
  SphericalField psi;      ///< positive, psi^T M psi = 1
  Eigen::VectorXd dofs;    ///< psi at hemisphere nodes
  double residual = 0;     ///< mass-dual norm of A psi - lambda L psi
  int grid_size = 0;
  int iterations = 0;
};

struct PowerOptions {
  double tol = 1e-13;
  int max_iter = 20000;
};

/// Largest mu of A^{-1} L by power iteration with Cholesky solves; lambda = 1/mu.
EigenResult principal_eigenpair(const OperatorPair& ops, const PowerOptions& opt = {});

struct LambdaCurve {
  std::vector<double> beta, lambda, residual;
};

/// (beta, lambda) on the given betas, reusing A across the sweep.
LambdaCurve lambda_sweep(const FracParams& params, const LatGrid& grid,
                         const std::vector<double>& betas, const AssemblyOptions& opt = {});

/// n betas evenly spaced strictly inside (N-2s, N).
std::vector<double> beta_grid(const FracParams& params, int n);

struct BetaRoot {
  double beta = 0;
  double lambda = 0;
  int evaluations = 0;
};

/// Bisection on beta -> lambda until |lambda - 1| < tol.
BetaRoot find_beta_unit_lambda(const FracParams& params, const LatGrid& grid, double tol = 1e-3,
                               const AssemblyOptions& opt = {});

} // namespace fracbs
