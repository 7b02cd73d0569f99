#pragma once

#include "fracbs/eigenpair.hpp"
#include "fracbs/sphere_ops.hpp"

#include <cstdint>
#include <string>

namespace fracbs {

/// ell_{s,p} = c35(2s/(p-1))^{1/(p-1)} for p in (p1, p3).
double constant_profile(const FracParams& params, double p);

struct ConstantResidual {
  double ell = 0;
  double residual = 0; ///< |A w - L w + M w^p| / |M w^p| with w = ell on the full sphere
};

/// Plugs ell into the discrete full-sphere equation A w - L w + M w^p = 0.
ConstantResidual constant_profile_residual(const FracParams& params, double p,
                                           const LatGrid& grid, const AssemblyOptions& opt);

/// J(w) = 1/2 w^T A w - 1/2 w^T L w + 1/(p+1) sum_i m_i |w_i|^{p+1}, m the lumped mass.
double energy_J(const OperatorPair& ops, const Eigen::VectorXd& omega, double p);

/// Gradient of energy_J.
Eigen::VectorXd energy_gradient(const OperatorPair& ops, const Eigen::VectorXd& omega, double p);

enum class Classification { nontrivial, trivial };
std::string to_string(Classification c);

struct ProfileOptions {
  int random_starts = 2;
  std::uint64_t seed = 1;
  double tol = 1e-8;          ///< relative mass-dual norm of the projected gradient
  int max_iter = 10000;
  double trivial_fraction = 1e-2; ///< trivial when max w < fraction * ell
};

struct ProfileResult {
  SphericalField omega;
  Eigen::VectorXd dofs;
  double energy = 0;
  double residual = 0;        ///< |A w - L w + M w^p| / |M w^p| in the lumped dual norm
  Classification classification = Classification::trivial;
  std::string start;          ///< name of the winning start
  int iterations = 0;
  double fixed_point_gap = 0; ///< relative L2(mass) distance to the damped fixed point
  std::uint64_t seed = 0;
};

/// Projected, A-preconditioned gradient descent with Armijo backtracking from one start.
Eigen::VectorXd minimize_J(const OperatorPair& ops, double p, Eigen::VectorXd start,
                           const ProfileOptions& opt, int* iterations = nullptr);

/// Damped iteration w <- (1-theta) w + theta (A^{-1}(L w - M w^p))_+.
Eigen::VectorXd fixed_point_profile(const OperatorPair& ops, double p, Eigen::VectorXd start,
                                    double theta = 0.5, double tol = 1e-11, int max_iter = 100000);

/// Multi-start minimization of J on the hemisphere; classification and residual attached.
ProfileResult minimize_profile(const OperatorPair& ops, double p, const ProfileOptions& opt = {});

/// Nontrivial profile for p in (p1, p2). Throws when every start collapses to zero.
ProfileResult hemisphere_profile(const FracParams& params, double p, const LatGrid& grid,
                                 const ProfileOptions& opt = {}, const AssemblyOptions& aopt = {});

struct NonexistenceResult {
  double lambda = 0;
  Classification classification = Classification::trivial;
  ProfileResult best;
};

/// For p in [p2, p3): lambda at beta = 2s/(p-1) and the minimizer class. Throws if the
/// minimizer is nontrivial.
NonexistenceResult nonexistence_check(const FracParams& params, double p, const LatGrid& grid,
                                      const ProfileOptions& opt = {},
                                      const AssemblyOptions& aopt = {});

/// Smallest c >= 1 with 1/c <= w/(sin phi)^s <= c over hemisphere nodes with phi <= phi_max.
double boundary_rate_constant(const LatGrid& grid, const Eigen::VectorXd& dofs, double s,
                              double phi_max);

} // namespace fracbs
