#pragma once

#include "fracbs/galerkin.hpp"
#include "fracbs/kernel_table.hpp"
#include "fracbs/params.hpp"
#include "fracbs/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

namespace fracbs {

/// int_{S^{N-1}} f(<e_N, eta>) dS(eta) = |S^{N-2}| int_{-1}^{1} f(u) (1-u^2)^{(N-3)/2} du
/// by Gauss-Jacobi with the matching weight. Suited to smooth f.
double zonal_reduce(int n, const std::function<double(double)>& f, int order = 40);

/// Same integral in the polar angle, |S^{N-2}| int_0^pi f(cos t) sin^{N-2} t dt, with
/// panels graded toward t = 0 where f may be singular like t^{alpha - (N-2)}.
double zonal_reduce_graded(int n, const std::function<double(double)>& f, double alpha,
                           int order = 16, int levels = 40);

/// K(u) = int_0^1 (t^{N-1} + t^{2s-1}) (1 + t^2 - 2tu)^{-N/2-s} dt, u < 1.
double radial_kernel_K(const FracParams& params, double u);
/// K as a function of kappa = |sigma - eta| = sqrt(2 - 2u).
double radial_kernel_K_kappa(const FracParams& params, double kappa);

/// B_{s,beta}(u) = int_0^1 (t^{-beta}-1)(t^{N-1} - t^{N-1+c_s})(1+t^2-2tu)^{-N/2-s} dt,
/// c_s = beta + 2s - N. Requires beta < N and u < 1.
double b_kernel(const FracParams& params, double beta, double u);
double b_kernel_kappa(const FracParams& params, double beta, double kappa);

/// Power q with B ~ kappa^{-q} as kappa -> 0 (0 when B stays bounded).
double b_singular_power(const FracParams& params);

/// c35 = a_{N,s} int_{S^{N-1}} B_{s,beta} dS for beta in (N-2s, N).
double c35(const FracParams& params, double beta);

/// b_{N,s} = 2 a_{N,s} int_0^inf (1+x^2)^{-N/2-s} dx by quadrature.
double b_const(const FracParams& params);
/// Beta-function closed form a sqrt(pi) Gamma(N/2+s-1/2)/Gamma(N/2+s).
double b_const_closed(const FracParams& params);

/// Tabulated K and B in kappa, smooth after removing their kappa -> 0 power.
class SphereKernels {
public:
  explicit SphereKernels(const FracParams& params);
  double K(double kappa) const;
  double B(double kappa) const; ///< requires set_beta
  void set_beta(double beta);
  double beta() const { return beta_; }
  const FracParams& params() const { return params_; }

private:
  FracParams params_;
  double beta_ = 0;
  double k_power_, b_power_;
  KappaTable k_table_, b_table_;
};

/// Latitude grid on S^{N-1} (N in {2,3}) covering [-pi/2, pi/2], symmetric, with the
/// equator as a node and nodes graded toward it. Weights are lumped P1 masses of the
/// zonal density |S^{N-2}| cos^{N-2}(phi).
struct LatGrid {
  int n = 2;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<bool> hemisphere_mask; ///< phi > 0
  double grading = 2.0;
  int per_hemisphere = 0;            ///< elements between equator and pole

  /// Minimum elements between equator and pole.
  static constexpr int min_per_hemisphere = 4;
  static LatGrid make(int n, int per_hemisphere, double grading = 2.0);

  /// Same grading with twice the elements.
  LatGrid refined() const { return make(n, 2 * per_hemisphere, grading); }

  /// Grid indices of hemisphere nodes (phi > 0, pole included), increasing.
  std::vector<int> hemisphere_nodes() const;
  double area() const;
};

/// Axisymmetric scalar field at LatGrid nodes.
struct SphericalField {
  std::vector<double> values;
  bool zero_extended = false; ///< hemisphere field, zero at and below the equator

  static SphericalField from_hemisphere(const LatGrid& grid, const Eigen::VectorXd& dofs);
  Eigen::VectorXd hemisphere_dofs(const LatGrid& grid) const;
};

struct AssemblyOptions {
  PairQuadOptions pair;
  int kill_order = 12;
  int mass_levels = 12;
};

/// Galerkin matrices on hemisphere hat functions (zero-extended, pole free).
struct OperatorPair {
  Eigen::MatrixXd A;       ///< A_s energy form including the exterior (killing) part
  Eigen::MatrixXd L;       ///< L_{s,beta} form
  Eigen::MatrixXd mass;    ///< consistent mass matrix with the zonal density
  Eigen::VectorXd lumped;  ///< int phi_i dS
  double beta = 0;
  FracParams params;
  LatGrid grid;
};

OperatorPair assemble_operator_pair(const LatGrid& grid, const FracParams& params, double beta,
                                    const AssemblyOptions& opt = {});

/// Copy of `ops` with L reassembled for another beta (A and mass do not depend on beta).
OperatorPair with_beta(const OperatorPair& ops, double beta, const AssemblyOptions& opt = {});

/// Same forms for full-sphere hat functions at every LatGrid node.
struct FullSphereOps {
  Eigen::MatrixXd A, L, mass;
  Eigen::VectorXd lumped;
};
FullSphereOps assemble_full_sphere(const LatGrid& grid, const FracParams& params, double beta,
                                   const AssemblyOptions& opt = {});

/// Gram matrix of the zero-extended seminorm
///   int_{S^{N-1}} int_{S^{N-1}} (w(x)-w(y))^2 |x-y|^{1-N-2s} dS dS
/// on hemisphere hat functions.
Eigen::MatrixXd gagliardo_matrix(const LatGrid& grid, const FracParams& params,
                                 const AssemblyOptions& opt = {});

/// Writes a matrix as headerless CSV.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

} // namespace fracbs
