#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace fracbs {

/// Piecewise-linear hat basis on a 1-D mesh, optionally periodic.
struct Mesh1D {
  std::vector<double> x;  ///< strictly increasing vertices
  std::vector<int> dof;   ///< dof index per vertex, -1 for a constrained vertex
  bool periodic = false;
  double period = 0.0;    ///< closing element joins x.back() to x.front() + period

  int ndof() const;
  std::size_t n_elements() const { return periodic ? x.size() : x.size() - 1; }

  struct Element {
    double x0, x1;
    int v0, v1;
  };
  Element element(std::size_t e) const;
};

/// Kernel of a double integral in reduced coordinates, weights included.
/// Called as k(x, y, x - y); the difference is passed separately because the
/// singular schemes know it to full relative accuracy.
using PairKernel = std::function<double(double, double, double)>;

struct PairQuadOptions {
  int order = 10;          ///< Gauss points per panel direction
  int levels = 10;         ///< geometric levels toward a singular point
  double far_ratio = 2.0;  ///< tensor rule once gap >= far_ratio * size
};

/// Matrix of (1/2) int int (u(x)-u(y))(v(x)-v(y)) k(x,y) dx dy over the mesh
/// domain squared. `gamma` is the power of the integrand near the diagonal.
Eigen::MatrixXd assemble_difference_form(const Mesh1D& mesh, const PairKernel& k, double gamma,
                                         const PairQuadOptions& opt = {});

/// Matrix of int int u(x) k(x,y) v(y) dx dy. `gamma` is the power of k near the diagonal.
Eigen::MatrixXd assemble_product_form(const Mesh1D& mesh, const PairKernel& k, double gamma,
                                      const PairQuadOptions& opt = {});

/// Matrix of int u v g dx; elements touching a constrained vertex are graded toward it.
Eigen::MatrixXd assemble_weighted_mass(const Mesh1D& mesh, const std::function<double(double)>& g,
                                       int order = 10, int levels = 0);

/// Row sums of assemble_weighted_mass for g: int phi_i g dx.
Eigen::VectorXd assemble_load(const Mesh1D& mesh, const std::function<double(double)>& g,
                              int order = 10);

} // namespace fracbs
