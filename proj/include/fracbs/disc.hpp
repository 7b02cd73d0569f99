#pragma once

#include "fracbs/kernels.hpp"
#include "fracbs/params.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fracbs {

/// Point of the unit disc stored relative to the boundary point z = (1, 0).
/// Keeping the offset x - z and the defect 1 - |x|^2 avoids cancellation near z and
/// near the boundary.
struct DiscPoint {
  Eigen::Vector2d offset;
  double delta = 0; ///< 1 - |x|^2

  Eigen::Vector2d position() const { return Eigen::Vector2d(1.0, 0.0) + offset; }
  double dist_z() const { return offset.norm(); }
  double rho() const { return delta / (1.0 + position().norm()); }

  /// Conformal coordinates: w = (1 - x)/(1 + x) in the right half plane,
  /// w = e^ell (cos theta, sin theta).
  static DiscPoint conformal(double ell, double theta);
  /// From Cartesian coordinates (defect computed directly).
  static DiscPoint cartesian(const Eigen::Vector2d& x);
  /// From the offset x - z, accurate for small offsets.
  static DiscPoint from_offset(const Eigen::Vector2d& offset);
  /// Inverse of `conformal`: (ell, theta).
  Eigen::Vector2d log_polar() const;
};

struct DiscMeshOptions {
  double rho_min = 1e-17;   ///< innermost log-polar radius about z
  double rho_mid = 1.0;     ///< switch from the fine to the coarse radial step
  double rho_max = 1e4;     ///< outermost radius; the part beyond is a 2 pi/rho_max^2 cap at -z
  double ratio_z = 0.7;     ///< radial ratio rho_{k}/rho_{k+1} for rho < rho_mid
  double ratio_far = 0.5;   ///< radial ratio for rho > rho_mid
  double theta_min = 1e-4;  ///< smallest angular width at the boundary theta = +-pi/2
  double ratio_theta = 0.7; ///< ratio of successive angular widths toward the boundary
  double max_theta = 0.15;  ///< cap on angular widths
};

/// Log-polar mesh of the unit disc in conformal coordinates about z = (1,0): cells are
/// [ell_i, ell_{i+1}] x [theta_j, theta_{j+1}], graded geometrically toward z and toward
/// the boundary. Cells are symmetric about theta = 0; node k sits at the parameter
/// midpoint of cell k.
struct DiscMesh {
  std::vector<double> ell_edges, theta_edges;
  std::vector<DiscPoint> nodes;
  std::vector<double> ell, theta; ///< node parameters
  std::vector<double> weight;     ///< cell areas
  std::vector<int> mirror;        ///< node index of the reflection theta -> -theta
  std::vector<int> half;          ///< nodes with theta > 0, increasing index
  std::vector<int> half_of;       ///< node -> position in `half` of itself or its mirror
  int n_ell = 0, n_theta = 0;
  DiscMeshOptions options;

  static DiscMesh make(const DiscMeshOptions& opt = {});
  std::size_t size() const { return nodes.size(); }
  int index(int i_ell, int j_theta) const { return i_ell * n_theta + j_theta; }
  double total_area() const;
  /// Area of the two excluded caps rho < rho_min and rho > rho_max.
  double excluded_area() const;
  double min_dist_z() const;
};

/// Values on the symmetric half of a DiscMesh (nodes with theta > 0).
struct DiscField {
  Eigen::VectorXd values;
  double s = 0, p = 0, k = 0;
};

/// Nystrom product-integration weights W_ij = int_{cell j} G(x_i, y) dy on the half
/// mesh, folded over the symmetry theta -> -theta.
class GreenOperator {
public:
  GreenOperator(const DiscMesh& mesh, const FracParams& params);

  /// (G f)(x_i) for a symmetric f given on the half mesh.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  DiscField apply(const DiscField& f) const;

  /// Row of folded weights for an arbitrary interior point.
  Eigen::VectorXd row(const DiscPoint& x) const;

  const Eigen::MatrixXd& matrix() const { return w_; }
  const DiscMesh& mesh() const { return mesh_; }
  const FracParams& params() const { return params_; }
  const GreenBall& green() const { return green_; }

  /// int_{cell j} G(x, y) dy for one cell and an arbitrary point.
  double cell_integral(const DiscPoint& x, int cell) const;

private:
  DiscMesh mesh_;
  FracParams params_;
  GreenBall green_;
  std::vector<double> diam_;
  Eigen::MatrixXd w_;
};

/// Martin kernel at z = (1,0) from the stored offset and defect.
double martin_z(const FracParams& params, const DiscPoint& x);

/// Torsion function G[1] of the ball in closed form.
double torsion_ball(const FracParams& params, double delta);

} // namespace fracbs
