#pragma once

#include "fracbs/ball_solver.hpp"
#include "fracbs/disc.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace fracbs {

using DiscFunction = std::function<double(const DiscPoint&)>;

struct LevelSetIntegral {
  double beta = 0;
  double raw = 0;    ///< int over the circle |x| = 1 - beta of v dS
  double scaled = 0; ///< beta^{1-s} raw
};

/// Integral of v over the circle |x| = 1 - beta. Panels are graded toward the angles in
/// `focus` (boundary points where v concentrates). beta must lie in (0, beta0).
LevelSetIntegral level_set_integral(const DiscFunction& v, double s, double beta,
                                    const std::vector<double>& focus = {0.0},
                                    double beta0 = 0.5);

/// G[f] off the mesh for a source f on the half mesh: rho-weighted interpolation of the
/// node values of G[f] in the conformal coordinates (exact at nodes).
class GreenPotential {
public:
  GreenPotential(const GreenOperator& g, const Eigen::VectorXd& source);
  double operator()(const DiscPoint& x) const;
  const Eigen::VectorXd& node_values() const { return values_; }

private:
  const GreenOperator* g_;
  Eigen::VectorXd values_;
  std::vector<double> ratio_; ///< values / delta^s on the full tensor grid
  bool logarithmic_ = false;
};

/// u = kM(., z) - G[u_+^p] off the mesh, interpolating the Green part.
class SolutionField {
public:
  SolutionField(const GreenOperator& g, const DiscField& u);
  double operator()(const DiscPoint& x) const;

private:
  const GreenOperator* g_;
  double k_ = 0;
  GreenPotential green_;
};

struct TraceFit {
  std::vector<double> weights;            ///< fitted k_i per atom
  std::vector<LevelSetIntegral> defect;   ///< beta^{1-s} int |u - sum k_i M_i| dS, decreasing beta
  bool accepted = false;                  ///< defect decreasing over the last three betas
};

/// L1 fit of u by sum_i k_i M(., z_i) on the circle at the smallest beta. Atoms are
/// boundary angles; betas are sorted in decreasing order internally.
TraceFit strace_fit(const FracParams& params, const DiscFunction& u,
                    const std::vector<double>& atom_angles, std::vector<double> betas);

/// Martin kernel M(x, z) for a boundary point z at angle alpha.
double martin_at(const FracParams& params, const DiscPoint& x, double alpha);

struct RayCurve {
  std::vector<double> dist;
  std::vector<double> value;
};

/// G[M(., z)^p](x) / M(x, z) at x = z - t e_1 for the given distances t.
RayCurve gfm_ratio(const GreenOperator& g, double p, const std::vector<double>& dists);

enum class GrowthClass { power, logarithmic, bounded };
std::string to_string(GrowthClass c);

struct GmpResult {
  RayCurve curve;       ///< G[M^p] / rho^s along the ray
  double slope = 0;     ///< log-log slope over the last decades
  double predicted = 0; ///< s - (N - s) p
  double increment_ratio = 0; ///< ratio of the last two per-decade increments
  GrowthClass classification = GrowthClass::bounded;
};

/// Growth of G[M^p]/rho^s toward z at t = 10^-1 .. 10^-decades.
GmpResult gmp_bound_check(const GreenOperator& g, double p, int decades = 12);

/// sup_t t * (rho^s-measure of {|f| > t})^{1/q} for a field on the half mesh (exact
/// supremum over t of the piecewise-constant distribution function).
double weak_norm_probe(const DiscMesh& mesh, double s, const Eigen::VectorXd& field, double q);

} // namespace fracbs
