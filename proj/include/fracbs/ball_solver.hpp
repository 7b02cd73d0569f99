#pragma once

#include "fracbs/disc.hpp"
#include "fracbs/kernels.hpp"
#include "fracbs/sphere_ops.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fracbs {

struct SolveOptions {
  double theta = 0.5;      ///< damping of the Picard update
  double tol = 1e-10;      ///< fixed-point residual, sup norm weighted by 1/(1+kM)
  int max_iter = 20000;
  int divergence_window = 50; ///< consecutive growing updates that count as divergence
  int stall_window = 100;  ///< halve theta when the residual drops less than 4x over a window
  int max_halvings = 8;    ///< theta halvings before giving up
  double sandwich_tol = 1e-8; ///< slack in the sandwich test, relative to 1 + kM
};

struct SolveReport {
  int iterations = 0;
  double update_norm = 0;
  double residual = 0;
  double theta = 0;        ///< damping actually used
  int sandwich_violations = 0;
  int negative_nodes = 0;
  bool monotone = true;    ///< nondecreasing against the previous k of a sweep
};

struct SolveResult {
  DiscField u;
  SolveReport report;
};

/// u = kM(., z) - G[u_+^p] on the disc by damped Picard iteration from kM.
SolveResult solve_uk(const GreenOperator& g, double p, double k, const SolveOptions& opt = {});

/// kM(x) - G[u_+^p](x) at an arbitrary interior point (exact for a converged u).
double evaluate(const GreenOperator& g, const DiscField& u, const DiscPoint& x);

/// Probe points: three interior points on the axis and a ray toward z along the inward
/// normal at t = 10^-1, ..., 10^-ray_decades.
struct Probe {
  std::string label;
  DiscPoint x;
};
std::vector<Probe> default_probes(int ray_decades = 14);

enum class SweepClass { saturating, diverging, undetermined };
std::string to_string(SweepClass c);

struct KSweepResult {
  std::vector<double> ks;
  std::vector<Probe> probes;
  Eigen::MatrixXd values;             ///< probes x ks
  std::vector<SolveResult> solves;
  std::vector<double> last_increment; ///< per probe, relative change over the last doubling
  SweepClass classification = SweepClass::undetermined;
  int interior_probes = 3;            ///< probes used for the classification
  int singular_bound_violations = 0;  ///< nodes with u_k > ell |x - z|^{-2s/(p-1)}
  double singular_bound_margin = 0;   ///< max over nodes of u_k |x - z|^{2s/(p-1)} / ell
};

/// Solves for increasing k and classifies the interior probe values. Throws if u_k is not
/// nodewise nondecreasing in k.
KSweepResult k_sweep(const GreenOperator& g, double p, const std::vector<double>& ks,
                     const SolveOptions& opt = {}, int ray_decades = 14);

/// |x - z|^{2s/(p-1)} u on a half arc of radius r about z, against the half-space angle
/// phi in (0, pi) (phi = pi/2 along the inward normal).
struct Arc {
  double radius = 0;
  std::vector<double> phi;
  std::vector<double> scaled;
};

struct SimilarityResult {
  std::vector<Arc> arcs;
  std::vector<double> pair_difference; ///< relative L2 difference of arcs i and i+1
  double omega_difference = -1;        ///< relative L2 distance of the last arc to omega*
};

/// Arcs at the given radii (decreasing). When `omega_grid` is non-null, the smallest arc is
/// compared with the profile given by its hemisphere dofs.
SimilarityResult similarity_profile(const GreenOperator& g, double p, const DiscField& u,
                                    const std::vector<double>& radii, int n_phi = 64,
                                    const LatGrid* omega_grid = nullptr,
                                    const Eigen::VectorXd* omega_dofs = nullptr);

/// Two-sided fit of u against rho^s d^{-(p+1)s/(p-1)}, d = |x - z|, over the saturated
/// nodes: those where u grew by less than `saturation` relative to `previous` (the solution
/// at the preceding k of a sweep).
EnvelopeFit similarity_envelope(const GreenOperator& g, double p, const DiscField& u,
                                const DiscField& previous, double saturation = 0.01);

} // namespace fracbs
