#include "fracbs/ball_solver.hpp"

#include "fracbs/error.hpp"
#include "fracbs/parallel.hpp"
#include "fracbs/separable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracbs {

namespace {

Eigen::VectorXd martin_values(const GreenOperator& g) {
  const DiscMesh& m = g.mesh();
  Eigen::VectorXd out(static_cast<Eigen::Index>(m.half.size()));
  for (std::size_t h = 0; h < m.half.size(); ++h)
    out[static_cast<Eigen::Index>(h)] = martin_z(g.params(), m.nodes[m.half[h]]);
  return out;
}

Eigen::VectorXd positive_power(const Eigen::VectorXd& u, double p) {
  return u.unaryExpr([p](double v) { return v > 0.0 ? std::pow(v, p) : 0.0; });
}

void check_solver_domain(const FracParams& params, double p) {
  if (!(params.s > 0.5 && params.s < 1.0))
    throw DomainError("solve_uk: s must lie in (1/2, 1)");
  const double p2 = critical_exponents(params).p2;
  if (!(p > 0.0 && p < p2))
    throw DomainError("solve_uk: p must lie in (0, p2*) = (0, " + std::to_string(p2) + ")");
}

} // namespace

SolveResult solve_uk(const GreenOperator& g, double p, double k, const SolveOptions& opt) {
  check_solver_domain(g.params(), p);
  if (!(k >= 0.0) || !std::isfinite(k))
    throw DomainError("solve_uk: k must be finite and nonnegative");
  if (!(opt.theta > 0.0 && opt.theta <= 1.0))
    throw DomainError("solve_uk: theta must lie in (0, 1]");
  const Eigen::VectorXd km = k * martin_values(g);
  const Eigen::VectorXd wgt = (1.0 + km.array()).inverse().matrix();
  const Eigen::MatrixXd& W = g.matrix();

  SolveResult out;
  out.u.s = g.params().s;
  out.u.p = p;
  out.u.k = k;
  double theta = opt.theta;
  int halvings = 0;
  std::vector<double> history;
  Eigen::VectorXd u = km;
  double prev = INFINITY, res = INFINITY, upd = INFINITY, window_start = INFINITY;
  int growing = 0, it = 0;
  auto halve = [&](bool restart) {
    if (++halvings > opt.max_halvings)
      throw ConvergenceError("solve_uk: Picard iteration does not settle even at theta = " +
                                 std::to_string(theta) + "; halve theta further",
                             history);
    theta *= 0.5;
    if (restart)
      u = km;
    prev = INFINITY;
    growing = 0;
    window_start = INFINITY;
  };
  for (;; ++it) {
    if (it >= opt.max_iter)
      throw ConvergenceError("solve_uk: no convergence within max_iter (residual " +
                                 std::to_string(res) + "); try a smaller theta",
                             history);
    const Eigen::VectorXd t = km - W * positive_power(u, p);
    res = ((u - t).cwiseAbs().cwiseProduct(wgt)).maxCoeff();
    if (!std::isfinite(res)) {
      halve(true);
      continue;
    }
    if (res <= opt.tol)
      break;
    if (it % opt.stall_window == 0) {
      // Too little progress over a window: the slowest mode is an undamped oscillation.
      if (res > 0.25 * window_start) {
        halve(false);
        continue;
      }
      window_start = res;
    }
    const Eigen::VectorXd next = (1.0 - theta) * u + theta * t;
    upd = ((next - u).cwiseAbs().cwiseProduct(wgt)).maxCoeff();
    history.push_back(upd);
    if (history.size() > 20)
      history.erase(history.begin());
    growing = upd > prev ? growing + 1 : 0;
    prev = upd;
    u = next;
    if (growing >= opt.divergence_window)
      halve(true);
  }
  out.u.values = u;
  out.report.iterations = it;
  out.report.update_norm = upd;
  out.report.residual = res;
  out.report.theta = theta;

  // Sandwich kM - G[(kM)^p] <= u <= kM and sign.
  const Eigen::VectorXd lower = km - W * positive_power(km, p);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double slack = opt.sandwich_tol * (1.0 + km[i]);
    if (u[i] > km[i] + slack || u[i] < lower[i] - slack)
      ++out.report.sandwich_violations;
    if (u[i] < -slack)
      ++out.report.negative_nodes;
  }
  return out;
}

double evaluate(const GreenOperator& g, const DiscField& u, const DiscPoint& x) {
  if (u.values.size() != static_cast<Eigen::Index>(g.mesh().half.size()))
    throw DomainError("evaluate: field does not belong to this mesh");
  return u.k * martin_z(g.params(), x) - g.row(x).dot(positive_power(u.values, u.p));
}

std::vector<Probe> default_probes(int ray_decades) {
  std::vector<Probe> out;
  out.push_back({"x=(0,0)", DiscPoint::from_offset(Eigen::Vector2d(-1.0, 0.0))});
  out.push_back({"x=(0.5,0)", DiscPoint::from_offset(Eigen::Vector2d(-0.5, 0.0))});
  out.push_back({"x=(-0.5,0)", DiscPoint::from_offset(Eigen::Vector2d(-1.5, 0.0))});
  for (int j = 1; j <= ray_decades; ++j) {
    const double t = std::pow(10.0, -j);
    out.push_back({"ray t=1e-" + std::to_string(j), DiscPoint::from_offset(Eigen::Vector2d(-t, 0.0))});
  }
  return out;
}

std::string to_string(SweepClass c) {
  switch (c) {
  case SweepClass::saturating:
    return "saturating";
  case SweepClass::diverging:
    return "diverging";
  default:
    return "undetermined";
  }
}

KSweepResult k_sweep(const GreenOperator& g, double p, const std::vector<double>& ks,
                     const SolveOptions& opt, int ray_decades) {
  check_solver_domain(g.params(), p);
  if (ks.size() < 2)
    throw DomainError("k_sweep: need at least two values of k");
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    if (!(ks[i] < ks[i + 1]))
      throw DomainError("k_sweep: k list must be strictly increasing");
  KSweepResult out;
  out.ks = ks;
  out.probes = default_probes(ray_decades);
  const Eigen::Index np = static_cast<Eigen::Index>(out.probes.size());
  out.values.resize(np, static_cast<Eigen::Index>(ks.size()));

  const FracParams& par = g.params();
  const CriticalExponents ce = critical_exponents(par);
  const bool subcritical = p > ce.p1 && p < ce.p2;
  const double ell = subcritical ? constant_profile(par, p) : 0.0;
  const double a = 2.0 * par.s / (p - 1.0);
  const DiscMesh& m = g.mesh();
  const Eigen::VectorXd km1 = martin_values(g);

  for (std::size_t j = 0; j < ks.size(); ++j) {
    SolveResult r = solve_uk(g, p, ks[j], opt);
    if (j > 0) {
      const Eigen::VectorXd& lo = out.solves.back().u.values;
      for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (r.u.values[i] < lo[i] - opt.sandwich_tol * (1.0 + ks[j] * km1[i]))
          throw Error("k_sweep: u_k decreased in k at node " + std::to_string(i) +
                      " between k = " + std::to_string(ks[j - 1]) + " and " +
                      std::to_string(ks[j]));
    }
    const Eigen::Index col = static_cast<Eigen::Index>(j);
    parallel_for(out.probes.size(), [&](std::size_t q) {
      out.values(static_cast<Eigen::Index>(q), col) = evaluate(g, r.u, out.probes[q].x);
    });
    if (subcritical)
      for (std::size_t h = 0; h < m.half.size(); ++h) {
        const double bound = ell * std::pow(m.nodes[m.half[h]].dist_z(), -a);
        const double v = r.u.values[static_cast<Eigen::Index>(h)];
        out.singular_bound_margin = std::max(out.singular_bound_margin, v / bound);
        if (v > bound * (1.0 + opt.sandwich_tol))
          ++out.singular_bound_violations;
      }
    out.solves.push_back(std::move(r));
  }

  const Eigen::Index last = static_cast<Eigen::Index>(ks.size()) - 1;
  out.last_increment.resize(out.probes.size());
  bool saturating = true, diverging = true;
  for (Eigen::Index q = 0; q < np; ++q) {
    const double prev = out.values(q, last - 1), cur = out.values(q, last);
    out.last_increment[q] = (cur - prev) / std::abs(prev);
    if (q < out.interior_probes) {
      saturating = saturating && std::abs(out.last_increment[q]) < 0.01;
      bool increasing = true;
      for (Eigen::Index j = 0; j < last; ++j)
        increasing = increasing && out.values(q, j + 1) > out.values(q, j);
      diverging = diverging && increasing && out.last_increment[q] > 0.2;
    }
  }
  out.classification = saturating  ? SweepClass::saturating
                       : diverging ? SweepClass::diverging
                                   : SweepClass::undetermined;
  return out;
}

namespace {

/// Piecewise-linear interpolation of a grid field at latitude phi.
double interpolate_latitude(const LatGrid& grid, const std::vector<double>& values, double phi) {
  const auto& x = grid.nodes;
  if (phi <= x.front())
    return values.front();
  if (phi >= x.back())
    return values.back();
  const auto it = std::upper_bound(x.begin(), x.end(), phi);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (phi - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - t) * values[i - 1] + t * values[i];
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

} // namespace

SimilarityResult similarity_profile(const GreenOperator& g, double p, const DiscField& u,
                                    const std::vector<double>& radii, int n_phi,
                                    const LatGrid* omega_grid, const Eigen::VectorXd* omega_dofs) {
  const FracParams& par = g.params();
  const CriticalExponents ce = critical_exponents(par);
  if (!(p > ce.p1 && p < ce.p2))
    throw DomainError("similarity_profile: p must lie in (p1*, p2*)");
  if (radii.empty() || n_phi < 2)
    throw DomainError("similarity_profile: need radii and at least two arc points");
  const double floor = 100.0 * g.mesh().min_dist_z();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > floor && radii[i] < 1.0))
      throw DomainError("similarity_profile: radius " + std::to_string(radii[i]) +
                        " below mesh resolution or outside (0, 1)");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw DomainError("similarity_profile: radii must decrease");
  }
  const double a = 2.0 * par.s / (p - 1.0);
  SimilarityResult out;
  for (double r : radii) {
    Arc arc;
    arc.radius = r;
    arc.phi.resize(n_phi);
    arc.scaled.assign(n_phi, 0.0);
    const double psi_max = std::acos(0.5 * r);
    parallel_for(static_cast<std::size_t>(n_phi), [&](std::size_t i) {
      const double phi = std::numbers::pi * (static_cast<double>(i) + 0.5) / n_phi;
      arc.phi[i] = phi;
      const double psi = phi - 0.5 * std::numbers::pi;
      if (std::abs(psi) >= psi_max)
        return;
      const DiscPoint x =
          DiscPoint::from_offset(r * Eigen::Vector2d(-std::cos(psi), -std::sin(psi)));
      arc.scaled[i] = std::pow(r, a) * std::max(0.0, evaluate(g, u, x));
    });
    out.arcs.push_back(std::move(arc));
  }
  for (std::size_t i = 0; i + 1 < out.arcs.size(); ++i)
    out.pair_difference.push_back(relative_l2(out.arcs[i].scaled, out.arcs[i + 1].scaled));
  if (omega_grid && omega_dofs) {
    const SphericalField f = SphericalField::from_hemisphere(*omega_grid, *omega_dofs);
    const Arc& arc = out.arcs.back();
    std::vector<double> w(arc.phi.size());
    for (std::size_t i = 0; i < arc.phi.size(); ++i)
      w[i] = interpolate_latitude(*omega_grid, f.values,
                                  std::min(arc.phi[i], std::numbers::pi - arc.phi[i]));
    out.omega_difference = relative_l2(arc.scaled, w);
  }
  return out;
}

EnvelopeFit similarity_envelope(const GreenOperator& g, double p, const DiscField& u,
                                const DiscField& previous, double saturation) {
  const FracParams& par = g.params();
  const double e = (p + 1.0) * par.s / (p - 1.0);
  const DiscMesh& m = g.mesh();
  if (previous.values.size() != u.values.size())
    throw DomainError("similarity_envelope: fields live on different meshes");
  std::vector<double> v, env;
  for (std::size_t h = 0; h < m.half.size(); ++h) {
    const Eigen::Index i = static_cast<Eigen::Index>(h);
    const double now = u.values[i], before = previous.values[i];
    if (!(now > 0.0) || (now - before) >= saturation * now)
      continue;
    const DiscPoint& x = m.nodes[m.half[h]];
    v.push_back(now);
    env.push_back(std::pow(x.rho(), par.s) * std::pow(x.dist_z(), -e));
  }
  if (v.empty())
    throw DomainError("similarity_envelope: no saturated nodes");
  return envelope_fit(v, env, INFINITY);
}

} // namespace fracbs
