#include "fracbs/trace_diag.hpp"

#include "fracbs/error.hpp"
#include "fracbs/parallel.hpp"
#include "fracbs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fracbs {

namespace {

constexpr double pi = std::numbers::pi;

/// Point on the circle |x| = 1 - beta at angle gamma, offset from z = (1, 0) computed
/// without cancellation.
DiscPoint circle_point(double beta, double gamma) {
  const double sh = std::sin(0.5 * gamma);
  DiscPoint p;
  // (1 - beta) cos(gamma) - 1 = -beta - 2 (1 - beta) sin^2(gamma / 2)
  p.offset = Eigen::Vector2d(-beta - 2.0 * (1.0 - beta) * sh * sh, (1.0 - beta) * std::sin(gamma));
  p.delta = beta * (2.0 - beta);
  return p;
}

struct CircleRule {
  std::vector<double> gamma, weight; ///< weight includes the arc length factor
};

CircleRule circle_rule(double beta, const std::vector<double>& focus) {
  std::vector<double> cuts{-pi, pi};
  for (double f : focus) {
    const double c = std::remainder(f, 2.0 * pi);
    cuts.push_back(c);
    for (double h = 0.25 * beta; h < pi; h *= 2.0)
      for (double e : {c - h, c + h})
        cuts.push_back(std::remainder(e, 2.0 * pi));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> edges;
  for (double c : cuts)
    if (edges.empty() || c - edges.back() > 1e-6 * beta)
      edges.push_back(c);
  const auto& q = gauss_legendre(8);
  CircleRule r;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], h = edges[i + 1] - edges[i];
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      r.gamma.push_back(a + h * q.nodes[j]);
      r.weight.push_back(h * q.weights[j] * (1.0 - beta));
    }
  }
  return r;
}

Eigen::VectorXd martin_nodes(const GreenOperator& g) {
  const DiscMesh& m = g.mesh();
  Eigen::VectorXd out(static_cast<Eigen::Index>(m.half.size()));
  for (std::size_t h = 0; h < m.half.size(); ++h)
    out[static_cast<Eigen::Index>(h)] = martin_z(g.params(), m.nodes[m.half[h]]);
  return out;
}

void check_ray(const GreenOperator& g, double t, const char* who) {
  if (!(t >= 1e3 * g.mesh().options.rho_min) || !(t < 1.0))
    throw DomainError(std::string(who) + ": distance " + std::to_string(t) +
                      " below mesh resolution or outside (0, 1)");
}

} // namespace

LevelSetIntegral level_set_integral(const DiscFunction& v, double s, double beta,
                                    const std::vector<double>& focus, double beta0) {
  if (!(beta0 > 0.0 && beta0 < 1.0) || !(beta > 0.0 && beta < beta0))
    throw DomainError("level_set_integral: beta must lie in (0, beta0) with beta0 < 1");
  const CircleRule r = circle_rule(beta, focus);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.gamma.size(); ++i)
    acc += r.weight[i] * v(circle_point(beta, r.gamma[i]));
  LevelSetIntegral out;
  out.beta = beta;
  out.raw = acc;
  out.scaled = std::pow(beta, 1.0 - s) * acc;
  return out;
}

GreenPotential::GreenPotential(const GreenOperator& g, const Eigen::VectorXd& source)
    : g_(&g), values_(g.apply(source)) {
  const DiscMesh& m = g.mesh();
  const double s = g.params().s;
  ratio_.resize(m.size());
  logarithmic_ = true;
  for (std::size_t k = 0; k < m.size(); ++k) {
    ratio_[k] = values_[m.half_of[k]] / std::pow(m.nodes[k].delta, s);
    logarithmic_ = logarithmic_ && ratio_[k] > 0.0;
  }
  if (logarithmic_)
    for (double& r : ratio_)
      r = std::log(r);
}

namespace {

/// Four-point stencil start and cubic Lagrange weights at v over cell centres.
void cubic_stencil(const std::vector<double>& edges, double v, int& start,
                   std::array<double, 4>& w) {
  const int n = static_cast<int>(edges.size()) - 1;
  auto centre = [&](int i) { return 0.5 * (edges[i] + edges[i + 1]); };
  v = std::clamp(v, centre(0), centre(n - 1));
  int c = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
  c = std::clamp(c, 0, n - 1);
  if (v < centre(c))
    --c; // now centre(c) <= v <= centre(c + 1)
  start = std::clamp(c - 1, 0, n - 4);
  std::array<double, 4> x;
  for (int k = 0; k < 4; ++k)
    x[k] = centre(start + k);
  for (int k = 0; k < 4; ++k) {
    double l = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != k)
        l *= (v - x[j]) / (x[k] - x[j]);
    w[k] = l;
  }
}

} // namespace

double GreenPotential::operator()(const DiscPoint& x) const {
  const DiscMesh& m = g_->mesh();
  const Eigen::Vector2d lp = x.log_polar();
  int i0, j0;
  std::array<double, 4> wl, wt;
  cubic_stencil(m.ell_edges, lp.x(), i0, wl);
  cubic_stencil(m.theta_edges, lp.y(), j0, wt);
  double f = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      f += wl[a] * wt[b] * ratio_[m.index(i0 + a, j0 + b)];
  if (logarithmic_)
    f = std::exp(f);
  return std::pow(x.delta, g_->params().s) * f;
}

namespace {

Eigen::VectorXd positive_power(const Eigen::VectorXd& u, double p) {
  return u.unaryExpr([p](double v) { return v > 0.0 ? std::pow(v, p) : 0.0; });
}

} // namespace

SolutionField::SolutionField(const GreenOperator& g, const DiscField& u)
    : g_(&g), k_(u.k), green_(g, positive_power(u.values, u.p)) {}

double SolutionField::operator()(const DiscPoint& x) const {
  return k_ * martin_z(g_->params(), x) - green_(x);
}

double martin_at(const FracParams& params, const DiscPoint& x, double alpha) {
  const double sh = std::sin(0.5 * alpha);
  const Eigen::Vector2d d = x.offset + Eigen::Vector2d(2.0 * sh * sh, -std::sin(alpha));
  return std::pow(x.delta, params.s) * std::pow(d.norm(), -params.n);
}

TraceFit strace_fit(const FracParams& params, const DiscFunction& u,
                    const std::vector<double>& atom_angles, std::vector<double> betas) {
  if (atom_angles.empty())
    throw DomainError("strace_fit: need at least one atom");
  for (std::size_t i = 0; i < atom_angles.size(); ++i)
    for (std::size_t j = i + 1; j < atom_angles.size(); ++j)
      if (std::abs(std::remainder(atom_angles[i] - atom_angles[j], 2.0 * pi)) < 1e-6)
        throw DomainError("strace_fit: ill-conditioned atom set (near-duplicate atoms " +
                          std::to_string(i) + " and " + std::to_string(j) + ")");
  if (betas.empty())
    throw DomainError("strace_fit: need at least one beta");
  std::sort(betas.begin(), betas.end(), std::greater<>());
  const double s = params.s;
  const std::size_t na = atom_angles.size();

  // Fit at the smallest beta.
  const double b = betas.back();
  const CircleRule r = circle_rule(b, atom_angles);
  const std::size_t nq = r.gamma.size();
  Eigen::VectorXd uq(static_cast<Eigen::Index>(nq));
  Eigen::MatrixXd mq(static_cast<Eigen::Index>(nq), static_cast<Eigen::Index>(na));
  for (std::size_t q = 0; q < nq; ++q) {
    const DiscPoint x = circle_point(b, r.gamma[q]);
    uq[q] = u(x);
    if (!std::isfinite(uq[q]))
      throw DomainError("strace_fit: non-finite field value on the circle");
    for (std::size_t a = 0; a < na; ++a)
      mq(q, a) = martin_at(params, x, atom_angles[a]);
  }
  const Eigen::Map<const Eigen::VectorXd> w(r.weight.data(), static_cast<Eigen::Index>(nq));
  Eigen::VectorXd k(static_cast<Eigen::Index>(na));
  if (na == 1) {
    // Weighted median of u/M with weights M dS.
    std::vector<std::size_t> order(nq);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ratio(nq), mass(nq);
    double total = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      ratio[q] = uq[q] / mq(q, 0);
      mass[q] = w[q] * mq(q, 0);
      total += mass[q];
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto c) { return ratio[a] < ratio[c]; });
    double acc = 0.0;
    k[0] = ratio[order.back()];
    for (std::size_t q : order) {
      acc += mass[q];
      if (acc >= 0.5 * total) {
        k[0] = ratio[q];
        break;
      }
    }
  } else {
    // Iteratively reweighted least squares for the L1 objective.
    Eigen::VectorXd rw = w;
    for (int it = 0; it < 200; ++it) {
      const Eigen::MatrixXd a = rw.asDiagonal() * mq;
      const Eigen::MatrixXd gram = mq.transpose() * a;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
      const auto sv = svd.singularValues();
      if (sv[sv.size() - 1] <= 1e-12 * sv[0])
        throw DomainError("strace_fit: ill-conditioned atom set");
      const Eigen::VectorXd next = gram.ldlt().solve(a.transpose() * uq);
      const double change = (next - k).norm();
      k = next;
      const Eigen::VectorXd res = (uq - mq * k).cwiseAbs();
      const double floor = 1e-12 * uq.cwiseAbs().maxCoeff() + 1e-300;
      rw = w.cwiseQuotient(res.cwiseMax(floor));
      if (it > 0 && change <= 1e-12 * k.norm())
        break;
    }
  }

  TraceFit out;
  out.weights.assign(k.data(), k.data() + k.size());
  for (double beta : betas) {
    auto defect = [&](const DiscPoint& x) {
      double m = 0.0;
      for (std::size_t a = 0; a < na; ++a)
        m += k[static_cast<Eigen::Index>(a)] * martin_at(params, x, atom_angles[a]);
      return std::abs(u(x) - m);
    };
    out.defect.push_back(level_set_integral(defect, s, beta, atom_angles, 1.0 - 1e-12));
  }
  const std::size_t n = out.defect.size();
  out.accepted = n >= 3 && out.defect[n - 1].scaled < out.defect[n - 2].scaled &&
                 out.defect[n - 2].scaled < out.defect[n - 3].scaled;
  return out;
}

RayCurve gfm_ratio(const GreenOperator& g, double p, const std::vector<double>& dists) {
  const FracParams& par = g.params();
  if (!(p > 0.0 && p < critical_exponents(par).p2))
    throw DomainError("gfm_ratio: p must lie in (0, p2*)");
  const Eigen::VectorXd mp = positive_power(martin_nodes(g), p);
  RayCurve out;
  out.dist = dists;
  out.value.resize(dists.size());
  for (double t : dists)
    check_ray(g, t, "gfm_ratio");
  parallel_for(dists.size(), [&](std::size_t i) {
    const DiscPoint x = DiscPoint::from_offset(Eigen::Vector2d(-dists[i], 0.0));
    out.value[i] = g.row(x).dot(mp) / martin_z(par, x);
  });
  return out;
}

std::string to_string(GrowthClass c) {
  switch (c) {
  case GrowthClass::power:
    return "power";
  case GrowthClass::logarithmic:
    return "logarithmic";
  default:
    return "bounded";
  }
}

GmpResult gmp_bound_check(const GreenOperator& g, double p, int decades) {
  const FracParams& par = g.params();
  if (!(p > 0.0 && p < critical_exponents(par).p2))
    throw DomainError("gmp_bound_check: p must lie in (0, p2*)");
  if (decades < 4)
    throw DomainError("gmp_bound_check: need at least four decades for a slope fit");
  check_ray(g, std::pow(10.0, -decades), "gmp_bound_check");
  const Eigen::VectorXd mp = positive_power(martin_nodes(g), p);
  GmpResult out;
  out.predicted = par.s - (par.n - par.s) * p;
  out.curve.dist.resize(decades);
  out.curve.value.resize(decades);
  parallel_for(static_cast<std::size_t>(decades), [&](std::size_t i) {
    const double t = std::pow(10.0, -static_cast<double>(i + 1));
    const DiscPoint x = DiscPoint::from_offset(Eigen::Vector2d(-t, 0.0));
    out.curve.dist[i] = t;
    out.curve.value[i] = g.row(x).dot(mp) / std::pow(x.rho(), par.s);
  });
  // Least-squares slope over the last four decades.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 4;
  for (int i = decades - n; i < decades; ++i) {
    const double lx = std::log(out.curve.dist[i]), ly = std::log(out.curve.value[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const auto& v = out.curve.value;
  const double d1 = v[decades - 1] - v[decades - 2], d0 = v[decades - 2] - v[decades - 3];
  out.increment_ratio = d1 / d0;
  out.classification = out.increment_ratio > 2.0   ? GrowthClass::power
                       : out.increment_ratio > 0.6 ? GrowthClass::logarithmic
                                                   : GrowthClass::bounded;
  return out;
}

double weak_norm_probe(const DiscMesh& mesh, double s, const Eigen::VectorXd& field, double q) {
  if (!(q > 1.0))
    throw DomainError("weak_norm_probe: q must exceed 1");
  if (field.size() != static_cast<Eigen::Index>(mesh.half.size()))
    throw DomainError("weak_norm_probe: field does not belong to this mesh");
  const std::size_t n = mesh.half.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return std::abs(field[a]) > std::abs(field[b]); });
  double mass = 0.0, best = 0.0;
  for (std::size_t i = 0; i < n;) {
    const double level = std::abs(field[order[i]]);
    // Every node at this level joins before the level is used as t.
    while (i < n && std::abs(field[order[i]]) == level) {
      const int k = mesh.half[order[i]];
      mass += 2.0 * mesh.weight[k] * std::pow(mesh.nodes[k].rho(), s);
      ++i;
    }
    best = std::max(best, level * std::pow(mass, 1.0 / q));
  }
  return best;
}

} // namespace fracbs
