#include "fracbs/disc.hpp"

#include "fracbs/error.hpp"
#include "fracbs/parallel.hpp"
#include "fracbs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace fracbs {

namespace {

constexpr double half_pi = 0.5 * std::numbers::pi;

/// Edges on [0, b] graded toward b: widths h_b, h_b/r, ... capped by h_max.
std::vector<double> one_sided(double b, double h_b, double r_b, double h_max) {
  std::vector<double> right{b, b - h_b};
  double db = h_b;
  for (;;) {
    const double nb = db / r_b;
    if (nb - db > h_max || nb >= 0.5 * b)
      break;
    db = nb;
    right.push_back(b - db);
  }
  const double lo = right.back();
  const int n = std::max(1, static_cast<int>(std::ceil(lo / h_max)));
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo * i / n);
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    out.push_back(*it);
  return out;
}

void uniform_edges(std::vector<double>& out, double a, double b, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  for (int i = out.empty() ? 0 : 1; i <= n; ++i)
    out.push_back(a + (b - a) * i / n);
}

/// Area density of the conformal coordinates: |dx/dw|^2 rho^2 in d ell d theta.
double area_density(double ell, double theta) {
  const double rho = std::exp(ell);
  const double a = 1.0 + rho * std::cos(theta), b = rho * std::sin(theta);
  const double q = a * a + b * b;
  return 4.0 * rho * rho / (q * q);
}

double rect_area(double l0, double l1, double t0, double t1) {
  const auto& q = gauss_legendre(12);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = 0; j < q.size(); ++j)
      acc += q.weights[i] * q.weights[j] *
             area_density(l0 + (l1 - l0) * q.nodes[i], t0 + (t1 - t0) * q.nodes[j]);
  return acc * (l1 - l0) * (t1 - t0);
}

} // namespace

DiscPoint DiscPoint::conformal(double ell, double theta) {
  const double rho = std::exp(ell);
  const double wr = rho * std::cos(theta), wi = rho * std::sin(theta);
  const double a = 1.0 + wr, b = wi;
  const double q = a * a + b * b;
  DiscPoint p;
  p.offset = Eigen::Vector2d(-2.0 * (wr * a + wi * b) / q, -2.0 * (wi * a - wr * b) / q);
  p.delta = 4.0 * wr / q;
  return p;
}

DiscPoint DiscPoint::cartesian(const Eigen::Vector2d& x) {
  DiscPoint p;
  p.offset = x - Eigen::Vector2d(1.0, 0.0);
  p.delta = 1.0 - x.squaredNorm();
  return p;
}

DiscPoint DiscPoint::from_offset(const Eigen::Vector2d& offset) {
  DiscPoint p;
  p.offset = offset;
  // 1 - |z + o|^2 = -(2 o_x + |o|^2)
  p.delta = -(2.0 * offset.x() + offset.squaredNorm());
  return p;
}

Eigen::Vector2d DiscPoint::log_polar() const {
  const double dx = 2.0 + offset.x(), dy = offset.y();
  const double d2 = dx * dx + dy * dy;
  const double wr = delta / d2, wi = -2.0 * offset.y() / d2;
  return Eigen::Vector2d(std::log(std::hypot(wr, wi)), std::atan2(wi, wr));
}

DiscMesh DiscMesh::make(const DiscMeshOptions& opt) {
  if (!(opt.rho_min > 0 && opt.rho_min < opt.rho_mid && opt.rho_mid < opt.rho_max &&
        opt.ratio_z > 0 && opt.ratio_z < 1 && opt.ratio_far > 0 && opt.ratio_far < 1 &&
        opt.theta_min > 0 && opt.theta_min < 0.5 && opt.ratio_theta > 0 &&
        opt.ratio_theta < 1 && opt.max_theta > 0))
    throw DomainError("DiscMesh: invalid mesh options");
  DiscMesh m;
  m.options = opt;
  uniform_edges(m.ell_edges, std::log(opt.rho_min), std::log(opt.rho_mid), -std::log(opt.ratio_z));
  uniform_edges(m.ell_edges, std::log(opt.rho_mid), std::log(opt.rho_max),
                -std::log(opt.ratio_far));
  const std::vector<double> upper = one_sided(half_pi, opt.theta_min, opt.ratio_theta,
                                              opt.max_theta);
  for (auto it = upper.rbegin(); it != upper.rend(); ++it)
    m.theta_edges.push_back(-*it);
  for (std::size_t i = 1; i < upper.size(); ++i)
    m.theta_edges.push_back(upper[i]);
  m.n_ell = static_cast<int>(m.ell_edges.size()) - 1;
  m.n_theta = static_cast<int>(m.theta_edges.size()) - 1;
  const int n = m.n_ell * m.n_theta;
  m.nodes.resize(n);
  m.ell.resize(n);
  m.theta.resize(n);
  m.weight.resize(n);
  m.mirror.resize(n);
  m.half_of.resize(n);
  for (int i = 0; i < m.n_ell; ++i)
    for (int j = 0; j < m.n_theta; ++j) {
      const int k = m.index(i, j);
      m.ell[k] = 0.5 * (m.ell_edges[i] + m.ell_edges[i + 1]);
      m.theta[k] = 0.5 * (m.theta_edges[j] + m.theta_edges[j + 1]);
      m.nodes[k] = DiscPoint::conformal(m.ell[k], m.theta[k]);
      m.weight[k] = rect_area(m.ell_edges[i], m.ell_edges[i + 1], m.theta_edges[j],
                              m.theta_edges[j + 1]);
      m.mirror[k] = m.index(i, m.n_theta - 1 - j);
    }
  for (int k = 0; k < n; ++k)
    if (m.theta[k] > 0.0)
      m.half.push_back(k);
  std::vector<int> pos(n, -1);
  for (std::size_t h = 0; h < m.half.size(); ++h)
    pos[m.half[h]] = static_cast<int>(h);
  for (int k = 0; k < n; ++k)
    m.half_of[k] = pos[k] >= 0 ? pos[k] : pos[m.mirror[k]];
  return m;
}

double DiscMesh::total_area() const {
  double acc = 0.0;
  for (double w : weight)
    acc += w;
  return acc;
}

double DiscMesh::excluded_area() const {
  // Both caps in the variable r in (0, r_max]: the density 4 r/(r^2 +- 2 r cos + 1)^2 with
  // r = rho near z and r = 1/rho near -z.
  const auto& q = gauss_legendre(16);
  auto cap = [&](double rmax) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double th = -half_pi + std::numbers::pi * q.nodes[i];
      for (Eigen::Index j = 0; j < q.size(); ++j) {
        const double r = rmax * q.nodes[j];
        const double d = r * r + 2.0 * r * std::cos(th) + 1.0;
        acc += q.weights[i] * q.weights[j] * 4.0 * r / (d * d);
      }
    }
    return acc * std::numbers::pi * rmax;
  };
  return cap(options.rho_min) + cap(1.0 / options.rho_max);
}

double DiscMesh::min_dist_z() const {
  double d = INFINITY;
  for (const auto& p : nodes)
    d = std::min(d, p.dist_z());
  return d;
}

double martin_z(const FracParams& params, const DiscPoint& x) {
  return std::pow(x.delta, params.s) * std::pow(x.dist_z(), -params.n);
}

double torsion_ball(const FracParams& params, double delta) {
  const double n2 = 0.5 * params.n;
  return gamma_fn(n2) * std::pow(delta, params.s) /
         (gamma_fn(1.0 + params.s) * gamma_fn(n2 + params.s));
}

namespace {

struct Rect {
  double l0, l1, t0, t1;
};

double physical_diameter(const Rect& r) {
  const DiscPoint c = DiscPoint::conformal(0.5 * (r.l0 + r.l1), 0.5 * (r.t0 + r.t1));
  double d = 0.0;
  for (double l : {r.l0, r.l1})
    for (double t : {r.t0, r.t1})
      d = std::max(d, (DiscPoint::conformal(l, t).offset - c.offset).norm());
  return 2.0 * d;
}

class CellIntegrator {
public:
  CellIntegrator(const GreenBall& g, double s) : g_(g), s_(s) {}

  double integrate(const DiscPoint& x, const Eigen::Vector2d& px, const Rect& r,
                   int depth) const {
    const double dl = r.l1 - r.l0, dt = r.t1 - r.t0;
    const bool aniso = dl > 2.0 * dt || dt > 2.0 * dl;
    const bool deep = depth >= 60;
    // Points on (or within rounding of) the boundary count as inside.
    const double tol = 1e-12 * (std::abs(px.x()) + 1.0);
    const Eigen::Vector2d pc(std::clamp(px.x(), r.l0, r.l1), std::clamp(px.y(), r.t0, r.t1));
    if (std::abs(pc.x() - px.x()) <= tol && std::abs(pc.y() - px.y()) <= 1e-14) {
      if (aniso && !deep)
        return split(x, pc, r, depth, dl > dt, dt >= dl);
      return duffy(x, pc, r);
    }
    const DiscPoint yc = DiscPoint::conformal(0.5 * (r.l0 + r.l1), 0.5 * (r.t0 + r.t1));
    const double diam = physical_diameter(r);
    const double centre = (x.offset - yc.offset).norm();
    const double ratio = (centre - 0.5 * diam) / diam;
    if (ratio >= 6.0)
      return gauss(x, r, 2);
    if (ratio >= 2.0 || deep)
      return gauss(x, r, 4);
    if (aniso)
      return split(x, px, r, depth, dl > dt, dt >= dl);
    return split(x, px, r, depth, true, true);
  }

private:
  double split(const DiscPoint& x, const Eigen::Vector2d& px, const Rect& r, int depth,
               bool sl, bool st) const {
    const double lm = 0.5 * (r.l0 + r.l1), tm = 0.5 * (r.t0 + r.t1);
    if (sl && st)
      return integrate(x, px, {r.l0, lm, r.t0, tm}, depth + 1) +
             integrate(x, px, {lm, r.l1, r.t0, tm}, depth + 1) +
             integrate(x, px, {r.l0, lm, tm, r.t1}, depth + 1) +
             integrate(x, px, {lm, r.l1, tm, r.t1}, depth + 1);
    if (sl)
      return integrate(x, px, {r.l0, lm, r.t0, r.t1}, depth + 1) +
             integrate(x, px, {lm, r.l1, r.t0, r.t1}, depth + 1);
    return integrate(x, px, {r.l0, r.l1, r.t0, tm}, depth + 1) +
           integrate(x, px, {r.l0, r.l1, tm, r.t1}, depth + 1);
  }

  double point(const DiscPoint& x, double l, double t) const {
    const DiscPoint y = DiscPoint::conformal(l, t);
    const double d = (x.offset - y.offset).norm();
    if (d == 0.0)
      return 0.0;
    return g_(d, x.delta, y.delta) * area_density(l, t);
  }

  double gauss(const DiscPoint& x, const Rect& r, int n) const {
    const auto& q = gauss_legendre(n);
    const double dl = r.l1 - r.l0, dt = r.t1 - r.t0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
      for (Eigen::Index j = 0; j < q.size(); ++j)
        acc += q.weights[i] * q.weights[j] * point(x, r.l0 + dl * q.nodes[i], r.t0 + dt * q.nodes[j]);
    return acc * dl * dt;
  }

  /// Four triangles with apex at the singular point; radial Gauss-Jacobi for r^{2s-1}.
  double duffy(const DiscPoint& x, const Eigen::Vector2d& P, const Rect& r) const {
    const double alpha = 2.0 * s_ - 1.0;
    const auto& qr = gauss_jacobi01(12, alpha);
    const auto& qv = gauss_legendre(12);
    const std::array<Eigen::Vector2d, 4> c = {
        Eigen::Vector2d(r.l0, r.t0), Eigen::Vector2d(r.l1, r.t0), Eigen::Vector2d(r.l1, r.t1),
        Eigen::Vector2d(r.l0, r.t1)};
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector2d a = c[k] - P, b = c[(k + 1) % 4] - P;
      const double det = std::abs(a.x() * b.y() - a.y() * b.x());
      if (det == 0.0)
        continue;
      for (Eigen::Index i = 0; i < qr.size(); ++i) {
        const double rr = qr.nodes[i];
        const double wr = qr.weights[i] * std::pow(rr, 1.0 - alpha);
        for (Eigen::Index j = 0; j < qv.size(); ++j) {
          const Eigen::Vector2d y = P + rr * ((1.0 - qv.nodes[j]) * a + qv.nodes[j] * b);
          acc += det * wr * qv.weights[j] * point(x, y.x(), y.y());
        }
      }
    }
    return acc;
  }

  const GreenBall& g_;
  double s_;
};

Rect cell_rect(const DiscMesh& m, int k) {
  const int i = k / m.n_theta, j = k % m.n_theta;
  return {m.ell_edges[i], m.ell_edges[i + 1], m.theta_edges[j], m.theta_edges[j + 1]};
}

} // namespace

GreenOperator::GreenOperator(const DiscMesh& mesh, const FracParams& params)
    : mesh_(mesh), params_(params), green_(params) {
  if (params.n != 2)
    throw DomainError("GreenOperator: the disc solver is two-dimensional");
  diam_.resize(mesh_.size());
  for (std::size_t k = 0; k < mesh_.size(); ++k)
    diam_[k] = physical_diameter(cell_rect(mesh_, static_cast<int>(k)));
  const std::size_t nh = mesh_.half.size();
  w_.setZero(nh, nh);
  parallel_for(nh, [&](std::size_t h) {
    w_.row(static_cast<Eigen::Index>(h)) = row(mesh_.nodes[mesh_.half[h]]).transpose();
  });
}

double GreenOperator::cell_integral(const DiscPoint& x, int cell) const {
  return CellIntegrator(green_, params_.s).integrate(x, x.log_polar(), cell_rect(mesh_, cell), 0);
}

Eigen::VectorXd GreenOperator::row(const DiscPoint& x) const {
  if (!(x.dist_z() > 0.0) || !(x.delta > 0.0))
    throw DomainError("GreenOperator: evaluation point must be interior and away from z");
  const Eigen::Vector2d px = x.log_polar();
  const CellIntegrator ci(green_, params_.s);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_.half.size()));
  for (std::size_t k = 0; k < mesh_.size(); ++k) {
    const DiscPoint& y = mesh_.nodes[k];
    const double d = (x.offset - y.offset).norm();
    double v;
    if (d >= 6.5 * diam_[k])
      v = green_(d, x.delta, y.delta) * mesh_.weight[k];
    else
      v = ci.integrate(x, px, cell_rect(mesh_, static_cast<int>(k)), 0);
    out[mesh_.half_of[k]] += v;
  }
  return out;
}

Eigen::VectorXd GreenOperator::apply(const Eigen::VectorXd& f) const {
  if (f.size() != w_.cols() || !f.allFinite())
    throw DomainError("GreenOperator::apply: field must be finite on the half mesh");
  return w_ * f;
}

DiscField GreenOperator::apply(const DiscField& f) const {
  DiscField out = f;
  out.values = apply(f.values);
  return out;
}

} // namespace fracbs
