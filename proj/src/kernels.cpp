#include "fracbs/kernels.hpp"

#include "fracbs/error.hpp"
#include "fracbs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fracbs {

GreenBall::GreenBall(const FracParams& params, int order)
    : params_(params), order_(order) {
  const double n2 = 0.5 * params.n;
  const double gs = gamma_fn(params.s);
  kappa_ = gamma_fn(n2) / (std::pow(std::numbers::pi, n2) * gs * gs);
  full_beta_ = beta_fn(params.s, n2 - params.s);
  // Warm the rule cache so concurrent callers only read it.
  gauss_jacobi01(order_, params.s - 1.0);
  gauss_jacobi01(order_, n2 - params.s - 1.0);
}

double GreenBall::r0_integral(double r0) const {
  const double s = params_.s;
  const double n2 = 0.5 * params_.n;
  if (r0 <= 1.0) {
    // r0^s int_0^1 v^{s-1} (1 + r0 v)^{-N/2} dv
    const auto& q = gauss_jacobi01(order_, s - 1.0);
    double acc = 0.0;
    if (params_.n == 2) {
      for (Eigen::Index i = 0; i < q.size(); ++i)
        acc += q.weights[i] / (1.0 + r0 * q.nodes[i]);
    } else {
      for (Eigen::Index i = 0; i < q.size(); ++i)
        acc += q.weights[i] * std::pow(1.0 + r0 * q.nodes[i], -n2);
    }
    return std::pow(r0, s) * acc;
  }
  // B(s, N/2-s) - r0^s int_0^1 v^{N/2-s-1} (v + r0)^{-N/2} dv
  const auto& q = gauss_jacobi01(order_, n2 - s - 1.0);
  double acc = 0.0;
  if (params_.n == 2) {
    for (Eigen::Index i = 0; i < q.size(); ++i)
      acc += q.weights[i] / (q.nodes[i] + r0);
  } else {
    for (Eigen::Index i = 0; i < q.size(); ++i)
      acc += q.weights[i] * std::pow(q.nodes[i] + r0, -n2);
  }
  return full_beta_ - std::pow(r0, s) * acc;
}

double GreenBall::operator()(double dist, double delta_x, double delta_y) const {
  if (!(dist > 0.0))
    throw SingularityError("green_ball: coincident points");
  if (delta_x <= 0.0 || delta_y <= 0.0)
    return 0.0;
  const double r0 = delta_x * delta_y / (dist * dist);
  return kappa_ * std::pow(dist, 2.0 * params_.s - params_.n) * r0_integral(r0);
}

MartinLimit martin_ball_limit(const FracParams& params, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& z, double tol) {
  if (std::abs(z.norm() - 1.0) > 1e-12)
    throw DomainError("martin_ball: z must lie on the unit sphere");
  const double dx = 1.0 - x.squaredNorm();
  if (!(dx > 0.0))
    throw DomainError("martin_ball: x must be interior");
  const GreenBall g(params);
  const int levels = 12;
  std::vector<double> t(levels), f(levels);
  MartinLimit out;
  // Neville tableau evaluated at t = 0; row k uses samples 0..k.
  std::vector<double> p(levels);
  double prev = 0.0;
  for (int k = 0; k < levels; ++k) {
    t[k] = 0.05 * std::pow(0.5, k);
    const Eigen::VectorXd y = (1.0 - t[k]) * z;
    const double dy = t[k] * (2.0 - t[k]);
    const double num = g((x - y).norm(), dx, dy);
    const double den = g(y.norm(), 1.0, dy);
    p[k] = num / den;
    for (int j = k - 1; j >= 0; --j)
      p[j] = p[j + 1] + (p[j + 1] - p[j]) * t[k] / (t[j] - t[k]);
    out.iterates.push_back(p[0]);
    if (k >= 3) {
      const double diff = std::abs(p[0] - prev);
      if (diff <= tol * std::abs(p[0])) {
        out.value = p[0];
        out.error_estimate = diff;
        return out;
      }
    }
    prev = p[0];
  }
  throw ConvergenceError("martin_ball: extrapolation did not settle", out.iterates);
}

double poisson_ball_closed(const FracParams& params, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  const double n2 = 0.5 * params.n;
  const double c = gamma_fn(n2) * std::sin(std::numbers::pi * params.s) /
                   std::pow(std::numbers::pi, n2 + 1.0);
  const double ratio = (1.0 - x.squaredNorm()) / (y.squaredNorm() - 1.0);
  return c * std::pow(ratio, params.s) * std::pow((x - y).norm(), -params.n);
}

namespace {

// Integral over the ray w = x + r e, r in (0, R(e)), of G(x,w) |w-y|^{-N-2s} r^{N-1}.
double poisson_ray(const GreenBall& g, const FracParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& e, const Eigen::VectorXd& y, double rho_y) {
  const double xe = x.dot(e);
  const double dx = 1.0 - x.squaredNorm();
  const double big_r = -xe + std::sqrt(xe * xe + dx);
  const double s = params.s;
  const int n = params.n;
  auto integrand = [&](double r) {
    const Eigen::VectorXd w = x + r * e;
    // 1-|w|^2 = (R - r)(r + R + 2 x.e), exact near the boundary.
    const double dw = (big_r - r) * (r + big_r + 2.0 * xe);
    if (dw <= 0.0)
      return 0.0;
    return g(r, dx, dw) * std::pow((w - y).norm(), -n - 2.0 * s) * std::pow(r, n - 1);
  };
  const double mid = 0.5 * big_r;
  const int order = 12;
  const double near0 = integrate_graded(integrand, 0.0, mid, mid * 1e-3, order, 2.0 * s - 1.0);
  const double h_edge = std::min(mid, std::max(1e-9, 0.05 * rho_y)) * 0.25;
  const double near_r =
      integrate_graded_right(integrand, mid, big_r, h_edge, order, s);
  return near0 + near_r;
}

} // namespace

double poisson_ball(const FracParams& params, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (params.n != 2 && params.n != 3)
    throw DomainError("poisson_ball: N must be 2 or 3");
  const double ny = y.norm();
  if (ny <= 1.0)
    throw SingularityError("poisson_ball: y must lie outside the closed ball");
  if (!(x.norm() < 1.0))
    throw DomainError("poisson_ball: x must be interior");
  const GreenBall g(params);
  const double rho_y = ny - 1.0;
  const Eigen::VectorXd axis = (y - x).normalized();
  const double a = normalization_constant(params);
  // Angular grading toward the direction of y, where the integrand peaks.
  const double h_ang = std::clamp(0.5 * rho_y / (y - x).norm(), 1e-8, 0.5);
  const int order = 12;
  if (params.n == 2) {
    Eigen::VectorXd perp(2);
    perp << -axis[1], axis[0];
    auto f = [&](double theta) {
      Eigen::VectorXd e = std::cos(theta) * axis + std::sin(theta) * perp;
      return poisson_ray(g, params, x, e, y, rho_y);
    };
    const double half = integrate_graded(f, 0.0, std::numbers::pi, h_ang, order);
    const double other =
        integrate_graded([&](double t) { return f(-t); }, 0.0, std::numbers::pi, h_ang, order);
    return a * (half + other);
  }
  // N = 3: polar angle from the axis graded toward 0, azimuth by the periodic trapezoid rule.
  Eigen::Vector3d ax = axis;
  Eigen::Vector3d u1 = ax.unitOrthogonal();
  Eigen::Vector3d u2 = ax.cross(u1);
  const int n_az = 48;
  auto f = [&](double theta) {
    double acc = 0.0;
    for (int j = 0; j < n_az; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_az;
      Eigen::VectorXd e = std::cos(theta) * ax +
                          std::sin(theta) * (std::cos(phi) * u1 + std::sin(phi) * u2);
      acc += poisson_ray(g, params, x, e, y, rho_y);
    }
    return acc * (2.0 * std::numbers::pi / n_az) * std::sin(theta);
  };
  return a * integrate_graded(f, 0.0, std::numbers::pi, h_ang, order);
}

double envelope_value(const FracParams& params, Envelope kind, const KernelSample& sample) {
  const double s = params.s;
  const int n = params.n;
  const Eigen::VectorXd& x = sample.x;
  const Eigen::VectorXd& y = sample.y_or_z;
  const double d = (x - y).norm();
  switch (kind) {
  case Envelope::green_ball: {
    const double a = std::pow(d, 2.0 * s - n);
    const double b = std::pow(rho(x) * rho(y), s) * std::pow(d, -n);
    return std::min(a, b);
  }
  case Envelope::martin_ball:
    return std::pow(rho(x), s) * std::pow(d, -n);
  case Envelope::poisson_ball: {
    const double ry = y.norm() - 1.0;
    return std::pow(rho(x), s) / (std::pow(ry, s) * std::pow(1.0 + ry, s)) * std::pow(d, -n);
  }
  case Envelope::martin_halfspace:
    return std::pow(x(x.size() - 1), s) * std::pow(d, -n);
  }
  return 0.0;
}

EnvelopeFit envelope_fit(const std::vector<double>& values, const std::vector<double>& envelopes,
                         double ceiling) {
  if (values.empty() || values.size() != envelopes.size())
    throw DomainError("envelope_fit: need matching nonempty value and envelope lists");
  EnvelopeFit fit;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double e = envelopes[i];
    if (!std::isfinite(v))
      throw DomainError("envelope_fit: non-finite value at sample " + std::to_string(i));
    if (!(e > 0.0) || !std::isfinite(e)) {
      fit.rejected.push_back(i);
      continue;
    }
    const double r = v > 0.0 ? std::max(v / e, e / v) : INFINITY;
    if (r > fit.c) {
      fit.c = r;
      fit.worst_index = i;
    }
  }
  fit.pass = fit.c <= ceiling && fit.rejected.size() < values.size();
  return fit;
}

EnvelopeFit envelope_check(const FracParams& params, const std::vector<KernelSample>& samples,
                           Envelope kind, double ceiling, double prescale) {
  std::vector<double> v, e;
  v.reserve(samples.size());
  e.reserve(samples.size());
  for (const auto& smp : samples) {
    v.push_back(smp.value);
    e.push_back(prescale * envelope_value(params, kind, smp));
  }
  return envelope_fit(v, e, ceiling);
}

} // namespace fracbs
