#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace fracbs {

/// Nodes and weights of a quadrature rule on [0, 1].
template <class Scalar = double>
struct QuadRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  Eigen::Index size() const { return nodes.size(); }

  template <class F>
  Scalar apply(F&& f) const {
    Scalar acc(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule on [0, 1]. Cached; the reference stays valid.
const QuadRule<double>& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [0, 1] for the weight t^alpha (alpha > -1).
/// Cached; the reference stays valid.
const QuadRule<double>& gauss_jacobi01(int n, double alpha);

/// Golub-Welsch rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
QuadRule<double> gauss_jacobi(int n, double alpha, double beta);

/// Panel edges on [a, b] refined geometrically toward a: first width h0, then
/// growing by `growth` until b is reached. A trailing sliver is merged.
std::vector<double> graded_edges(double a, double b, double h0, double growth = 2.0);

/// Integral of f over [a, b] on panels graded toward a. If alpha != 0 the first
/// panel uses Gauss-Jacobi for an (t - a)^alpha endpoint behavior of f.
template <class F>
double integrate_graded(F&& f, double a, double b, double h0, int order, double alpha = 0.0,
                        double growth = 2.0) {
  const auto edges = graded_edges(a, b, h0, growth);
  const auto& gl = gauss_legendre(order);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double h = edges[k + 1] - lo;
    if (k == 0 && alpha != 0.0) {
      const auto& gj = gauss_jacobi01(order, alpha);
      for (Eigen::Index i = 0; i < gj.size(); ++i) {
        const double v = gj.nodes[i];
        acc += h * gj.weights[i] * std::pow(v, -alpha) * f(lo + h * v);
      }
    } else {
      for (Eigen::Index i = 0; i < gl.size(); ++i)
        acc += h * gl.weights[i] * f(lo + h * gl.nodes[i]);
    }
  }
  return acc;
}

/// Integral over [a, b] on panels graded toward b (mirror of integrate_graded).
template <class F>
double integrate_graded_right(F&& f, double a, double b, double h0, int order,
                              double alpha = 0.0, double growth = 2.0) {
  return integrate_graded([&](double u) { return f(a + b - u); }, a, b, h0, order, alpha,
                          growth);
}

/// Chebyshev-Lobatto interpolant of fixed degree on [a, b], evaluated by the
/// barycentric formula.
class ChebPanel {
public:
  ChebPanel() = default;
  template <class F>
  ChebPanel(double a, double b, int m, F&& f) : a_(a), b_(b) {
    x_.resize(m + 1);
    y_.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
      x_[j] = std::cos(EIGEN_PI * j / m);
      y_[j] = f(0.5 * (a + b) + 0.5 * (b - a) * x_[j]);
    }
  }
  double operator()(double t) const;
  double lo() const { return a_; }
  double hi() const { return b_; }

private:
  double a_ = 0, b_ = 1;
  Eigen::VectorXd x_, y_;
};

} // namespace fracbs
