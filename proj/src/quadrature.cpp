#include "fracbs/quadrature.hpp"

#include "fracbs/error.hpp"
#include "fracbs/params.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace fracbs {

QuadRule<double> gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1)
    throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0 && beta > -1.0))
    throw DomainError("gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * k + ab;
    if (k == 0)
      diag[k] = (beta - alpha) / (ab + 2.0);
    else
      diag[k] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    if (k == 1) {
      // the factor k + alpha + beta cancels; keeps alpha + beta = -1 finite
      sub[0] = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) / (t * t * (t + 1.0)));
      continue;
    }
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = t * t * (t + 1.0) * (t - 1.0);
    sub[k - 1] = std::sqrt(num / den);
  }
  QuadRule<double> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::pow(2.0, ab + 1.0) * gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0) /
                     gamma_fn(ab + 2.0);
  if (n == 1) {
    rule.nodes[0] = diag[0];
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  rule.nodes = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

namespace {

std::mutex cache_mutex;

const QuadRule<double>& cached(int n, double alpha) {
  static std::map<std::pair<int, double>, std::unique_ptr<QuadRule<double>>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it != cache.end())
    return *it->second;
  QuadRule<double> r = gauss_jacobi(n, 0.0, alpha);
  auto out = std::make_unique<QuadRule<double>>();
  out->nodes = 0.5 * (r.nodes.array() + 1.0);
  out->weights = r.weights * std::pow(0.5, alpha + 1.0);
  auto& ref = *out;
  cache.emplace(key, std::move(out));
  return ref;
}

} // namespace

const QuadRule<double>& gauss_legendre(int n) { return cached(n, 0.0); }

const QuadRule<double>& gauss_jacobi01(int n, double alpha) { return cached(n, alpha); }

std::vector<double> graded_edges(double a, double b, double h0, double growth) {
  std::vector<double> e{a};
  const double len = b - a;
  if (!(len > 0.0))
    throw DomainError("graded_edges: empty interval");
  if (!(h0 > 0.0) || h0 >= len) {
    e.push_back(b);
    return e;
  }
  double h = h0;
  double x = a;
  while (x + h < b) {
    x += h;
    e.push_back(x);
    h *= growth;
  }
  if (e.size() > 1 && (b - e.back()) < 0.25 * (e.back() - e[e.size() - 2]))
    e.back() = b;
  else
    e.push_back(b);
  return e;
}

double ChebPanel::operator()(double t) const {
  const double x = (2.0 * t - a_ - b_) / (b_ - a_);
  const Eigen::Index m = x_.size() - 1;
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j <= m; ++j) {
    const double d = x - x_[j];
    if (d == 0.0)
      return y_[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == m)
      w *= 0.5;
    w /= d;
    num += w * y_[j];
    den += w;
  }
  return num / den;
}

} // namespace fracbs
