#include "fracbs/eigenpair.hpp"

#include "fracbs/error.hpp"

#include <cmath>

namespace fracbs {

EigenResult principal_eigenpair(const OperatorPair& ops, const PowerOptions& opt) {
  const FracParams& p = ops.params;
  if (!(ops.beta > p.n - 2.0 * p.s && ops.beta < p.n))
    throw DomainError("principal_eigenpair: beta must lie in (N-2s, N)");
  const Eigen::LLT<Eigen::MatrixXd> chol(ops.A);
  if (chol.info() != Eigen::Success)
    throw Error("principal_eigenpair: A is not positive definite");
  Eigen::VectorXd x = ops.lumped;
  x /= std::sqrt(x.dot(ops.mass * x));
  double mu = 0.0;
  std::vector<double> history;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Eigen::VectorXd y = chol.solve(ops.L * x);
    y /= std::sqrt(y.dot(ops.mass * y));
    const double next = y.dot(ops.L * y) / y.dot(ops.A * y);
    history.push_back(next);
    x = y;
    if (it > 2 && std::abs(next - mu) <= opt.tol * std::abs(next)) {
      mu = next;
      break;
    }
    mu = next;
  }
  if (it == opt.max_iter) {
    if (history.size() > 20)
      history.erase(history.begin(), history.end() - 20);
    throw ConvergenceError("principal_eigenpair: power iteration stagnated", history);
  }
  if (x.sum() < 0.0)
    x = -x;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0))
      throw Error("principal_eigenpair: eigenvector not positive at node " + std::to_string(i));
  EigenResult r;
  r.lambda = 1.0 / mu;
  r.beta = ops.beta;
  r.dofs = x;
  r.psi = SphericalField::from_hemisphere(ops.grid, x);
  const Eigen::VectorXd res = ops.A * x - r.lambda * (ops.L * x);
  r.residual = std::sqrt(res.dot(ops.mass.llt().solve(res)));
  r.grid_size = static_cast<int>(x.size());
  r.iterations = it + 1;
  return r;
}

std::vector<double> beta_grid(const FracParams& params, int n) {
  const double lo = params.n - 2.0 * params.s;
  const double hi = params.n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * (i + 1.0) / (n + 1.0);
  return out;
}

LambdaCurve lambda_sweep(const FracParams& params, const LatGrid& grid,
                         const std::vector<double>& betas, const AssemblyOptions& opt) {
  LambdaCurve c;
  if (betas.empty())
    return c;
  for (double b : betas)
    if (!(b > params.n - 2.0 * params.s && b < params.n))
      throw DomainError("lambda_sweep: every beta must lie in (N-2s, N)");
  OperatorPair ops = assemble_operator_pair(grid, params, betas.front(), opt);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (i > 0)
      ops = with_beta(ops, betas[i], opt);
    const EigenResult r = principal_eigenpair(ops);
    c.beta.push_back(betas[i]);
    c.lambda.push_back(r.lambda);
    c.residual.push_back(r.residual);
  }
  return c;
}

BetaRoot find_beta_unit_lambda(const FracParams& params, const LatGrid& grid, double tol,
                               const AssemblyOptions& opt) {
  const double span = 2.0 * params.s;
  double lo = params.n - span + 1e-3 * span;
  double hi = params.n - 1e-3 * span;
  OperatorPair ops = assemble_operator_pair(grid, params, lo, opt);
  BetaRoot root;
  auto lambda_at = [&](double b) {
    ops = with_beta(ops, b, opt);
    ++root.evaluations;
    return principal_eigenpair(ops).lambda;
  };
  const double l_lo = principal_eigenpair(ops).lambda;
  ++root.evaluations;
  const double l_hi = lambda_at(hi);
  if (!(l_lo > 1.0 && l_hi < 1.0))
    throw ConvergenceError("find_beta_unit_lambda: lambda does not cross 1 on the bracket",
                           {l_lo, l_hi});
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double l = lambda_at(mid);
    root.beta = mid;
    root.lambda = l;
    if (std::abs(l - 1.0) < tol)
      return root;
    if (l > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  throw ConvergenceError("find_beta_unit_lambda: bisection exhausted", {root.beta, root.lambda});
}

} // namespace fracbs
