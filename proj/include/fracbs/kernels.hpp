#pragma once

#include "fracbs/error.hpp"
#include "fracbs/params.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace fracbs {

/// Distance to the boundary of the unit ball, 1 - |x|.
template <class D>
double rho(const Eigen::MatrixBase<D>& x) {
  return 1.0 - x.norm();
}

/// Ball Green function for the operator a_{N,s} PV int (u(x)-u(y))|x-y|^{-N-2s} dy.
///   G = kappa |x-y|^{2s-N} I(r0),  I(r0) = int_0^{r0} t^{s-1} (1+t)^{-N/2} dt,
///   r0 = (1-|x|^2)(1-|y|^2)/|x-y|^2,  kappa = Gamma(N/2) / (pi^{N/2} Gamma(s)^2).
/// Arguments are passed as the distance and the two defects 1-|x|^2, 1-|y|^2 so that
/// callers near the boundary avoid cancellation.
class GreenBall {
public:
  explicit GreenBall(const FracParams& params, int order = 14);

  double operator()(double dist, double delta_x, double delta_y) const;

  /// I(r0); equals the incomplete Beta B_{r0/(1+r0)}(s, N/2-s).
  double r0_integral(double r0) const;

  double kappa() const { return kappa_; }
  const FracParams& params() const { return params_; }

private:
  FracParams params_;
  double kappa_;
  double full_beta_;
  int order_;
};

template <class DX, class DY>
double green_ball(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                  const Eigen::MatrixBase<DY>& y);

/// Closed-form ball Martin kernel (1-|x|^2)^s |x-z|^{-N}, equal to 1 at x = 0.
template <class DX, class DZ>
double martin_ball_closed(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                          const Eigen::MatrixBase<DZ>& z) {
  const double d2 = 1.0 - x.squaredNorm();
  if (!(d2 > 0.0))
    throw DomainError("martin_ball: x must be interior");
  return std::pow(d2, params.s) * std::pow((x - z).norm(), -params.n);
}

struct MartinLimit {
  double value = 0;
  double error_estimate = 0;
  std::vector<double> iterates;
};

/// Martin kernel as the limit of G(x, y)/G(0, y) along y = (1-t) z, t -> 0, by
/// Neville-Richardson extrapolation in t. Throws ConvergenceError on failure.
MartinLimit martin_ball_limit(const FracParams& params, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& z, double tol = 1e-11);

template <class DX, class DZ>
double martin_ball(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                   const Eigen::MatrixBase<DZ>& z) {
  return martin_ball_limit(params, x.eval(), z.eval()).value;
}

/// Half-space Martin kernel x_N^s |x-y|^{-N}, normalized to 1 at x = e_N, y = 0.
template <class DX, class DY>
double martin_halfspace(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                        const Eigen::MatrixBase<DY>& y);

/// Poisson kernel a_{N,s} int_B G(x,w) |w-y|^{-N-2s} dw for |y| > 1, by polar
/// quadrature centered at x. N in {2, 3}.
double poisson_ball(const FracParams& params, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Closed form c (1-|x|^2)^s (|y|^2-1)^{-s} |x-y|^{-N}, c = Gamma(N/2) sin(pi s)/pi^{N/2+1}.
double poisson_ball_closed(const FracParams& params, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

struct KernelSample {
  Eigen::VectorXd x;
  Eigen::VectorXd y_or_z;
  double value = 0;
};

enum class Envelope { green_ball, martin_ball, poisson_ball, martin_halfspace };

/// Envelope formula evaluated at one sample.
double envelope_value(const FracParams& params, Envelope kind, const KernelSample& sample);

struct EnvelopeFit {
  double c = 1;               ///< smallest c >= 1 with env/c <= value <= c env
  bool pass = false;          ///< c <= ceiling
  std::size_t worst_index = 0;
  std::vector<std::size_t> rejected; ///< samples whose envelope vanished
};

/// Fits the two-sided constant. `prescale` multiplies every envelope value first.
EnvelopeFit envelope_check(const FracParams& params, const std::vector<KernelSample>& samples,
                           Envelope kind, double ceiling, double prescale = 1.0);

/// Same fit for precomputed (value, envelope) pairs.
EnvelopeFit envelope_fit(const std::vector<double>& values, const std::vector<double>& envelopes,
                         double ceiling);

// ---------------------------------------------------------------------------

template <class DX, class DY>
double green_ball(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                  const Eigen::MatrixBase<DY>& y) {
  const double dist = (x - y).norm();
  if (dist == 0.0)
    throw SingularityError("green_ball: x = y");
  const GreenBall g(params);
  return g((x - y).norm(), 1.0 - x.squaredNorm(), 1.0 - y.squaredNorm());
}

template <class DX, class DY>
double martin_halfspace(const FracParams& params, const Eigen::MatrixBase<DX>& x,
                        const Eigen::MatrixBase<DY>& y) {
  const double xn = x(x.size() - 1);
  if (!(xn > 0.0))
    throw SingularityError("martin_halfspace: x must lie in the open upper half-space");
  return std::pow(xn, params.s) * std::pow((x - y).norm(), -params.n);
}

} // namespace fracbs
