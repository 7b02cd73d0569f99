#pragma once

#include <optional>

namespace fracbs {

/// Dimension N and order s of the fractional Laplacian.
struct FracParams {
  int n = 2;
  double s = 0.5;
  bool s_strict = false; ///< s > 1/2, required by the trace results

  /// Validates 2 <= n and 0 < s < 1; throws DomainError otherwise.
  static FracParams make(int n, double s);
};

struct CriticalExponents {
  double p1 = 0;              ///< (N+2s)/N
  double p2 = 0;              ///< (N+s)/(N-s)
  std::optional<double> p3;   ///< N/(N-2s); empty when N <= 2s
};

/// Gamma function for real x outside the non-positive integers (Lanczos, g = 7).
double gamma_fn(double x);

/// Euler Beta function B(a, b) for a, b > 0.
double beta_fn(double a, double b);

/// a_{N,s} = Gamma(N/2+s) s(1-s) / (pi^{N/2} Gamma(2-s)).
double normalization_constant(const FracParams& params);

CriticalExponents critical_exponents(const FracParams& params);

/// p3 on [0, (N-2s)s/N), (N+s)/(N-2s+gamma) on [(N-2s)s/N, s].
double marcinkiewicz_exponent(const FracParams& params, double gamma);

/// beta = 2s/(p-1). p > p1 iff beta < N, and p < p3 iff beta > N-2s.
double beta_of_p(const FracParams& params, double p);

/// Inverse of beta_of_p.
double p_of_beta(const FracParams& params, double beta);

/// |S^{m}|, surface area of the unit sphere in R^{m+1}.
double sphere_area(int m);

} // namespace fracbs
