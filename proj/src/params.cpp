#include "fracbs/params.hpp"

#include "fracbs/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fracbs {

FracParams FracParams::make(int n, double s) {
  if (n < 2)
    throw DomainError("dimension must be >= 2, got " + std::to_string(n));
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("order s must lie in (0,1), got " + std::to_string(s));
  return FracParams{n, s, s > 0.5};
}

double gamma_fn(double x) {
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double pi = std::numbers::pi;
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5)
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = c[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i)
    a += c[i] / (x + i);
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double beta_fn(double a, double b) {
  if (!(a > 0.0 && b > 0.0))
    throw DomainError("beta_fn: arguments must be positive");
  return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
}

double normalization_constant(const FracParams& params) {
  const double n2 = 0.5 * params.n;
  const double s = params.s;
  return gamma_fn(n2 + s) * s * (1.0 - s) /
         (std::pow(std::numbers::pi, n2) * gamma_fn(2.0 - s));
}

CriticalExponents critical_exponents(const FracParams& params) {
  const double n = params.n;
  const double s = params.s;
  CriticalExponents e;
  e.p1 = (n + 2.0 * s) / n;
  e.p2 = (n + s) / (n - s);
  if (n > 2.0 * s)
    e.p3 = n / (n - 2.0 * s);
  return e;
}

double marcinkiewicz_exponent(const FracParams& params, double gamma) {
  const double n = params.n;
  const double s = params.s;
  if (!(gamma >= 0.0 && gamma <= s))
    throw DomainError("marcinkiewicz_exponent: gamma must lie in [0, s]");
  if (gamma < (n - 2.0 * s) * s / n)
    return n / (n - 2.0 * s);
  return (n + s) / (n - 2.0 * s + gamma);
}

double beta_of_p(const FracParams& params, double p) {
  if (!(p > 1.0))
    throw DomainError("beta_of_p: p must exceed 1");
  return 2.0 * params.s / (p - 1.0);
}

double p_of_beta(const FracParams& params, double beta) {
  if (!(beta > 0.0))
    throw DomainError("p_of_beta: beta must be positive");
  return 1.0 + 2.0 * params.s / beta;
}

double sphere_area(int m) {
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h);
}

} // namespace fracbs
