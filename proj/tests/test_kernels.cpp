#include "fracbs/error.hpp"
#include "fracbs/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracbs;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

/// Ball Green function from the incomplete Beta function, with the constant of the
/// operator a_{N,s} PV int (u(x)-u(y))|x-y|^{-N-2s} dy.
double green_oracle(int n, double s, const VectorXd& x, const VectorXd& y) {
  const double d = (x - y).norm();
  const double r0 = (1 - x.squaredNorm()) * (1 - y.squaredNorm()) / (d * d);
  const double n2 = 0.5 * n;
  const double c = std::tgamma(n2) / (std::pow(pi, n2) * std::pow(std::tgamma(s), 2));
  return c * std::pow(d, 2 * s - n) * boost::math::beta(s, n2 - s, r0 / (1 + r0));
}

/// Torsion function G[1](x) for the same operator.
double torsion_oracle(int n, double s, double x2) {
  return std::tgamma(0.5 * n) * std::pow(1 - x2, s) /
         (std::tgamma(1 + s) * std::tgamma(0.5 * n + s));
}

VectorXd random_point(int n, double rmax, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  VectorXd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = g(rng);
  return x.normalized() * rmax * std::pow(u(rng), 1.0 / n);
}

} // namespace

TEST_CASE("Green function against the incomplete Beta function") {
  for (int n : {2, 3})
    for (double s : {0.3, 0.6, 0.75}) {
      const auto par = FracParams::make(n, s);
      std::mt19937_64 rng(7);
      for (int i = 0; i < 50; ++i) {
        const VectorXd x = random_point(n, 0.999, rng), y = random_point(n, 0.999, rng);
        CHECK(green_ball(par, x, y) == doctest::Approx(green_oracle(n, s, x, y)).epsilon(1e-11));
      }
    }
}

TEST_CASE("Green function spot value by quadrature of the r0 integral") {
  const auto par = FracParams::make(2, 0.75);
  const Vector2d x(0, 0), y(0.5, 0);
  const double r0 = 0.75 / 0.25;
  tanh_sinh<double> ts;
  const double integral =
      ts.integrate([](double t) { return std::pow(t, -0.25) / (1 + t); }, 0.0, r0);
  const double ref = 1.0 / (pi * std::pow(std::tgamma(0.75), 2)) * std::pow(0.5, -0.5) * integral;
  CHECK(green_ball(par, x, y) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("Green function properties") {
  const auto par = FracParams::make(2, 0.75);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const VectorXd x = random_point(2, 0.99, rng), y = random_point(2, 0.99, rng);
    const double g = green_ball(par, x, y);
    CHECK(g > 0);
    CHECK(g == doctest::Approx(green_ball(par, y, x)).epsilon(1e-13));
  }
  const Vector2d x(0.2, 0.1);
  CHECK(green_ball(par, x, Vector2d(1.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(green_ball(par, x, x), SingularityError);
}

TEST_CASE("Green function integrates to the torsion function") {
  for (auto [n, s] : {std::pair{2, 0.75}, {2, 0.4}, {3, 0.6}}) {
    const auto par = FracParams::make(n, s);
    const GreenBall g(par);
    // x = 0: radial integral
    gauss_kronrod<double, 31> gk;
    const double area = n == 2 ? 2 * pi : 4 * pi;
    const double at0 =
        area * gk.integrate([&](double r) { return g(r, 1.0, 1 - r * r) * std::pow(r, n - 1); },
                            0.0, 1.0, 25, 1e-13);
    CHECK(at0 == doctest::Approx(torsion_oracle(n, s, 0.0)).epsilon(1e-8));
  }
  // off-center, N = 2: polar coordinates about x
  const auto par = FracParams::make(2, 0.75);
  const GreenBall g(par);
  const Vector2d x(0.6, 0.0);
  gauss_kronrod<double, 31> gk;
  const double val = gk.integrate(
      [&](double th) {
        const Vector2d e(std::cos(th), std::sin(th));
        const double b = x.dot(e);
        const double R = -b + std::sqrt(b * b + 1 - x.squaredNorm());
        return gk.integrate(
            [&](double r) { return g(r, 1 - x.squaredNorm(), (R - r) * (r + R + 2 * b)) * r; },
            0.0, R, 20, 1e-12);
      },
      0.0, 2 * pi, 15, 1e-11);
  CHECK(val == doctest::Approx(torsion_oracle(2, 0.75, 0.36)).epsilon(1e-7));
}

TEST_CASE("Green envelope over random pairs") {
  const auto par = FracParams::make(2, 0.75);
  std::mt19937_64 rng(11);
  std::vector<KernelSample> smp;
  for (int i = 0; i < 1000; ++i) {
    KernelSample k;
    k.x = random_point(2, 0.9999, rng);
    k.y_or_z = random_point(2, 0.9999, rng);
    k.value = green_ball(par, k.x, k.y_or_z);
    smp.push_back(k);
  }
  const auto fit = envelope_check(par, smp, Envelope::green_ball, 1e3);
  CHECK(fit.pass);
  CHECK(std::isfinite(fit.c));
  CHECK(fit.c >= 1.0);
  // one fitted c bounds every sample
  for (const auto& k : smp) {
    const double e = envelope_value(par, Envelope::green_ball, k);
    CHECK(k.value <= fit.c * e * (1 + 1e-12));
    CHECK(k.value * fit.c * (1 + 1e-12) >= e);
  }
}

TEST_CASE("Martin kernel limit agrees with the closed form") {
  for (int n : {2, 3}) {
    const auto par = FracParams::make(n, 0.75);
    std::mt19937_64 rng(5);
    VectorXd z = VectorXd::Zero(n);
    z[n - 1] = 1.0;
    CHECK(martin_ball(par, VectorXd::Zero(n), z) == doctest::Approx(1.0).epsilon(1e-7));
    for (int i = 0; i < 10; ++i) {
      const VectorXd x = random_point(n, 0.95, rng);
      CHECK(martin_ball(par, x, z) == doctest::Approx(martin_ball_closed(par, x, z)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(martin_ball(par, z, z), DomainError);
  }
  const auto par = FracParams::make(2, 0.75);
  std::vector<KernelSample> smp;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    KernelSample k;
    k.x = random_point(2, 0.999, rng);
    k.y_or_z = Vector2d(1.0, 0.0);
    k.value = martin_ball_closed(par, k.x, k.y_or_z);
    smp.push_back(k);
  }
  const auto fit = envelope_check(par, smp, Envelope::martin_ball, 10.0);
  CHECK(fit.pass);
}

TEST_CASE("half-space Martin kernel") {
  const auto par = FracParams::make(2, 0.75);
  CHECK(martin_halfspace(par, Vector2d(0, 1), Vector2d(0, 0)) == doctest::Approx(1.0));
  for (double r : {0.1, 1.0, 3.0})
    for (double phi : {0.1, 0.7, 1.5}) {
      const Vector2d x(r * std::cos(phi), r * std::sin(phi));
      CHECK(martin_halfspace(par, x, Vector2d(0, 0)) ==
            doctest::Approx(std::pow(r, 0.75 - 2) * std::pow(std::sin(phi), 0.75)));
    }
  const auto p3 = FracParams::make(3, 0.6);
  const Vector3d x(0.3, -0.2, 0.5), y(1.0, 2.0, 0.0);
  CHECK(martin_halfspace(p3, x, y) ==
        doctest::Approx(std::pow(0.5, 0.6) * std::pow((x - y).norm(), -3)));
  CHECK_THROWS_AS(martin_halfspace(par, Vector2d(0, -1), Vector2d(0, 0)), SingularityError);
}

TEST_CASE("Poisson kernel") {
  const auto par = FracParams::make(2, 0.75);
  // x = 0, y = (1.5, 0): 2-D quadrature of a G(0, w) |w - y|^{-N-2s}
  const double a = normalization_constant(par);
  const GreenBall g(par);
  gauss_kronrod<double, 31> gk;
  const Vector2d y(1.5, 0.0);
  const double ref = a * gk.integrate(
                             [&](double r) {
                               const double inner = gk.integrate(
                                   [&](double th) {
                                     const Vector2d w(r * std::cos(th), r * std::sin(th));
                                     return std::pow((w - y).norm(), -3.5);
                                   },
                                   0.0, 2 * pi, 10, 1e-13);
                               return g(r, 1.0, 1 - r * r) * r * inner;
                             },
                             0.0, 1.0, 25, 1e-12);
  CHECK(poisson_ball(par, Vector2d(0, 0), y) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(poisson_ball_closed(par, Vector2d(0, 0), y) == doctest::Approx(ref).epsilon(1e-8));

  for (int n : {2, 3}) {
    const auto q = FracParams::make(n, 0.6);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 4; ++i) {
      const VectorXd x = random_point(n, 0.8, rng);
      const VectorXd yy = random_point(n, 1.0, rng).normalized() * (1.1 + u(rng));
      CHECK(poisson_ball(q, x, yy) ==
            doctest::Approx(poisson_ball_closed(q, x, yy)).epsilon(1e-6));
    }
  }
  std::vector<KernelSample> smp;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 200; ++i) {
    KernelSample k;
    k.x = random_point(2, 0.999, rng);
    k.y_or_z = random_point(2, 1.0, rng).normalized() * (1.0 + 3 * u(rng) + 1e-6);
    k.value = poisson_ball_closed(par, k.x, k.y_or_z);
    smp.push_back(k);
  }
  // (1-|x|^2)/rho(x) and (|y|^2-1)/(rho(y)(1+rho(y))) both lie in [1, 2]
  const double c = std::sin(0.75 * pi) / (pi * pi);
  const auto fit = envelope_check(par, smp, Envelope::poisson_ball, std::pow(2.0, 0.75), c);
  CHECK(fit.pass);
}

TEST_CASE("envelope_fit definition") {
  const auto fit = envelope_fit({1.0, 2.0, 0.5}, {1.0, 1.0, 1.0}, 3.0);
  CHECK(fit.c == doctest::Approx(2.0));
  CHECK(fit.pass);
  CHECK_FALSE(envelope_fit({10.0}, {1.0}, 3.0).pass);
  CHECK_THROWS_AS(envelope_fit({}, {}, 3.0), DomainError);
}
