#include "fracbs/kernel_table.hpp"
#include "fracbs/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <doctest.h>

#include <cmath>

using namespace fracbs;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int n : {1, 4, 12, 20}) {
    const auto& q = gauss_legendre(n);
    CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int d = 0; d < 2 * n; ++d)
      CHECK(q.apply([&](double x) { return std::pow(x, d); }) ==
            doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Jacobi weights against the Beta function") {
  for (double alpha : {-0.5, -0.25, 0.5, 1.5}) {
    const auto& q = gauss_jacobi01(10, alpha);
    for (int d = 0; d < 20; ++d)
      CHECK(q.apply([&](double x) { return std::pow(1.0 - x, d); }) ==
            doctest::Approx(boost::math::beta(alpha + 1.0, d + 1.0)).epsilon(1e-12));
  }
  const auto q = gauss_jacobi(8, 0.3, -0.6);
  for (int d = 0; d < 16; ++d) {
    // int_{-1}^{1} x^d (1-x)^a (1+x)^b dx via x = 2t - 1
    double ref = 0.0;
    for (int j = 0; j <= d; ++j)
      ref += std::tgamma(d + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(d - j + 1.0)) *
             std::pow(-1.0, d - j) * std::pow(2.0, j) * boost::math::beta(0.4 + j, 1.3);
    ref *= std::pow(2.0, 0.3 - 0.6 + 1.0);
    CHECK(q.apply([&](double x) { return std::pow(x, d); }) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("graded integration of an endpoint singularity") {
  for (double a : {-0.5, -0.9, 0.25}) {
    const double v = integrate_graded([&](double t) { return std::pow(t, a) * std::cos(t); }, 0.0,
                                      2.0, 1e-3, 12, a);
    // series of int_0^2 t^a cos t dt
    double ref = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
      if (k > 0)
        term *= -4.0 / ((2.0 * k) * (2.0 * k - 1.0));
      ref += term * std::pow(2.0, a + 1.0) / (a + 2.0 * k + 1.0);
    }
    CHECK(v == doctest::Approx(ref).epsilon(1e-11));
  }
  const auto e = graded_edges(0.0, 1.0, 1e-4);
  CHECK(e.front() == 0.0);
  CHECK(e.back() == 1.0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    CHECK(e[i] < e[i + 1]);
}

TEST_CASE("Chebyshev panels and kappa tables") {
  const ChebPanel c(0.0, 2.0, 16, [](double x) { return std::exp(x); });
  for (double x = 0.0; x <= 2.0; x += 0.1)
    CHECK(c(x) == doctest::Approx(std::exp(x)).epsilon(1e-13));
  const KappaTable t([](double k) { return std::log1p(k); }, 2.0, 30);
  for (double k : {1e-7, 1e-4, 0.01, 0.5, 1.9})
    CHECK(t(k) == doctest::Approx(std::log1p(k)).epsilon(1e-12));
}
