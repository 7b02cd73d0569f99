#include "coarse_disc.hpp"

#include "fracbs/error.hpp"
#include "fracbs/trace_diag.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracbs;
using fracbs::testing::coarse_operator;

TEST_CASE("level set integrals of polynomials") {
  for (double beta : {0.3, 1e-3}) {
    const double r = 1 - beta;
    const LevelSetIntegral one = level_set_integral([](const DiscPoint&) { return 1.0; }, 0.75, beta);
    CHECK(one.raw == doctest::Approx(2 * M_PI * r).epsilon(1e-12));
    CHECK(one.scaled == doctest::Approx(std::pow(beta, 0.25) * one.raw));
    const LevelSetIntegral x2 = level_set_integral(
        [](const DiscPoint& x) { return x.position()[0] * x.position()[0]; }, 0.75, beta);
    CHECK(x2.raw == doctest::Approx(M_PI * r * r * r).epsilon(1e-12));
  }
  CHECK_THROWS_AS(level_set_integral([](const DiscPoint&) { return 1.0; }, 0.75, 0.6), DomainError);
}

TEST_CASE("trace fit recovers Martin weights") {
  const auto par = FracParams::make(2, 0.75);
  const std::vector<double> atoms{0.0, M_PI / 2};
  const DiscFunction u = [&](const DiscPoint& x) {
    return 2.0 * martin_at(par, x, 0.0) + 3.0 * martin_at(par, x, M_PI / 2);
  };
  const TraceFit f = strace_fit(par, u, atoms, {1e-3, 8e-3, 4e-3, 2e-3});
  REQUIRE(f.weights.size() == 2);
  CHECK(f.weights[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.weights[1] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.defect.front().beta == doctest::Approx(8e-3));

  // the torsion function has zero trace
  const DiscFunction t = [&](const DiscPoint& x) { return torsion_ball(par, x.delta); };
  const TraceFit z = strace_fit(par, t, {0.0}, {1e-2, 1e-3, 1e-4, 1e-5});
  CHECK(std::abs(z.weights[0]) <= 1e-3);
  CHECK(z.accepted);

  CHECK(martin_at(par, DiscPoint::cartesian({0.2, 0.1}), 0.0) ==
        doctest::Approx(martin_z(par, DiscPoint::cartesian({0.2, 0.1}))));
  CHECK_THROWS_AS(strace_fit(par, t, {}, {1e-3}), DomainError);
  CHECK_THROWS_AS(strace_fit(par, t, {0.0}, {}), DomainError);
  CHECK_THROWS_AS(strace_fit(par, t, {0.0, 1e-15}, {1e-3}), DomainError);
}

TEST_CASE("off-mesh Green potential") {
  const GreenOperator& g = coarse_operator();
  const DiscMesh& m = g.mesh();
  const GreenPotential pot(g, Eigen::VectorXd::Ones(m.half.size()));
  const int k = m.half[m.half.size() / 2];
  CHECK(pot(m.nodes[k]) == doctest::Approx(pot.node_values()[m.half_of[k]]).epsilon(1e-10));
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(0.9, -0.3),
                                   Eigen::Vector2d(-0.95, 0.0)})
    CHECK(pot(DiscPoint::cartesian(x)) ==
          doctest::Approx(torsion_ball(g.params(), 1 - x.squaredNorm())).epsilon(0.02));
}

TEST_CASE("weak norm probe") {
  const DiscMesh& m = coarse_operator().mesh();
  const double s = 0.75, q = 2.0;
  double mass = 0;
  for (int k : m.half)
    mass += 2 * m.weight[k] * std::pow(m.nodes[k].rho(), s);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(m.half.size(), -3.0);
  CHECK(weak_norm_probe(m, s, c, q) == doctest::Approx(3 * std::sqrt(mass)));

  // two levels: sup of 4 m1^{1/2} and 1 (m1 + m2)^{1/2}
  Eigen::VectorXd f = Eigen::VectorXd::Ones(m.half.size());
  f[0] = 4.0;
  const double m1 = 2 * m.weight[m.half[0]] * std::pow(m.nodes[m.half[0]].rho(), s);
  CHECK(weak_norm_probe(m, s, f, q) ==
        doctest::Approx(std::max(4 * std::sqrt(m1), std::sqrt(mass))));
  CHECK_THROWS_AS(weak_norm_probe(m, s, f, 1.0), DomainError);
  CHECK_THROWS_AS(weak_norm_probe(m, s, Eigen::VectorXd::Ones(2), q), DomainError);
}

TEST_CASE("growth of G[M^p] toward z") {
  const GreenOperator& g = coarse_operator();
  const GmpResult small = gmp_bound_check(g, 0.3, 5);
  CHECK(small.predicted == doctest::Approx(0.75 - 1.25 * 0.3));
  CHECK(small.curve.dist.size() == 5);
  CHECK(small.classification == GrowthClass::bounded);
  const GmpResult big = gmp_bound_check(g, 1.5, 5);
  CHECK(big.classification == GrowthClass::power);
  CHECK(big.slope == doctest::Approx(big.predicted).epsilon(0.1));
  CHECK(to_string(GrowthClass::logarithmic) == "logarithmic");
  CHECK_THROWS_AS(gmp_bound_check(g, 1.5, 3), DomainError);
}
