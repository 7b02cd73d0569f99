#include "coarse_disc.hpp"

#include "fracbs/disc.hpp"
#include "fracbs/error.hpp"
#include "fracbs/kernels.hpp"

#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>

using namespace fracbs;
using fracbs::testing::coarse_operator;

TEST_CASE("disc points") {
  for (double ell : {-20.0, -3.0, 0.0, 2.5}) {
    for (double th : {-1.5, -0.2, 0.0, 0.7, 1.5707}) {
      const DiscPoint x = DiscPoint::conformal(ell, th);
      const Eigen::Vector2d lp = x.log_polar();
      CHECK(lp[0] == doctest::Approx(ell).epsilon(1e-12));
      CHECK(lp[1] == doctest::Approx(th).epsilon(1e-12).scale(1));
      CHECK(x.delta > 0);
      CHECK(x.delta == doctest::Approx(1 - x.position().squaredNorm()).epsilon(1e-15).scale(1));
      // w = (1 - x)/(1 + x) inverts to x = (1 - w)/(1 + w); |x - z| = 2|w|/|1 + w|
      const std::complex<double> w = std::polar(std::exp(ell), th);
      CHECK(x.dist_z() == doctest::Approx(2 * std::abs(w) / std::abs(1.0 + w)).epsilon(1e-12));
    }
  }
  const DiscPoint c = DiscPoint::cartesian({0.3, -0.4});
  CHECK(c.delta == doctest::Approx(0.75));
  const DiscPoint o = DiscPoint::from_offset({-1e-9, 2e-10});
  CHECK(o.delta == doctest::Approx(2e-9 - 1e-18 - 4e-20).epsilon(1e-12));
  CHECK(o.dist_z() == doctest::Approx(std::hypot(1e-9, 2e-10)));
}

TEST_CASE("mesh geometry") {
  const DiscMesh& m = coarse_operator().mesh();
  CHECK(m.total_area() + m.excluded_area() == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(m.min_dist_z() < 1e-7);
  CHECK(m.half.size() * 2 == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int j = m.mirror[i];
    CHECK(m.mirror[j] == static_cast<int>(i));
    CHECK(m.theta[j] == doctest::Approx(-m.theta[i]));
    CHECK(m.weight[j] == doctest::Approx(m.weight[i]));
    CHECK(m.half[m.half_of[i]] == (m.theta[i] > 0 ? static_cast<int>(i) : j));
  }
  DiscMeshOptions bad;
  bad.ratio_z = 1.5;
  CHECK_THROWS_AS(DiscMesh::make(bad), DomainError);
}

TEST_CASE("Green operator reproduces the torsion function") {
  const GreenOperator& g = coarse_operator();
  const DiscMesh& m = g.mesh();
  const Eigen::VectorXd t = g.apply(Eigen::VectorXd::Ones(m.half.size()));
  for (std::size_t i = 0; i < m.half.size(); ++i)
    CHECK(t[i] == doctest::Approx(torsion_ball(g.params(), m.nodes[m.half[i]].delta)).epsilon(0.01));
  CHECK(g.matrix().minCoeff() >= 0);

  // torsion at the centre from Gamma functions
  const double s = 0.75;
  CHECK(torsion_ball(g.params(), 1.0) ==
        doctest::Approx(1.0 / (boost::math::tgamma(1 + s) * boost::math::tgamma(1 + s))));

  // rows for arbitrary points agree with node rows
  const int k = m.half[m.half.size() / 2];
  CHECK((g.row(m.nodes[k]) - g.matrix().row(m.half_of[k]).transpose()).norm() <=
        1e-10 * g.matrix().row(m.half_of[k]).norm());

  CHECK_THROWS_AS(g.apply(Eigen::VectorXd::Ones(3)), DomainError);
  Eigen::VectorXd nan = Eigen::VectorXd::Ones(m.half.size());
  nan[0] = NAN;
  CHECK_THROWS_AS(g.apply(nan), DomainError);
  CHECK_THROWS_AS(GreenOperator(m, FracParams::make(3, 0.75)), DomainError);
}

TEST_CASE("Martin kernel at z") {
  const auto par = FracParams::make(2, 0.75);
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.5, 0.3),
                                   Eigen::Vector2d(-0.2, -0.7)}) {
    const double closed = martin_ball_closed(par, x, Eigen::Vector2d(1.0, 0.0));
    CHECK(martin_z(par, DiscPoint::cartesian(x)) == doctest::Approx(closed).epsilon(1e-12));
  }
  // near z the stored offset keeps full relative accuracy
  const DiscPoint near = DiscPoint::from_offset({-1e-12, 0.0});
  CHECK(martin_z(par, near) ==
        doctest::Approx(std::pow(2e-12 - 1e-24, 0.75) * 1e24).epsilon(1e-10));
}
