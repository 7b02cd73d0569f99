#include "coarse_disc.hpp"

#include "fracbs/ball_solver.hpp"
#include "fracbs/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracbs;
using fracbs::testing::coarse_operator;

namespace {

Eigen::VectorXd martin_half(const GreenOperator& g) {
  const DiscMesh& m = g.mesh();
  Eigen::VectorXd v(m.half.size());
  for (std::size_t i = 0; i < m.half.size(); ++i)
    v[i] = martin_z(g.params(), m.nodes[m.half[i]]);
  return v;
}

} // namespace

TEST_CASE("fixed point solves the integral equation") {
  const GreenOperator& g = coarse_operator();
  const double p = 2.0, k = 4.0;
  const SolveResult r = solve_uk(g, p, k);
  const Eigen::VectorXd km = k * martin_half(g);
  const Eigen::VectorXd& u = r.u.values;
  const Eigen::VectorXd up = u.cwiseMax(0.0).array().pow(p).matrix();
  const Eigen::VectorXd res = u - (km - g.apply(up));
  CHECK((res.array() / (1.0 + km.array())).abs().maxCoeff() <= 1e-9);
  CHECK(r.report.sandwich_violations == 0);
  CHECK(r.report.negative_nodes == 0);
  // 0 <= u <= kM and u >= kM - G[(kM)^p]
  const Eigen::VectorXd lower = km - g.apply(km.array().pow(p).matrix());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    CHECK(u[i] <= km[i] * (1 + 1e-12));
    CHECK(u[i] >= lower[i] - 1e-9 * (1 + km[i]));
  }
  // evaluation at a node returns the node value
  const int n = g.mesh().half[g.mesh().half.size() / 3];
  CHECK(evaluate(g, r.u, g.mesh().nodes[n]) ==
        doctest::Approx(u[g.mesh().half_of[n]]).epsilon(1e-9));
  CHECK(solve_uk(g, p, 0.0).u.values.norm() == 0.0);
}

TEST_CASE("solver domain") {
  const GreenOperator& g = coarse_operator();
  CHECK_THROWS_AS(solve_uk(g, 2.2, 1.0), DomainError);
  CHECK_THROWS_AS(solve_uk(g, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(solve_uk(g, 2.0, -1.0), DomainError);
  SolveOptions bad;
  bad.theta = 0;
  CHECK_THROWS_AS(solve_uk(g, 2.0, 1.0, bad), DomainError);
  CHECK_THROWS_AS(k_sweep(g, 2.0, {1.0}), DomainError);
  CHECK_THROWS_AS(k_sweep(g, 2.0, {2.0, 1.0}), DomainError);
}

TEST_CASE("k sweep is monotone and below the singular bound") {
  const GreenOperator& g = coarse_operator();
  const KSweepResult r = k_sweep(g, 2.0, {1, 2, 4, 8, 16, 32}, {}, 6);
  CHECK(r.probes.size() == 3 + 6);
  for (Eigen::Index q = 0; q < r.values.rows(); ++q)
    for (Eigen::Index j = 1; j < r.values.cols(); ++j)
      CHECK(r.values(q, j) >= r.values(q, j - 1));
  CHECK(r.singular_bound_violations == 0);
  CHECK(r.singular_bound_margin <= 1.0);
  for (const auto& s : r.solves)
    CHECK(s.report.monotone);
  CHECK(to_string(SweepClass::diverging) == "diverging");

  const EnvelopeFit env = similarity_envelope(g, 2.0, r.solves.back().u, r.solves.back().u);
  CHECK(env.c >= 1.0);
  CHECK(std::isfinite(env.c));
  CHECK_THROWS_AS(similarity_envelope(g, 2.0, r.solves.back().u, r.solves.front().u, 0.0),
                  DomainError);

  const SimilarityResult sim = similarity_profile(g, 2.0, r.solves.back().u, {0.1, 0.05});
  REQUIRE(sim.arcs.size() == 2);
  CHECK(sim.pair_difference.size() == 1);
  for (double v : sim.arcs[0].scaled)
    CHECK(v >= 0);
  CHECK_THROWS_AS(similarity_profile(g, 2.0, r.solves.back().u, {0.05, 0.1}), DomainError);
  CHECK_THROWS_AS(similarity_profile(g, 1.5, r.solves.back().u, {0.1, 0.05}), DomainError);
}

TEST_CASE("sweep below p1 grows without bound") {
  const GreenOperator& g = coarse_operator();
  const KSweepResult r = k_sweep(g, 1.2, {64, 128, 256}, {}, 4);
  CHECK(r.classification == SweepClass::diverging);
}
