/// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fracbs/ball_solver.hpp"
#include "fracbs/disc.hpp"
#include "fracbs/eigenpair.hpp"
#include "fracbs/error.hpp"
#include "fracbs/report.hpp"
#include "fracbs/separable.hpp"
#include "fracbs/sphere_ops.hpp"
#include "fracbs/trace_diag.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>

using namespace fracbs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void criterion(int id, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass)
    ++failures;
  std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), dt);
  std::fflush(stdout);
}

Eigen::VectorXd sine_power(const LatGrid& g, double s) {
  const std::vector<int> h = g.hemisphere_nodes();
  Eigen::VectorXd v(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    v[i] = std::pow(std::sin(g.nodes[h[i]]), s);
  return v;
}

struct EigenErrors {
  double lambda, psi;
};

EigenErrors eigen_errors(const FracParams& par, int nh) {
  const LatGrid g = LatGrid::make(par.n, nh);
  const OperatorPair ops = assemble_operator_pair(g, par, par.n - par.s);
  const EigenResult r = principal_eigenpair(ops);
  auto norm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(ops.mass * v)); };
  const Eigen::VectorXd e = sine_power(g, par.s);
  return {std::abs(r.lambda - 1.0), norm(r.dofs / norm(r.dofs) - e / norm(e))};
}

} // namespace

int main() {
  const FracParams par = FracParams::make(2, 0.75);
  const int nh = GridConfig{}.per_hemisphere;

  criterion(1, [] {
    double worst = 0;
    for (auto [n, s] : {std::pair{2, 0.6}, {2, 0.75}, {3, 0.6}}) {
      const FracParams q = FracParams::make(n, s);
      for (int i = 0; i <= 400; ++i)
        worst = std::max(worst, std::abs(b_kernel(q, n - 2 * s, -1.0 + 1.995 * i / 400.0)));
    }
    return Outcome{worst <= 1e-9, "max |B_{s,N-2s}| = " + fmt("%.3g", worst)};
  });

  criterion(2, [&] {
    const EigenErrors c = eigen_errors(par, nh), f = eigen_errors(par, 2 * nh);
    const bool pass = c.lambda <= 1e-2 && c.psi <= 0.02 && f.lambda < c.lambda && f.psi < c.psi;
    return Outcome{pass, "|lambda-1| " + fmt("%.3g", c.lambda) + " -> " + fmt("%.3g", f.lambda) +
                             ", psi error " + fmt("%.3g", c.psi) + " -> " + fmt("%.3g", f.psi)};
  });

  criterion(3, [&] {
    const LambdaCurve c = lambda_sweep(par, LatGrid::make(2, nh), beta_grid(par, 20));
    bool dec = c.lambda.size() == 20;
    for (std::size_t i = 1; i < c.lambda.size(); ++i)
      dec = dec && c.lambda[i] < c.lambda[i - 1];
    return Outcome{dec, std::to_string(c.lambda.size()) + " betas, lambda from " +
                            fmt("%.4g", c.lambda.front()) + " to " + fmt("%.4g", c.lambda.back())};
  });

  criterion(4, [&] {
    AssemblyOptions opt;
    opt.pair.order = 16;
    opt.pair.levels = 20;
    double worst = 0;
    for (double p : {2.0, 3.0})
      worst = std::max(worst, constant_profile_residual(par, p, LatGrid::make(2, nh), opt).residual);
    return Outcome{worst <= 1e-8, "max relative residual " + fmt("%.3g", worst)};
  });

  criterion(5, [&] {
    const LatGrid g = LatGrid::make(2, nh);
    const ProfileResult r = hemisphere_profile(par, 2.0, g);
    const NonexistenceResult z = nonexistence_check(par, 2.5, g);
    const double c = boundary_rate_constant(g, r.dofs, par.s, M_PI / 4);
    const bool pass = r.classification == Classification::nontrivial && r.energy < 0 &&
                      z.classification == Classification::trivial && c <= 10;
    return Outcome{pass, "p=2 " + to_string(r.classification) + " J=" + fmt("%.4g", r.energy) +
                             ", p=2.5 " + to_string(z.classification) + ", c=" + fmt("%.4g", c)};
  });

  std::unique_ptr<GreenOperator> g;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    g = std::make_unique<GreenOperator>(DiscMesh::make(), par);
    std::printf("disc operator: %zu nodes, %.1f s\n", g->mesh().size(),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  } catch (const std::exception& e) {
    std::printf("disc operator failed: %s\n", e.what());
  }
  auto need_disc = [&] {
    if (!g)
      throw Error("no disc operator");
    return std::cref(*g);
  };

  criterion(6, [&] {
    const GreenOperator& op = need_disc();
    const std::vector<Probe> probes = default_probes();
    const Probe& inner = probes.back();
    int violations = 0;
    bool monotone = true;
    double worst = 0;
    std::optional<DiscField> prev;
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
      const SolveResult r = solve_uk(op, 2.0, k);
      violations += r.report.sandwich_violations;
      if (prev)
        monotone = monotone && (r.u.values - prev->values).minCoeff() >= -1e-8 * (1 + k);
      prev = r.u;
      const double ratio = evaluate(op, r.u, inner.x) / martin_z(par, inner.x);
      worst = std::max(worst, std::abs(ratio / k - 1.0));
    }
    return Outcome{violations == 0 && monotone && worst <= 0.05,
                   std::to_string(violations) + " sandwich violations, " +
                       (monotone ? "monotone" : "not monotone") + ", max |u/(kM)-1| at t = " +
                       fmt("%.0e", inner.x.dist_z()) + " is " + fmt("%.3g", worst)};
  });

  std::vector<double> ks;
  for (double k = 1; k <= 1024; k *= 2)
    ks.push_back(k);
  std::optional<KSweepResult> sat;

  criterion(7, [&] {
    const GreenOperator& op = need_disc();
    sat = k_sweep(op, 2.0, ks);
    const KSweepResult div = k_sweep(op, 1.5, ks);
    double sat_inc = 0, div_inc = INFINITY;
    bool increasing = true;
    for (int q = 0; q < sat->interior_probes; ++q) {
      sat_inc = std::max(sat_inc, std::abs(sat->last_increment[q]));
      div_inc = std::min(div_inc, div.last_increment[q]);
      for (Eigen::Index j = 1; j < div.values.cols(); ++j)
        increasing = increasing && div.values(q, j) > div.values(q, j - 1);
    }
    const bool pass = sat_inc < 0.01 && increasing && div_inc > 0.20;
    return Outcome{pass, "p=2 last increment " + fmt("%.3g", sat_inc) + " (" +
                             to_string(sat->classification) + "), p=1.5 last increment " +
                             fmt("%.3g", div_inc) + " (" + to_string(div.classification) + ")"};
  });

  criterion(8, [&] {
    const GreenOperator& op = need_disc();
    if (!sat)
      throw Error("no saturated sweep");
    const auto& sv = sat->solves;
    const EnvelopeFit env = similarity_envelope(op, 2.0, sv.back().u, sv[sv.size() - 2].u);
    const SimilarityResult sim =
        similarity_profile(op, 2.0, sv.back().u, {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3, 3.125e-3});
    double worst = 0;
    for (double d : sim.pair_difference)
      worst = std::max(worst, d);
    return Outcome{env.c <= 20 && worst <= 0.10,
                   "envelope c = " + fmt("%.4g", env.c) + ", max arc pair difference " +
                       fmt("%.3g", worst)};
  });

  criterion(9, [&] {
    const GreenOperator& op = need_disc();
    double lo = INFINITY, hi = 0;
    for (double b = 1e-1; b >= 0.999e-3; b /= 2) {
      const double v =
          level_set_integral([&](const DiscPoint& x) { return martin_z(par, x); }, par.s, b).scaled;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const GreenPotential torsion(op, Eigen::VectorXd::Ones(op.mesh().half.size()));
    std::vector<double> gt;
    for (double b = 1e-1; b >= 0.999e-4; b /= 2)
      gt.push_back(level_set_integral(torsion, par.s, b).scaled);
    bool dec = true;
    for (std::size_t i = gt.size() - 3; i < gt.size(); ++i)
      dec = dec && gt[i] < gt[i - 1];
    const double k = 2.0;
    const SolveResult r = solve_uk(op, 2.0, k);
    const TraceFit fit = strace_fit(par, SolutionField(op, r.u), {0.0}, {8e-13, 4e-13, 2e-13, 1e-13});
    const double rel = std::abs(fit.weights[0] - k) / k;
    return Outcome{hi / lo <= 4 && dec && rel <= 0.02,
                   "Martin trace max/min " + fmt("%.4g", hi / lo) + ", Green trace " +
                       (dec ? "decreasing" : "not decreasing") + ", strace k = " +
                       fmt("%.5g", fit.weights[0]) + " for k = 2"};
  });

  criterion(10, [&] {
    const GreenOperator& op = need_disc();
    const GmpResult pw = gmp_bound_check(op, 2.0);
    const GmpResult lg = gmp_bound_check(op, par.s / (par.n - par.s));
    const GmpResult bd = gmp_bound_check(op, 0.3);
    const double rel = std::abs(pw.slope - pw.predicted) / std::abs(pw.predicted);
    const bool pass = pw.classification == GrowthClass::power && rel <= 0.10 &&
                      lg.classification == GrowthClass::logarithmic &&
                      bd.classification == GrowthClass::bounded;
    return Outcome{pass, "p=2 slope " + fmt("%.4g", pw.slope) + " vs " + fmt("%.4g", pw.predicted) +
                             ", p=0.6 " + to_string(lg.classification) + ", p=0.3 " +
                             to_string(bd.classification)};
  });

  criterion(11, [&] {
    const LatGrid grid = LatGrid::make(2, nh);
    const OperatorPair ops = assemble_operator_pair(grid, par, par.n - par.s);
    const Eigen::MatrixXd norm = gagliardo_matrix(grid, par) + ops.mass;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double lo = INFINITY, hi = 0;
    for (int i = 0; i < 50; ++i) {
      Eigen::VectorXd w(ops.A.rows());
      for (Eigen::Index j = 0; j < w.size(); ++j)
        w[j] = u(rng);
      const double r = w.dot(ops.A * w) / w.dot(norm * w);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double c = std::max(hi, 1 / lo);
    return Outcome{lo > 0 && c <= 50, "ratios in [" + fmt("%.4g", lo) + ", " + fmt("%.4g", hi) +
                                          "], c = " + fmt("%.4g", c)};
  });

  return failures == 0 ? 0 : 1;
}
