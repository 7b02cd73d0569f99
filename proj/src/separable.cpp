#include "fracbs/separable.hpp"

#include "fracbs/error.hpp"

#include <cmath>
#include <random>

namespace fracbs {

namespace {

void check_profile_range(const FracParams& params, double p) {
  const CriticalExponents e = critical_exponents(params);
  if (!(p > e.p1))
    throw DomainError("separable profile: p must exceed p1 = " + std::to_string(e.p1));
  if (e.p3 && !(p < *e.p3))
    throw DomainError("separable profile: no positive solution for p >= p3 = " +
                      std::to_string(*e.p3));
}

Eigen::VectorXd pow_plus(const Eigen::VectorXd& w, double p) {
  return w.cwiseMax(0.0).array().pow(p).matrix();
}

double dual_norm(const Eigen::VectorXd& r, const Eigen::VectorXd& lumped) {
  return std::sqrt((r.array().square() / lumped.array()).sum());
}

} // namespace

double constant_profile(const FracParams& params, double p) {
  check_profile_range(params, p);
  return std::pow(c35(params, beta_of_p(params, p)), 1.0 / (p - 1.0));
}

ConstantResidual constant_profile_residual(const FracParams& params, double p,
                                           const LatGrid& grid, const AssemblyOptions& opt) {
  ConstantResidual r;
  r.ell = constant_profile(params, p);
  const FullSphereOps ops = assemble_full_sphere(grid, params, beta_of_p(params, p), opt);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(ops.A.rows(), r.ell);
  const Eigen::VectorXd nl = ops.lumped * std::pow(r.ell, p);
  const Eigen::VectorXd res = ops.A * w - ops.L * w + nl;
  r.residual = dual_norm(res, ops.lumped) / dual_norm(nl, ops.lumped);
  return r;
}

double energy_J(const OperatorPair& ops, const Eigen::VectorXd& omega, double p) {
  const double quad = 0.5 * omega.dot(ops.A * omega) - 0.5 * omega.dot(ops.L * omega);
  const double nl = (ops.lumped.array() * omega.array().abs().pow(p + 1.0)).sum() / (p + 1.0);
  return quad + nl;
}

Eigen::VectorXd energy_gradient(const OperatorPair& ops, const Eigen::VectorXd& omega, double p) {
  const Eigen::VectorXd nl =
      (ops.lumped.array() * omega.array().abs().pow(p) * omega.array().sign()).matrix();
  return ops.A * omega - ops.L * omega + nl;
}

std::string to_string(Classification c) {
  return c == Classification::nontrivial ? "nontrivial" : "trivial";
}

Eigen::VectorXd minimize_J(const OperatorPair& ops, double p, Eigen::VectorXd w,
                           const ProfileOptions& opt, int* iterations) {
  const Eigen::LLT<Eigen::MatrixXd> chol(ops.A);
  w = w.cwiseMax(0.0);
  auto projected = [&](const Eigen::VectorXd& g, const Eigen::VectorXd& x) {
    Eigen::VectorXd pg = g;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] <= 0.0 && g[i] > 0.0)
        pg[i] = 0.0;
    return pg;
  };
  double J = energy_J(ops, w, p);
  Eigen::VectorXd g = energy_gradient(ops, w, p);
  const double g0 = std::max(dual_norm(projected(g, w), ops.lumped), 1e-300);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const double gn = dual_norm(projected(g, w), ops.lumped);
    if (gn <= opt.tol * g0 || gn < 1e-15)
      break;
    // Newton direction on the free set when the Hessian there is positive definite,
    // otherwise the A-preconditioned gradient.
    Eigen::VectorXd d = -chol.solve(g);
    {
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] > 0.0 || g[i] < 0.0)
          free.push_back(i);
      if (!free.empty()) {
        const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd h(nf, nf);
        Eigen::VectorXd gf(nf);
        for (Eigen::Index a = 0; a < nf; ++a) {
          gf[a] = g[free[a]];
          for (Eigen::Index b = 0; b < nf; ++b)
            h(a, b) = ops.A(free[a], free[b]) - ops.L(free[a], free[b]);
          const double wi = std::max(w[free[a]], 0.0);
          h(a, a) += p * ops.lumped[free[a]] * std::pow(wi, p - 1.0);
        }
        const Eigen::LLT<Eigen::MatrixXd> hc(h);
        if (hc.info() == Eigen::Success) {
          const Eigen::VectorXd df = -hc.solve(gf);
          if (df.allFinite() && df.dot(gf) < 0.0) {
            d.setZero();
            for (Eigen::Index a = 0; a < nf; ++a)
              d[free[a]] = df[a];
          }
        }
      }
    }
    auto trial = [&](double t) { return (w + t * d).cwiseMax(0.0).eval(); };
    double t = 1.0;
    Eigen::VectorXd wn = trial(t);
    double Jn = energy_J(ops, wn, p);
    int back = 0;
    while (Jn > J + 1e-4 * g.dot(wn - w) && back < 60) {
      t *= 0.5;
      wn = trial(t);
      Jn = energy_J(ops, wn, p);
      ++back;
    }
    if (back == 0) {
      // Expand while the energy keeps dropping (flat directions near a degenerate minimum).
      for (int k = 0; k < 30; ++k) {
        const Eigen::VectorXd w2 = trial(2.0 * t);
        const double J2 = energy_J(ops, w2, p);
        if (!(J2 < Jn))
          break;
        t *= 2.0;
        wn = w2;
        Jn = J2;
      }
    }
    if (back == 60)
      break;
    w = wn;
    J = Jn;
    g = energy_gradient(ops, w, p);
  }
  if (iterations)
    *iterations = it;
  return w;
}

Eigen::VectorXd fixed_point_profile(const OperatorPair& ops, double p, Eigen::VectorXd w,
                                    double theta, double tol, int max_iter) {
  const Eigen::LLT<Eigen::MatrixXd> chol(ops.A);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd rhs = ops.L * w - (ops.lumped.array() * pow_plus(w, p).array()).matrix();
    const Eigen::VectorXd t = chol.solve(rhs).cwiseMax(0.0);
    const Eigen::VectorXd next = (1.0 - theta) * w + theta * t;
    const double change = (next - w).lpNorm<Eigen::Infinity>();
    w = next;
    if (change <= tol * std::max(1e-300, w.lpNorm<Eigen::Infinity>()))
      break;
  }
  return w;
}

ProfileResult minimize_profile(const OperatorPair& ops, double p, const ProfileOptions& opt) {
  const FracParams& params = ops.params;
  const double ell = constant_profile(params, p);
  std::vector<std::pair<std::string, Eigen::VectorXd>> starts;
  const Eigen::Index n = ops.A.rows();
  {
    Eigen::VectorXd psi = Eigen::VectorXd::Constant(n, 1.0);
    if (ops.beta > params.n - 2.0 * params.s && ops.beta < params.n)
      psi = principal_eigenpair(ops).dofs;
    starts.emplace_back("eps_psi1", 0.1 * ell * psi / psi.maxCoeff());
  }
  starts.emplace_back("ell_restricted", Eigen::VectorXd::Constant(n, ell));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < opt.random_starts; ++k) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v[i] = ell * unif(rng);
    starts.emplace_back("random_" + std::to_string(k), v);
  }
  ProfileResult best;
  best.energy = INFINITY;
  best.seed = opt.seed;
  for (auto& [name, v] : starts) {
    int its = 0;
    Eigen::VectorXd w = minimize_J(ops, p, v, opt, &its);
    const double J = energy_J(ops, w, p);
    if (J < best.energy) {
      best.energy = J;
      best.dofs = w;
      best.start = name;
      best.iterations = its;
    }
  }
  const Eigen::VectorXd& w = best.dofs;
  best.omega = SphericalField::from_hemisphere(ops.grid, w);
  const bool trivial = w.maxCoeff() < opt.trivial_fraction * ell;
  best.classification = trivial ? Classification::trivial : Classification::nontrivial;
  const Eigen::VectorXd nl = (ops.lumped.array() * pow_plus(w, p).array()).matrix();
  const Eigen::VectorXd res = ops.A * w - ops.L * w + nl;
  best.residual = trivial ? 0.0 : dual_norm(res, ops.lumped) / dual_norm(nl, ops.lumped);
  if (!trivial) {
    const Eigen::VectorXd fp =
        fixed_point_profile(ops, p, Eigen::VectorXd::Constant(n, ell));
    const Eigen::VectorXd d = fp - w;
    best.fixed_point_gap = std::sqrt(d.dot(ops.mass * d) / w.dot(ops.mass * w));
  }
  return best;
}

ProfileResult hemisphere_profile(const FracParams& params, double p, const LatGrid& grid,
                                 const ProfileOptions& opt, const AssemblyOptions& aopt) {
  const CriticalExponents e = critical_exponents(params);
  if (!(p > e.p1 && p < e.p2))
    throw DomainError("hemisphere_profile: p must lie in (p1, p2)");
  const OperatorPair ops = assemble_operator_pair(grid, params, beta_of_p(params, p), aopt);
  ProfileResult r = minimize_profile(ops, p, opt);
  if (r.classification == Classification::trivial)
    throw Error("hemisphere_profile: every start collapsed to zero below p2");
  return r;
}

NonexistenceResult nonexistence_check(const FracParams& params, double p, const LatGrid& grid,
                                      const ProfileOptions& opt, const AssemblyOptions& aopt) {
  const CriticalExponents e = critical_exponents(params);
  if (!(p >= e.p2 && (!e.p3 || p < *e.p3)))
    throw DomainError("nonexistence_check: p must lie in [p2, p3)");
  const OperatorPair ops = assemble_operator_pair(grid, params, beta_of_p(params, p), aopt);
  NonexistenceResult out;
  out.lambda = principal_eigenpair(ops).lambda;
  out.best = minimize_profile(ops, p, opt);
  out.classification = out.best.classification;
  if (out.classification == Classification::nontrivial)
    throw Error("nonexistence_check: nontrivial minimizer found for p >= p2");
  return out;
}

double boundary_rate_constant(const LatGrid& grid, const Eigen::VectorXd& dofs, double s,
                              double phi_max) {
  const auto idx = grid.hemisphere_nodes();
  double c = 1.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double phi = grid.nodes[idx[j]];
    if (phi > phi_max)
      continue;
    const double r = dofs[j] / std::pow(std::sin(phi), s);
    if (!(r > 0.0))
      return INFINITY;
    c = std::max({c, r, 1.0 / r});
  }
  return c;
}

} // namespace fracbs
