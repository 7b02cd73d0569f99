#include "fracbs/sphere_ops.hpp"

#include "fracbs/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

namespace fracbs {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int tau_order = 16;
constexpr int tau_levels = 34;

/// int_0^1 f(tau, 1 - tau, log tau) dtau with f ~ tau^{alpha0} at 0 and a ridge of
/// width kappa at tau = 1. The right half is parametrized by t = 1 - tau so that
/// 1 - tau and log tau keep full relative accuracy there.
template <class F>
double tau_integral(F&& f, double kappa, double alpha0) {
  const double left = integrate_graded(
      [&](double tau) { return f(tau, 1.0 - tau, std::log(tau)); }, 0.0, 0.5,
      std::ldexp(0.5, -tau_levels), tau_order, alpha0);
  const double h0 = std::min(0.5, 0.25 * kappa);
  const double right = integrate_graded(
      [&](double t) { return f(1.0 - t, t, std::log1p(-t)); }, 0.0, 0.5, h0, tau_order);
  return left + right;
}

void check_sphere_dim(const FracParams& params) {
  if (params.n != 2 && params.n != 3)
    throw DomainError("sphere operators support N in {2, 3}");
}

/// |S^{N-2}| int_0^pi g(t) sin^{N-2}(t) dt, graded toward t = 0.
double zonal_polar(int n, const std::function<double(double)>& g, double alpha, int order,
                   int levels) {
  const double area = sphere_area(n - 2);
  auto integrand = [&](double t) { return g(t) * std::pow(std::sin(t), n - 2); };
  const double head =
      integrate_graded(integrand, 0.0, 0.5 * pi, std::ldexp(0.5 * pi, -levels), order, alpha);
  const double tail = integrate_graded(integrand, 0.5 * pi, pi, 0.5 * pi, order);
  return area * (head + tail);
}

} // namespace

double zonal_reduce(int n, const std::function<double(double)>& f, int order) {
  if (n < 2)
    throw DomainError("zonal_reduce: N must be >= 2");
  const double e = 0.5 * (n - 3);
  const QuadRule<double> rule = gauss_jacobi(order, e, e);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v))
      throw DomainError("zonal_reduce: non-finite integrand at u = " +
                        std::to_string(rule.nodes[i]));
    acc += rule.weights[i] * v;
  }
  return sphere_area(n - 2) * acc;
}

double zonal_reduce_graded(int n, const std::function<double(double)>& f, double alpha,
                           int order, int levels) {
  return zonal_polar(n, [&](double t) { return f(std::cos(t)); }, alpha, order, levels);
}

double radial_kernel_K_kappa(const FracParams& params, double kappa) {
  if (!(kappa > 0.0))
    throw DomainError("radial_kernel_K: kernel singular at u = 1");
  const double n = params.n;
  const double s = params.s;
  const double m = 0.5 * n + s;
  const double k2 = kappa * kappa;
  return tau_integral(
      [&](double tau, double t, double lt) {
        return (std::exp((n - 1.0) * lt) + std::exp((2.0 * s - 1.0) * lt)) *
               std::pow(t * t + tau * k2, -m);
      },
      kappa, 2.0 * s - 1.0);
}

double radial_kernel_K(const FracParams& params, double u) {
  if (!(u < 1.0) || u < -1.0)
    throw DomainError("radial_kernel_K: need -1 <= u < 1");
  return radial_kernel_K_kappa(params, std::sqrt(2.0 - 2.0 * u));
}

double b_kernel_kappa(const FracParams& params, double beta, double kappa) {
  const double n = params.n;
  const double s = params.s;
  if (!(beta < n))
    throw DomainError("b_kernel: beta must be below N");
  if (!(kappa > 0.0))
    throw DomainError("b_kernel: kernel singular at u = 1");
  const double c = beta + 2.0 * s - n;
  const double m = 0.5 * n + s;
  const double k2 = kappa * kappa;
  return tau_integral(
      [&](double tau, double t, double lt) {
        return std::exp((n - 1.0 - beta) * lt) * std::expm1(beta * lt) * std::expm1(c * lt) *
               std::pow(t * t + tau * k2, -m);
      },
      kappa, n - 1.0 - beta + std::min(c, 0.0));
}

double b_kernel(const FracParams& params, double beta, double u) {
  if (!(u < 1.0) || u < -1.0)
    throw DomainError("b_kernel: need -1 <= u < 1");
  return b_kernel_kappa(params, beta, std::sqrt(2.0 - 2.0 * u));
}

double b_singular_power(const FracParams& params) {
  return std::max(0.0, params.n + 2.0 * params.s - 3.0);
}

double c35(const FracParams& params, double beta) {
  check_sphere_dim(params);
  const double n = params.n;
  if (!(beta > n - 2.0 * params.s && beta < n))
    throw DomainError("c35: beta must lie in (N-2s, N)");
  const double q = b_singular_power(params);
  const double val = zonal_polar(
      params.n, [&](double t) { return b_kernel_kappa(params, beta, 2.0 * std::sin(0.5 * t)); },
      (n - 2.0) - q, 16, 40);
  return normalization_constant(params) * val;
}

double b_const(const FracParams& params) {
  // int_0^inf (1+x^2)^{-m} dx = int_0^{pi/2} sin(v)^{2m-2} dv, v = pi/2 - arctan x
  const double e = params.n + 2.0 * params.s - 2.0;
  const double val = integrate_graded([&](double v) { return std::pow(std::sin(v), e); }, 0.0,
                                      0.5 * pi, 0.5 * pi, 24, e);
  return 2.0 * normalization_constant(params) * val;
}

double b_const_closed(const FracParams& params) {
  const double m = 0.5 * params.n + params.s;
  return normalization_constant(params) * std::sqrt(pi) * gamma_fn(m - 0.5) / gamma_fn(m);
}

SphereKernels::SphereKernels(const FracParams& params) : params_(params) {
  check_sphere_dim(params);
  k_power_ = params.n + 2.0 * params.s - 1.0;
  b_power_ = b_singular_power(params);
  const double kp = k_power_;
  k_table_ = KappaTable(
      [&, kp](double k) { return radial_kernel_K_kappa(params_, k) * std::pow(k, kp); }, 2.0, 44);
}

void SphereKernels::set_beta(double beta) {
  if (beta == beta_ && beta_ != 0.0)
    return;
  beta_ = beta;
  const double bp = b_power_;
  b_table_ = KappaTable(
      [&, bp](double k) { return b_kernel_kappa(params_, beta_, k) * std::pow(k, bp); }, 2.0, 44);
}

double SphereKernels::K(double kappa) const {
  return k_table_(kappa) * std::pow(kappa, -k_power_);
}

double SphereKernels::B(double kappa) const {
  const double g = b_table_(kappa);
  return b_power_ == 0.0 ? g : g * std::pow(kappa, -b_power_);
}

LatGrid LatGrid::make(int n, int per_hemisphere, double grading) {
  if (n != 2 && n != 3)
    throw DomainError("LatGrid: N must be 2 or 3");
  if (per_hemisphere < min_per_hemisphere)
    throw DomainError("LatGrid: grid too coarse, need at least " +
                      std::to_string(min_per_hemisphere) + " elements per hemisphere");
  if (!(grading >= 1.0))
    throw DomainError("LatGrid: grading exponent must be >= 1");
  LatGrid g;
  g.n = n;
  g.grading = grading;
  g.per_hemisphere = per_hemisphere;
  std::vector<double> half(per_hemisphere + 1);
  for (int j = 0; j <= per_hemisphere; ++j)
    half[j] = 0.5 * pi * std::pow(static_cast<double>(j) / per_hemisphere, grading);
  half.back() = 0.5 * pi;
  for (int j = per_hemisphere; j >= 1; --j)
    g.nodes.push_back(-half[j]);
  for (int j = 0; j <= per_hemisphere; ++j)
    g.nodes.push_back(half[j]);
  const std::size_t m = g.nodes.size();
  g.weights.assign(m, 0.0);
  const auto& gl = gauss_legendre(12);
  auto density = [n](double phi) { return n == 2 ? 2.0 : 2.0 * pi * std::cos(phi); };
  for (std::size_t e = 0; e + 1 < m; ++e) {
    const double a = g.nodes[e], b = g.nodes[e + 1], h = b - a;
    for (Eigen::Index i = 0; i < gl.size(); ++i) {
      const double t = gl.nodes[i];
      const double w = h * gl.weights[i] * density(a + h * t);
      g.weights[e] += w * (1.0 - t);
      g.weights[e + 1] += w * t;
    }
  }
  g.hemisphere_mask.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    g.hemisphere_mask[i] = g.nodes[i] > 0.0;
  return g;
}

std::vector<int> LatGrid::hemisphere_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (hemisphere_mask[i])
      out.push_back(static_cast<int>(i));
  return out;
}

double LatGrid::area() const {
  double acc = 0.0;
  for (double w : weights)
    acc += w;
  return acc;
}

SphericalField SphericalField::from_hemisphere(const LatGrid& grid, const Eigen::VectorXd& dofs) {
  const auto idx = grid.hemisphere_nodes();
  if (static_cast<std::size_t>(dofs.size()) != idx.size())
    throw DomainError("SphericalField: dof count does not match the hemisphere");
  SphericalField f;
  f.zero_extended = true;
  f.values.assign(grid.nodes.size(), 0.0);
  for (std::size_t j = 0; j < idx.size(); ++j)
    f.values[idx[j]] = dofs[j];
  return f;
}

Eigen::VectorXd SphericalField::hemisphere_dofs(const LatGrid& grid) const {
  const auto idx = grid.hemisphere_nodes();
  Eigen::VectorXd out(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    out[j] = values[idx[j]];
  return out;
}

namespace {

/// Reduced double-integral kernel for an axisymmetric pair of latitude/arc points.
/// N = 2: arc coordinate, R = f(2|sin(d/2)|). N = 3: latitudes, R = 4 pi int_0^pi f(kappa) dtheta.
struct Reduced {
  int n;
  std::function<double(double)> f;

  double operator()(double x, double y, double diff) const {
    const double chord = 2.0 * std::abs(std::sin(0.5 * diff));
    if (n == 2)
      return f(chord);
    const double cc = std::max(0.0, std::cos(x) * std::cos(y));
    const double b = 2.0 * std::sqrt(cc);
    if (b == 0.0)
      return 4.0 * pi * pi * f(chord);
    const double eps = std::min(pi, chord / std::sqrt(cc));
    return 4.0 * pi * integrate_graded(
                          [&](double th) {
                            const double st = b * std::sin(0.5 * th);
                            return f(std::sqrt(chord * chord + st * st));
                          },
                          0.0, pi, eps, 10);
  }
  double weight(double x) const { return n == 2 ? 1.0 : std::cos(x); }
  PairKernel pair() const {
    return [this](double x, double y, double d) {
      return (*this)(x, y, d) * weight(x) * weight(y);
    };
  }
};

/// Hemisphere or full-sphere discretization in reduced coordinates, plus the fold
/// from mesh dofs to latitude dofs.
struct ReducedMesh {
  Mesh1D mesh;
  Eigen::MatrixXd fold; ///< mesh dofs x latitude dofs
};

ReducedMesh hemisphere_mesh(const LatGrid& grid) {
  const auto idx = grid.hemisphere_nodes();
  const int nl = static_cast<int>(idx.size()); // includes the pole
  ReducedMesh r;
  if (grid.n == 2) {
    // Arc 0..pi: theta = phi on the right half, pi - phi on the left half.
    std::vector<double> lat{0.0};
    for (int j : idx)
      lat.push_back(grid.nodes[j]);
    const int np = static_cast<int>(lat.size()) - 1; // pole position
    for (int i = 0; i <= np; ++i)
      r.mesh.x.push_back(lat[i]);
    for (int i = np - 1; i >= 0; --i)
      r.mesh.x.push_back(i == 0 ? pi : pi - lat[i]);
    const int nv = static_cast<int>(r.mesh.x.size());
    r.mesh.dof.assign(nv, -1);
    for (int v = 1; v < nv - 1; ++v)
      r.mesh.dof[v] = v - 1;
    r.fold = Eigen::MatrixXd::Zero(nv - 2, nl);
    for (int v = 1; v < nv - 1; ++v) {
      const int lat_index = v <= np ? v - 1 : (2 * np - v) - 1;
      r.fold(v - 1, lat_index) = 1.0;
    }
  } else {
    r.mesh.x.push_back(0.0);
    r.mesh.dof.push_back(-1);
    for (int j = 0; j < nl; ++j) {
      r.mesh.x.push_back(grid.nodes[idx[j]]);
      r.mesh.dof.push_back(j);
    }
    r.fold = Eigen::MatrixXd::Identity(nl, nl);
  }
  return r;
}

ReducedMesh full_mesh(const LatGrid& grid) {
  const int m = static_cast<int>(grid.nodes.size());
  ReducedMesh r;
  if (grid.n == 2) {
    // Periodic arc from -pi/2 through the north pole to 3pi/2.
    for (int i = 0; i < m; ++i)
      r.mesh.x.push_back(grid.nodes[i]);
    for (int i = m - 2; i >= 1; --i)
      r.mesh.x.push_back(pi - grid.nodes[i]);
    r.mesh.periodic = true;
    r.mesh.period = 2.0 * pi;
    const int nv = static_cast<int>(r.mesh.x.size());
    r.mesh.dof.resize(nv);
    r.fold = Eigen::MatrixXd::Zero(nv, m);
    for (int v = 0; v < nv; ++v) {
      r.mesh.dof[v] = v;
      r.fold(v, v < m ? v : 2 * (m - 1) - v) = 1.0;
    }
  } else {
    for (int i = 0; i < m; ++i) {
      r.mesh.x.push_back(grid.nodes[i]);
      r.mesh.dof.push_back(i);
    }
    r.fold = Eigen::MatrixXd::Identity(m, m);
  }
  return r;
}

/// k(x) = int_{S_-} R(x, y) w(y) dy for a hemisphere point x.
double killing(const Reduced& red, double x, int order) {
  auto integrand = [&](double y) { return red(x, y, x - y) * red.weight(y); };
  if (red.n == 2) {
    // Exterior arc (pi, 2pi); its ends are at arc distance pi - x and x from the point.
    const double mid = 1.5 * pi;
    const double lo = integrate_graded(integrand, pi, mid, std::min(0.5 * pi, pi - x), order);
    const double hi = integrate_graded_right(integrand, mid, 2.0 * pi, std::min(0.5 * pi, x), order);
    return lo + hi;
  }
  return integrate_graded_right(integrand, -0.5 * pi, 0.0, std::min(0.5 * pi, x), order);
}

double diagonal_power(const FracParams& params) { return 1.0 - 2.0 * params.s; }

double b_diagonal_power(const FracParams& params) {
  // B ~ kappa^{-q}; after the reduction the double-integral kernel behaves like
  // |x - y|^{N - 2 - q} (bounded when the exponent is >= 0).
  const double e = params.n - 2.0 - b_singular_power(params);
  return e < 0.0 ? e : 0.0;
}

Eigen::MatrixXd fold_matrix(const Eigen::MatrixXd& m, const Eigen::MatrixXd& p) {
  Eigen::MatrixXd out = p.transpose() * m * p;
  return 0.5 * (out + out.transpose());
}

} // namespace

OperatorPair assemble_operator_pair(const LatGrid& grid, const FracParams& params, double beta,
                                    const AssemblyOptions& opt) {
  check_sphere_dim(params);
  if (grid.n != params.n)
    throw DomainError("assemble_operator_pair: grid and params disagree on N");
  if (!(beta < params.n))
    throw DomainError("assemble_operator_pair: beta must be below N");
  const double a = normalization_constant(params);
  auto kernels = std::make_shared<SphereKernels>(params);
  kernels->set_beta(beta);
  Reduced rk{params.n, [kernels](double k) { return kernels->K(k); }};
  Reduced rb{params.n, [kernels](double k) { return kernels->B(k); }};
  const ReducedMesh rm = hemisphere_mesh(grid);

  Eigen::MatrixXd diff = assemble_difference_form(rm.mesh, rk.pair(), diagonal_power(params),
                                                  opt.pair);
  Eigen::MatrixXd kill = assemble_weighted_mass(
      rm.mesh, [&](double x) { return killing(rk, x, opt.kill_order) * rk.weight(x); }, 10,
      opt.mass_levels);
  Eigen::MatrixXd prod = assemble_product_form(rm.mesh, rb.pair(), b_diagonal_power(params),
                                               opt.pair);
  Eigen::MatrixXd mass =
      assemble_weighted_mass(rm.mesh, [&](double x) { return rk.weight(x); }, 10, 0);
  Eigen::VectorXd load = assemble_load(rm.mesh, [&](double x) { return rk.weight(x); });

  OperatorPair out;
  const double zonal = params.n == 3 ? 2.0 * pi : 1.0;
  out.A = a * fold_matrix(diff + kill, rm.fold);
  out.L = a * fold_matrix(prod, rm.fold);
  out.mass = zonal * fold_matrix(mass, rm.fold);
  out.lumped = zonal * (rm.fold.transpose() * load);
  out.beta = beta;
  out.params = params;
  out.grid = grid;
  return out;
}

OperatorPair with_beta(const OperatorPair& ops, double beta, const AssemblyOptions& opt) {
  const FracParams& params = ops.params;
  if (!(beta < params.n))
    throw DomainError("with_beta: beta must be below N");
  auto kernels = std::make_shared<SphereKernels>(params);
  kernels->set_beta(beta);
  Reduced rb{params.n, [kernels](double k) { return kernels->B(k); }};
  const ReducedMesh rm = hemisphere_mesh(ops.grid);
  OperatorPair out = ops;
  out.L = normalization_constant(params) *
          fold_matrix(assemble_product_form(rm.mesh, rb.pair(), b_diagonal_power(params), opt.pair),
                      rm.fold);
  out.beta = beta;
  return out;
}

FullSphereOps assemble_full_sphere(const LatGrid& grid, const FracParams& params, double beta,
                                   const AssemblyOptions& opt) {
  check_sphere_dim(params);
  if (grid.n != params.n)
    throw DomainError("assemble_full_sphere: grid and params disagree on N");
  const double a = normalization_constant(params);
  auto kernels = std::make_shared<SphereKernels>(params);
  kernels->set_beta(beta);
  Reduced rk{params.n, [kernels](double k) { return kernels->K(k); }};
  Reduced rb{params.n, [kernels](double k) { return kernels->B(k); }};
  const ReducedMesh rm = full_mesh(grid);
  FullSphereOps out;
  const double zonal = params.n == 3 ? 2.0 * pi : 1.0;
  out.A = a * fold_matrix(
                  assemble_difference_form(rm.mesh, rk.pair(), diagonal_power(params), opt.pair),
                  rm.fold);
  out.L = a * fold_matrix(assemble_product_form(rm.mesh, rb.pair(), b_diagonal_power(params),
                                                opt.pair),
                          rm.fold);
  out.mass = zonal * fold_matrix(assemble_weighted_mass(
                                     rm.mesh, [&](double x) { return rk.weight(x); }, 10, 0),
                                 rm.fold);
  out.lumped =
      zonal * (rm.fold.transpose() * assemble_load(rm.mesh, [&](double x) { return rk.weight(x); }));
  return out;
}

Eigen::MatrixXd gagliardo_matrix(const LatGrid& grid, const FracParams& params,
                                 const AssemblyOptions& opt) {
  check_sphere_dim(params);
  const double p = params.n - 1.0 + 2.0 * params.s;
  Reduced rg{params.n, [p](double k) { return std::pow(k, -p); }};
  const ReducedMesh rm = hemisphere_mesh(grid);
  Eigen::MatrixXd diff =
      assemble_difference_form(rm.mesh, rg.pair(), diagonal_power(params), opt.pair);
  Eigen::MatrixXd kill = assemble_weighted_mass(
      rm.mesh, [&](double x) { return killing(rg, x, opt.kill_order) * rg.weight(x); }, 10,
      opt.mass_levels);
  return 2.0 * fold_matrix(diff + kill, rm.fold);
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

} // namespace fracbs
