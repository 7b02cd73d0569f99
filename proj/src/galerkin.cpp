#include "fracbs/galerkin.hpp"

#include "fracbs/error.hpp"
#include "fracbs/parallel.hpp"
#include "fracbs/quadrature.hpp"

#include <array>
#include <cmath>

namespace fracbs {

int Mesh1D::ndof() const {
  int n = 0;
  for (int d : dof)
    n = std::max(n, d + 1);
  return n;
}

Mesh1D::Element Mesh1D::element(std::size_t e) const {
  const std::size_t nv = x.size();
  if (e + 1 < nv)
    return {x[e], x[e + 1], static_cast<int>(e), static_cast<int>(e + 1)};
  return {x[e], x[0] + period, static_cast<int>(e), 0};
}

namespace {

/// Diagonal block E x E in the variables d = x - y > 0 and y, both orientations.
template <class CB>
void same_element(double a, double b, double gamma, const PairQuadOptions& o, CB&& cb) {
  const double h = b - a;
  const auto edges = graded_edges(0.0, h, h * std::ldexp(1.0, -o.levels), 2.0);
  const auto& gl = gauss_legendre(o.order);
  const auto& gj = gauss_jacobi01(o.order, gamma);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hd = edges[k + 1] - lo;
    const bool sing = (k == 0 && gamma != 0.0);
    const auto& rd = sing ? gj : gl;
    for (Eigen::Index i = 0; i < rd.size(); ++i) {
      const double d = lo + hd * rd.nodes[i];
      double wd = hd * rd.weights[i];
      if (sing)
        wd *= std::pow(rd.nodes[i], -gamma);
      const double len = h - d;
      for (Eigen::Index j = 0; j < gl.size(); ++j) {
        const double y = a + len * gl.nodes[j];
        const double w = wd * len * gl.weights[j];
        cb(y + d, y, d, w);
        cb(y, y + d, -d, w);
      }
    }
  }
}

/// Elements sharing the vertex b: x = b + sx p, y = b - sx q, p in (0,hx), q in (0,hy),
/// split into two Duffy triangles around the corner p = q = 0.
template <class CB>
void touching(double b, double hx, double hy, double sx, double gamma, const PairQuadOptions& o,
              CB&& cb) {
  const auto edges = graded_edges(0.0, 1.0, std::ldexp(1.0, -o.levels), 2.0);
  const auto& gl = gauss_legendre(o.order);
  const double alpha = 1.0 + gamma;
  const auto& gj = gauss_jacobi01(o.order, alpha);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hr = edges[k + 1] - lo;
    const bool sing = (k == 0 && alpha != 0.0);
    const auto& rr = sing ? gj : gl;
    for (Eigen::Index i = 0; i < rr.size(); ++i) {
      const double r = lo + hr * rr.nodes[i];
      double wr = hr * rr.weights[i] * r;
      if (sing)
        wr *= std::pow(rr.nodes[i], -alpha);
      for (Eigen::Index j = 0; j < gl.size(); ++j) {
        const double v = gl.nodes[j];
        const double w = wr * gl.weights[j] * hx * hy;
        {
          const double p = hx * r, q = hy * r * v;
          cb(b + sx * p, b - sx * q, sx * (p + q), w);
        }
        {
          const double p = hx * r * v, q = hy * r;
          cb(b + sx * p, b - sx * q, sx * (p + q), w);
        }
      }
    }
  }
}

template <class CB>
void separated(double xa, double xb, double ya, double yb, const PairQuadOptions& o, CB&& cb) {
  const double gap = std::max(ya - xb, xa - yb);
  const double hx = xb - xa, hy = yb - ya;
  const double size = std::max(hx, hy);
  if (gap >= o.far_ratio * size) {
    const auto& gl = gauss_legendre(o.order);
    for (Eigen::Index i = 0; i < gl.size(); ++i) {
      const double x = xa + hx * gl.nodes[i];
      for (Eigen::Index j = 0; j < gl.size(); ++j) {
        const double y = ya + hy * gl.nodes[j];
        cb(x, y, x - y, hx * hy * gl.weights[i] * gl.weights[j]);
      }
    }
    return;
  }
  if (hx >= hy) {
    const double m = 0.5 * (xa + xb);
    separated(xa, m, ya, yb, o, cb);
    separated(m, xb, ya, yb, o, cb);
  } else {
    const double m = 0.5 * (ya + yb);
    separated(xa, xb, ya, m, o, cb);
    separated(xa, xb, m, yb, o, cb);
  }
}

struct Interval {
  double a, b;
  int v0, v1;
};

/// Dispatches the pair (E, F), with F shifted by a period where that brings it closer.
template <class CB>
void pair_integral(const Mesh1D& mesh, std::size_t e, std::size_t f, double gamma,
                   const PairQuadOptions& o, Interval& ex, Interval& fx, CB&& cb) {
  const auto E = mesh.element(e);
  const auto F = mesh.element(f);
  ex = {E.x0, E.x1, E.v0, E.v1};
  fx = {F.x0, F.x1, F.v0, F.v1};
  if (e == f) {
    same_element(E.x0, E.x1, gamma, o, cb);
    return;
  }
  if (E.v1 == F.v0 && E.x1 == F.x0) {
    touching(E.x1, E.x1 - E.x0, F.x1 - F.x0, -1.0, gamma, o, cb);
    return;
  }
  if (mesh.periodic && E.v0 == F.v1) {
    const double shift = E.x0 - F.x1;
    fx.a += shift;
    fx.b += shift;
    touching(E.x0, E.x1 - E.x0, fx.b - fx.a, 1.0, gamma, o, cb);
    return;
  }
  if (E.v0 == F.v1 && E.x0 == F.x1) {
    touching(E.x0, E.x1 - E.x0, F.x1 - F.x0, 1.0, gamma, o, cb);
    return;
  }
  if (mesh.periodic) {
    const double mid_e = 0.5 * (E.x0 + E.x1);
    const double mid_f = 0.5 * (F.x0 + F.x1);
    double best = 0.0;
    for (double sh : {-mesh.period, mesh.period})
      if (std::abs(mid_f + sh - mid_e) < std::abs(mid_f + best - mid_e))
        best = sh;
    fx.a += best;
    fx.b += best;
  }
  separated(ex.a, ex.b, fx.a, fx.b, o, cb);
}

struct Local {
  std::array<int, 4> v{};
  int nv = 0;
  std::array<double, 16> m{};
  int slot(int vertex) {
    for (int i = 0; i < nv; ++i)
      if (v[i] == vertex)
        return i;
    v[nv] = vertex;
    return nv++;
  }
};

std::vector<std::pair<std::size_t, std::size_t>> element_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n + 1) / 2);
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t f = e; f < n; ++f)
      pairs.emplace_back(e, f);
  return pairs;
}

void check_mesh(const Mesh1D& mesh) {
  if (mesh.x.size() < 3 || mesh.dof.size() != mesh.x.size())
    throw DomainError("Mesh1D: need at least three vertices and one dof entry per vertex");
  for (std::size_t i = 0; i + 1 < mesh.x.size(); ++i)
    if (!(mesh.x[i + 1] > mesh.x[i]))
      throw DomainError("Mesh1D: vertices must be strictly increasing");
}

} // namespace

Eigen::MatrixXd assemble_difference_form(const Mesh1D& mesh, const PairKernel& k, double gamma,
                                         const PairQuadOptions& opt) {
  check_mesh(mesh);
  const auto pairs = element_pairs(mesh.n_elements());
  std::vector<Local> locals(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [e, f] = pairs[idx];
    Local& loc = locals[idx];
    Interval ex{}, fx{};
    const auto E = mesh.element(e);
    const auto F = mesh.element(f);
    const int se0 = loc.slot(E.v0), se1 = loc.slot(E.v1);
    const int sf0 = loc.slot(F.v0), sf1 = loc.slot(F.v1);
    // Interval geometry is fixed by pair_integral before the first callback.
    pair_integral(mesh, e, f, gamma, opt, ex, fx, [&](double x, double y, double diff, double w) {
      std::array<double, 4> d{};
      if (e == f) {
        const double g = diff / (ex.b - ex.a);
        d[se0] = -g;
        d[se1] = g;
      } else {
        const double hx = ex.b - ex.a, hy = fx.b - fx.a;
        d[se0] += (ex.b - x) / hx;
        d[se1] += (x - ex.a) / hx;
        d[sf0] -= (fx.b - y) / hy;
        d[sf1] -= (y - fx.a) / hy;
      }
      const double kw = w * k(x, y, diff);
      for (int i = 0; i < loc.nv; ++i)
        for (int j = 0; j < loc.nv; ++j)
          loc.m[4 * i + j] += kw * d[i] * d[j];
    });
  });
  const int n = mesh.ndof();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const Local& loc = locals[idx];
    const double factor = pairs[idx].first == pairs[idx].second ? 0.5 : 1.0;
    for (int i = 0; i < loc.nv; ++i) {
      const int di = mesh.dof[loc.v[i]];
      if (di < 0)
        continue;
      for (int j = 0; j < loc.nv; ++j) {
        const int dj = mesh.dof[loc.v[j]];
        if (dj >= 0)
          out(di, dj) += factor * loc.m[4 * i + j];
      }
    }
  }
  return out;
}

Eigen::MatrixXd assemble_product_form(const Mesh1D& mesh, const PairKernel& k, double gamma,
                                      const PairQuadOptions& opt) {
  check_mesh(mesh);
  const auto pairs = element_pairs(mesh.n_elements());
  std::vector<std::array<double, 4>> locals(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [e, f] = pairs[idx];
    auto& m = locals[idx];
    m.fill(0.0);
    Interval ex{}, fx{};
    pair_integral(mesh, e, f, gamma, opt, ex, fx, [&](double x, double y, double diff, double w) {
      const double hx = ex.b - ex.a, hy = fx.b - fx.a;
      const double px0 = (ex.b - x) / hx, px1 = (x - ex.a) / hx;
      const double py0 = (fx.b - y) / hy, py1 = (y - fx.a) / hy;
      const double kw = w * k(x, y, diff);
      m[0] += kw * px0 * py0;
      m[1] += kw * px0 * py1;
      m[2] += kw * px1 * py0;
      m[3] += kw * px1 * py1;
    });
  });
  const int n = mesh.ndof();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [e, f] = pairs[idx];
    const auto E = mesh.element(e);
    const auto F = mesh.element(f);
    const std::array<int, 2> ve{mesh.dof[E.v0], mesh.dof[E.v1]};
    const std::array<int, 2> vf{mesh.dof[F.v0], mesh.dof[F.v1]};
    const auto& m = locals[idx];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (ve[i] < 0 || vf[j] < 0)
          continue;
        out(ve[i], vf[j]) += m[2 * i + j];
        if (e != f)
          out(vf[j], ve[i]) += m[2 * i + j];
      }
  }
  return out;
}

namespace {

template <class CB>
void element_quadrature(const Mesh1D& mesh, const Mesh1D::Element& E, int order, int levels,
                        CB&& cb) {
  const double h = E.x1 - E.x0;
  const bool left = levels > 0 && mesh.dof[E.v0] < 0;
  const bool right = levels > 0 && mesh.dof[E.v1] < 0;
  const auto& gl = gauss_legendre(order);
  auto run = [&](const std::vector<double>& edges, bool mirror) {
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double lo = edges[k], hp = edges[k + 1] - edges[k];
      for (Eigen::Index i = 0; i < gl.size(); ++i) {
        const double t = lo + hp * gl.nodes[i];
        cb(mirror ? E.x1 - t : E.x0 + t, hp * gl.weights[i]);
      }
    }
  };
  if (left && right) {
    run(graded_edges(0.0, 0.5 * h, 0.5 * h * std::ldexp(1.0, -levels)), false);
    run(graded_edges(0.0, 0.5 * h, 0.5 * h * std::ldexp(1.0, -levels)), true);
  } else if (left) {
    run(graded_edges(0.0, h, h * std::ldexp(1.0, -levels)), false);
  } else if (right) {
    run(graded_edges(0.0, h, h * std::ldexp(1.0, -levels)), true);
  } else {
    run({0.0, h}, false);
  }
}

} // namespace

Eigen::MatrixXd assemble_weighted_mass(const Mesh1D& mesh, const std::function<double(double)>& g,
                                       int order, int levels) {
  check_mesh(mesh);
  const std::size_t ne = mesh.n_elements();
  std::vector<std::array<double, 4>> locals(ne);
  parallel_for(ne, [&](std::size_t e) {
    const auto E = mesh.element(e);
    auto& m = locals[e];
    m.fill(0.0);
    const double h = E.x1 - E.x0;
    element_quadrature(mesh, E, order, levels, [&](double x, double w) {
      const double p0 = (E.x1 - x) / h, p1 = (x - E.x0) / h;
      const double gw = w * g(x);
      m[0] += gw * p0 * p0;
      m[1] += gw * p0 * p1;
      m[2] += gw * p1 * p0;
      m[3] += gw * p1 * p1;
    });
  });
  const int n = mesh.ndof();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto E = mesh.element(e);
    const std::array<int, 2> v{mesh.dof[E.v0], mesh.dof[E.v1]};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (v[i] >= 0 && v[j] >= 0)
          out(v[i], v[j]) += locals[e][2 * i + j];
  }
  return out;
}

Eigen::VectorXd assemble_load(const Mesh1D& mesh, const std::function<double(double)>& g,
                              int order) {
  check_mesh(mesh);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.ndof());
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const auto E = mesh.element(e);
    const double h = E.x1 - E.x0;
    double l0 = 0.0, l1 = 0.0;
    element_quadrature(mesh, E, order, 0, [&](double x, double w) {
      const double gw = w * g(x);
      l0 += gw * (E.x1 - x) / h;
      l1 += gw * (x - E.x0) / h;
    });
    if (mesh.dof[E.v0] >= 0)
      out[mesh.dof[E.v0]] += l0;
    if (mesh.dof[E.v1] >= 0)
      out[mesh.dof[E.v1]] += l1;
  }
  return out;
}

} // namespace fracbs
