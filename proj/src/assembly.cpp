#include "frachardy/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "frachardy/errors.hpp"
#include "frachardy/quadrature.hpp"

namespace frachardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// ---------------------------------------------------------------------------
// 1D pair kernels (kernel |x-y|^{-(1+2s)}, P1 hats)
// ---------------------------------------------------------------------------

// identical segment: the numerator is exactly grad_a grad_b (x-y)^2, so the
// relative-coordinate integral collapses to a closed form.
void seg_identical(double h, double s, Eigen::Matrix2d& lm) {
  const double f = 2.0 * std::pow(h, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
  const double g[2] = {-1.0 / h, 1.0 / h};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) lm(a, b) = f * g[a] * g[b];
}

// segments sharing one endpoint p; local nodes [p, qK, qL]. The radial integral
// about p is exact, the remaining direction is a smooth 1D Gauss integral.
void seg_adjacent(double hK, double hL, double s, const QuadRule1D& g, Eigen::Matrix3d& lm) {
  static const double eK[3] = {-1.0, 1.0, 0.0};
  static const double eL[3] = {-1.0, 0.0, 1.0};
  lm.setZero();
  const double pref = hK * hL / (3.0 - 2.0 * s);
  for (size_t q = 0; q < g.nodes.size(); ++q) {
    const double z = g.nodes[q], w = g.weights[q];
    const double k1 = std::pow(hK + z * hL, -1.0 - 2.0 * s);
    const double k2 = std::pow(hK * z + hL, -1.0 - 2.0 * s);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        lm(a, b) += w * ((eK[a] - z * eL[a]) * (eK[b] - z * eL[b]) * k1 +
                         (z * eK[a] - eL[a]) * (z * eK[b] - eL[b]) * k2);
      }
    }
  }
  lm *= pref;
}

void seg_disjoint(double x0, double hK, double y0, double hL, double s, const QuadRule1D& g,
                  Eigen::Matrix4d& lm) {
  lm.setZero();
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const double x = x0 + hK * g.nodes[i];
    const double phiK[2] = {1.0 - g.nodes[i], g.nodes[i]};
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      const double y = y0 + hL * g.nodes[j];
      const double phiL[2] = {1.0 - g.nodes[j], g.nodes[j]};
      const double kw =
          g.weights[i] * g.weights[j] * hK * hL * std::pow(std::abs(x - y), -1.0 - 2.0 * s);
      const double d[4] = {phiK[0], phiK[1], -phiL[0], -phiL[1]};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) lm(a, b) += kw * d[a] * d[b];
    }
  }
}

// ---------------------------------------------------------------------------
// 2D pair kernels (kernel |x-y|^{-(2+2s)}, P1 on triangles)
// ---------------------------------------------------------------------------

// hexagon T - T of the reference triangle, vertices in angular order
const Eigen::Vector2d kHex[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
const double kHexAng[7] = {0.0,    M_PI / 2, 3 * M_PI / 4, M_PI,
                           3 * M_PI / 2, 7 * M_PI / 4, 2 * M_PI};

double hex_exit(int arc, const Eigen::Vector2d& dir) {
  const Eigen::Vector2d& P = kHex[arc];
  const Eigen::Vector2d E = kHex[(arc + 1) % 6] - P;
  return cross2(P, E) / cross2(dir, E);
}

// reference gradients of the P1 shape functions
const Eigen::Vector2d kGrad[3] = {{-1, -1}, {1, 0}, {0, 1}};

// same triangle twice: relative polar coordinates; the radial profile is a pure
// power times the homothety area factor, integrated in closed (Beta) form.
void tri_identical(const Eigen::Matrix2d& B, double detB, double s, const QuadRule1D& g,
                   Eigen::Matrix3d& lm) {
  lm.setZero();
  const double beta23 = 2.0 / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s) * (4.0 - 2.0 * s));
  for (int arc = 0; arc < 6; ++arc) {
    const double t0 = kHexAng[arc], t1 = kHexAng[arc + 1];
    for (size_t q = 0; q < g.nodes.size(); ++q) {
      const double th = t0 + (t1 - t0) * g.nodes[q];
      const double wq = (t1 - t0) * g.weights[q];
      const Eigen::Vector2d dir(std::cos(th), std::sin(th));
      const double nb = (B * dir).norm();
      const double wb = hex_exit(arc, dir);
      const double f = wq * std::pow(nb, -2.0 - 2.0 * s) * std::pow(wb, 2.0 - 2.0 * s);
      double gd[3];
      for (int a = 0; a < 3; ++a) gd[a] = kGrad[a].dot(dir);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) lm(a, b) += f * gd[a] * gd[b];
    }
  }
  lm *= detB * detB * 0.5 * beta23;
}

// int_0^1 min(A(1-t), B t)^p dt with A, B in (0, inf]
double min_power_integral(double A, double B, double p) {
  if (!std::isfinite(A)) return std::pow(B, p) / (p + 1.0);
  if (!std::isfinite(B)) return std::pow(A, p) / (p + 1.0);
  const double ts = A / (A + B);
  return (std::pow(B, p) * std::pow(ts, p + 1.0) + std::pow(A, p) * std::pow(1.0 - ts, p + 1.0)) /
         (p + 1.0);
}

struct ZPoint {
  double za, zb, w;
};

void box_points(double x0, double x1, double y0, double y1, const QuadRule1D& g,
                std::vector<ZPoint>& out) {
  for (size_t i = 0; i < g.nodes.size(); ++i)
    for (size_t j = 0; j < g.nodes.size(); ++j)
      out.push_back({x0 + (x1 - x0) * g.nodes[i], y0 + (y1 - y0) * g.nodes[j],
                     (x1 - x0) * (y1 - y0) * g.weights[i] * g.weights[j]});
}

void tri_points(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                const QuadRule1D& g, std::vector<ZPoint>& out) {
  const double area2 = std::abs(cross2(p1 - p0, p2 - p0));
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      const double l1 = g.nodes[i], l2 = g.nodes[j] * (1.0 - l1);
      const Eigen::Vector2d p = p0 + l1 * (p1 - p0) + l2 * (p2 - p0);
      out.push_back({p.x(), p.y(), area2 * (1.0 - l1) * g.weights[i] * g.weights[j]});
    }
  }
}

// triangles sharing the edge [p0, p1]; local nodes [p0, p1, aK, bL].
// Relative coordinates d = (v1-u1, u2, v2) split into four cones by the
// dominant component; the radial and edge-parameter integrals are exact, the
// two remaining directions are Gauss integrals over kink-free pieces.
void tri_edge(const Eigen::Vector2d& E, const Eigen::Vector2d& Avec, const Eigen::Vector2d& Bvec,
              double s, const QuadRule1D& g, Eigen::Matrix4d& lm) {
  static const double alpha[4] = {-1.0, 1.0, 0.0, 0.0};
  static const double betaK[4] = {-1.0, 0.0, 1.0, 0.0};
  static const double betaL[4] = {-1.0, 0.0, 0.0, 1.0};
  const double detK = std::abs(cross2(E, Avec));
  const double detL = std::abs(cross2(E, Bvec));
  const double pw = 3.0 - 2.0 * s;
  lm.setZero();

  // piece tables: direction map (za,zb) -> (d1,d2,d3), plus constraint coefficients
  struct Piece {
    int cone;  // 1..4
    std::vector<ZPoint> pts;
  };
  static thread_local std::vector<ZPoint> pts;

  auto run_piece = [&](int cone, const std::vector<ZPoint>& zpts) {
    for (const ZPoint& z : zpts) {
      double d1, d2, d3, Ac, Bc;
      switch (cone) {
        case 1:  // d = w(z1, 1, z3), za = z1 in [-1,1], zb = z3 in [0,1]
          d1 = z.za; d2 = 1.0; d3 = z.zb;
          Ac = 1.0 / std::max(1.0, z.za + z.zb);
          Bc = z.za < 0.0 ? -1.0 / z.za : kInf;
          break;
        case 2:  // d = w(z1, z2, 1), za = z1, zb = z2
          d1 = z.za; d2 = z.zb; d3 = 1.0;
          Ac = 1.0 / std::max(z.zb, 1.0 + z.za);
          Bc = z.za < 0.0 ? -1.0 / z.za : kInf;
          break;
        case 3:  // d = w(1, z2, z3)
          d1 = 1.0; d2 = z.za; d3 = z.zb;
          Ac = 1.0 / (1.0 + z.zb);
          Bc = kInf;
          break;
        default:  // cone 4: d = w(-1, z2, z3)
          d1 = -1.0; d2 = z.za; d3 = z.zb;
          Ac = z.za > 0.0 ? 1.0 / z.za : kInf;
          Bc = 1.0;
          break;
      }
      const Eigen::Vector2d diff = -d1 * E + d2 * Avec - d3 * Bvec;
      const double R = diff.norm();
      const double W = min_power_integral(Ac, Bc, pw) / pw;
      const double f = z.w * std::pow(R, -2.0 - 2.0 * s) * W;
      double ell[4];
      for (int a = 0; a < 4; ++a) ell[a] = -d1 * alpha[a] + d2 * betaK[a] - d3 * betaL[a];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) lm(a, b) += f * ell[a] * ell[b];
    }
  };

  using V = Eigen::Vector2d;
  // cone 1: kinks along z1 = 0 and z1 + z3 = 1
  pts.clear(); box_points(-1, 0, 0, 1, g, pts); run_piece(1, pts);
  pts.clear(); tri_points(V(0, 0), V(1, 0), V(0, 1), g, pts); run_piece(1, pts);
  pts.clear(); tri_points(V(1, 0), V(1, 1), V(0, 1), g, pts); run_piece(1, pts);
  // cone 2: kinks along z1 = 0 and z2 = 1 + z1
  pts.clear(); box_points(0, 1, 0, 1, g, pts); run_piece(2, pts);
  pts.clear(); tri_points(V(-1, 0), V(0, 0), V(0, 1), g, pts); run_piece(2, pts);
  pts.clear(); tri_points(V(-1, 0), V(0, 1), V(-1, 1), g, pts); run_piece(2, pts);
  // cones 3 and 4 are kink-free boxes
  pts.clear(); box_points(0, 1, 0, 1, g, pts); run_piece(3, pts);
  pts.clear(); box_points(0, 1, 0, 1, g, pts); run_piece(4, pts);

  lm *= detK * detL;
}

// triangles sharing the single vertex p; local nodes [p, k1, k2, l1, l2].
// The scaling about p is exactly homogeneous, so the radial integral is exact
// and a smooth 3D Gauss integral remains (two symmetric regions).
void tri_vertex(const Eigen::Vector2d& EK1, const Eigen::Vector2d& EK2, const Eigen::Vector2d& EL1,
                const Eigen::Vector2d& EL2, double s, const QuadRule1D& g,
                Eigen::Matrix<double, 5, 5>& lm) {
  static const double aK[5] = {-1.0, 1.0, 0.0, 0.0, 0.0};
  static const double bK[5] = {-1.0, 0.0, 1.0, 0.0, 0.0};
  static const double aL[5] = {-1.0, 0.0, 0.0, 1.0, 0.0};
  static const double bL[5] = {-1.0, 0.0, 0.0, 0.0, 1.0};
  const double detK = std::abs(cross2(EK1, EK2));
  const double detL = std::abs(cross2(EL1, EL2));
  lm.setZero();
  const int n = static_cast<int>(g.nodes.size());
  for (int it = 0; it < n; ++it) {
    const double t = g.nodes[it];
    for (int ix = 0; ix < n; ++ix) {
      const double v1 = g.nodes[ix];
      for (int ie = 0; ie < n; ++ie) {
        const double v2 = g.nodes[ie] * (1.0 - v1);
        const double jac = (1.0 - v1) * g.weights[it] * g.weights[ix] * g.weights[ie];
        // region A: u on the far edge of K, v scaled inside L
        {
          const Eigen::Vector2d diff = t * EK1 + (1.0 - t) * EK2 - (v1 * EL1 + v2 * EL2);
          const double f = jac * std::pow(diff.norm(), -2.0 - 2.0 * s);
          double ell[5];
          for (int a = 0; a < 5; ++a)
            ell[a] = t * aK[a] + (1.0 - t) * bK[a] - (v1 * aL[a] + v2 * bL[a]);
          for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) lm(a, b) += f * ell[a] * ell[b];
        }
        // region B: roles swapped
        {
          const Eigen::Vector2d diff = v1 * EK1 + v2 * EK2 - (t * EL1 + (1.0 - t) * EL2);
          const double f = jac * std::pow(diff.norm(), -2.0 - 2.0 * s);
          double ell[5];
          for (int a = 0; a < 5; ++a)
            ell[a] = v1 * aK[a] + v2 * bK[a] - (t * aL[a] + (1.0 - t) * bL[a]);
          for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) lm(a, b) += f * ell[a] * ell[b];
        }
      }
    }
  }
  lm *= detK * detL / (4.0 - 2.0 * s);
}

void tri_disjoint(const std::vector<TriQuadPoint>& pk, const std::vector<TriQuadPoint>& pl,
                  double s, Eigen::Matrix<double, 6, 6>& lm) {
  lm.setZero();
  for (const TriQuadPoint& a : pk) {
    for (const TriQuadPoint& b : pl) {
      const double kw = a.w * b.w * std::pow((a.p - b.p).norm(), -2.0 - 2.0 * s);
      const double d[6] = {a.lambda[0], a.lambda[1], a.lambda[2],
                           -b.lambda[0], -b.lambda[1], -b.lambda[2]};
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) lm(i, j) += kw * d[i] * d[j];
    }
  }
}

// ---------------------------------------------------------------------------

struct PairContext {
  const Mesh* mesh;
  double s;
  QuadRule1D g_sing, g_reg, g_near;
  std::vector<double> diam;
  std::vector<std::vector<TriQuadPoint>> pts_reg, pts_near;  // cached per element (2D)
  std::vector<std::array<Eigen::Vector2d, 2>> seg_pts;       // (x0, h) per segment
};

void assemble_pair_1d(const PairContext& ctx, int e1, int e2, Eigen::MatrixXd& A) {
  const Mesh& m = *ctx.mesh;
  const auto& s1 = m.segments[e1];
  const auto& s2 = m.segments[e2];
  const double scale = e1 == e2 ? 1.0 : 2.0;
  if (e1 == e2) {
    Eigen::Matrix2d lm;
    seg_identical(m.element_area(e1), ctx.s, lm);
    const int idx[2] = {s1[0], s1[1]};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) A(idx[a], idx[b]) += lm(a, b);
    return;
  }
  int shared = -1, i1 = -1, j1 = -1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (s1[i] == s2[j]) { shared = s1[i]; i1 = i; j1 = j; }
  if (shared >= 0) {
    const int qK = s1[1 - i1], qL = s2[1 - j1];
    Eigen::Matrix3d lm;
    seg_adjacent(m.element_area(e1), m.element_area(e2), ctx.s, ctx.g_sing, lm);
    const int idx[3] = {shared, qK, qL};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) A(idx[a], idx[b]) += scale * lm(a, b);
    return;
  }
  const double x0 = m.nodes[s1[0]].x(), x1 = m.nodes[s1[1]].x();
  const double y0 = m.nodes[s2[0]].x(), y1 = m.nodes[s2[1]].x();
  const double xlo = std::min(x0, x1), xhi = std::max(x0, x1);
  const double ylo = std::min(y0, y1), yhi = std::max(y0, y1);
  const double gap = std::max(ylo - xhi, xlo - yhi);
  // the tolerance keeps exact gap == diameter ties (ubiquitous on uniform
  // meshes) stable under dilation rounding
  const bool near = gap < (1.0 - 1e-9) * std::max(ctx.diam[e1], ctx.diam[e2]);
  Eigen::Matrix4d lm;
  seg_disjoint(xlo, ctx.diam[e1], ylo, ctx.diam[e2], ctx.s, near ? ctx.g_near : ctx.g_reg, lm);
  const int idx[4] = {x0 < x1 ? s1[0] : s1[1], x0 < x1 ? s1[1] : s1[0],
                      y0 < y1 ? s2[0] : s2[1], y0 < y1 ? s2[1] : s2[0]};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) A(idx[a], idx[b]) += scale * lm(a, b);
}

void assemble_pair_2d(const PairContext& ctx, int e1, int e2, Eigen::MatrixXd& A) {
  const Mesh& m = *ctx.mesh;
  const auto& t1 = m.triangles[e1];
  const auto& t2 = m.triangles[e2];
  if (e1 == e2) {
    const Eigen::Vector2d v0 = m.nodes[t1[0]];
    Eigen::Matrix2d B;
    B.col(0) = m.nodes[t1[1]] - v0;
    B.col(1) = m.nodes[t1[2]] - v0;
    Eigen::Matrix3d lm;
    tri_identical(B, std::abs(B.determinant()), ctx.s, ctx.g_sing, lm);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) A(t1[a], t1[b]) += lm(a, b);
    return;
  }
  int si[3], sj[3], ns = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (t1[i] == t2[j]) { si[ns] = i; sj[ns] = j; ++ns; }
  if (ns == 2) {
    const int iA = 3 - si[0] - si[1], jB = 3 - sj[0] - sj[1];
    const Eigen::Vector2d p0 = m.nodes[t1[si[0]]];
    Eigen::Matrix4d lm;
    tri_edge(m.nodes[t1[si[1]]] - p0, m.nodes[t1[iA]] - p0, m.nodes[t2[jB]] - p0, ctx.s,
             ctx.g_sing, lm);
    const int idx[4] = {t1[si[0]], t1[si[1]], t1[iA], t2[jB]};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) A(idx[a], idx[b]) += 2.0 * lm(a, b);
    return;
  }
  if (ns == 1) {
    const Eigen::Vector2d p = m.nodes[t1[si[0]]];
    const int ik[2] = {si[0] == 0 ? 1 : 0, si[0] == 2 ? 1 : 2};
    const int jk[2] = {sj[0] == 0 ? 1 : 0, sj[0] == 2 ? 1 : 2};
    Eigen::Matrix<double, 5, 5> lm;
    tri_vertex(m.nodes[t1[ik[0]]] - p, m.nodes[t1[ik[1]]] - p, m.nodes[t2[jk[0]]] - p,
               m.nodes[t2[jk[1]]] - p, ctx.s, ctx.g_sing, lm);
    const int idx[5] = {t1[si[0]], t1[ik[0]], t1[ik[1]], t2[jk[0]], t2[jk[1]]};
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) A(idx[a], idx[b]) += 2.0 * lm(a, b);
    return;
  }
  // disjoint: bump the order when the closest vertices are within one diameter
  // (tie tolerance as in the 1D path)
  double mind2 = std::numeric_limits<double>::max();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      mind2 = std::min(mind2, (m.nodes[t1[i]] - m.nodes[t2[j]]).squaredNorm());
  const double dref = std::max(ctx.diam[e1], ctx.diam[e2]);
  const bool near = mind2 < (1.0 - 1e-9) * dref * dref;
  Eigen::Matrix<double, 6, 6> lm;
  tri_disjoint(near ? ctx.pts_near[e1] : ctx.pts_reg[e1],
               near ? ctx.pts_near[e2] : ctx.pts_reg[e2], ctx.s, lm);
  const int idx[6] = {t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) A(idx[a], idx[b]) += 2.0 * lm(a, b);
}

}  // namespace

void QuadratureConfig::validate() const {
  if (singular_order < 2)
    throw Error(ERR_QUADRATURE_CONFIG, "singular transform order must be >= 2");
  if (regular_order < 1 || near_order < 1)
    throw Error(ERR_QUADRATURE_CONFIG, "quadrature orders must be >= 1");
}

Eigen::MatrixXd assemble_gagliardo(const Mesh& mesh, const FracParams& p,
                                   const QuadratureConfig& cfg, int jobs) {
  p.validate();
  cfg.validate();
  if (!(p.s > 0.5))
    throw Error(ERR_INVALID_PARAMS, "assemble_gagliardo requires s strictly above 1/2");
  if (mesh.dim != p.dim)
    throw Error(ERR_INVALID_PARAMS, "mesh dimension does not match parameters");

  PairContext ctx;
  ctx.mesh = &mesh;
  ctx.s = p.s;
  ctx.g_sing = gauss_legendre_01(cfg.singular_order);
  ctx.g_reg = gauss_legendre_01(cfg.regular_order);
  ctx.g_near = gauss_legendre_01(cfg.near_order);
  const int ne = mesh.num_elements();
  ctx.diam.resize(ne);
  if (mesh.dim == 1) {
    for (int e = 0; e < ne; ++e) ctx.diam[e] = mesh.element_area(e);
  } else {
    ctx.pts_reg.resize(ne);
    ctx.pts_near.resize(ne);
    for (int e = 0; e < ne; ++e) {
      const auto& t = mesh.triangles[e];
      const Eigen::Vector2d a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
      ctx.diam[e] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
      ctx.pts_reg[e] = triangle_gauss(a, b, c, cfg.regular_order);
      ctx.pts_near[e] = triangle_gauss(a, b, c, cfg.near_order);
    }
  }

  const int nn = static_cast<int>(mesh.nodes.size());
  int nthreads = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp(nthreads, 1, 8);

  std::vector<Eigen::MatrixXd> partial(nthreads, Eigen::MatrixXd::Zero(nn, nn));
  auto worker = [&](int t) {
    Eigen::MatrixXd& At = partial[t];
    for (int e1 = t; e1 < ne; e1 += nthreads) {
      for (int e2 = e1; e2 < ne; ++e2) {
        if (mesh.dim == 1)
          assemble_pair_1d(ctx, e1, e2, At);
        else
          assemble_pair_2d(ctx, e1, e2, At);
      }
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn, nn);
  for (int t = 0; t < nthreads; ++t) A += partial[t];  // fixed merge order

  A *= c_ns(p) / 2.0;
  A = 0.5 * (A + A.transpose()).eval();
  return A;
}

std::vector<WeightedPoint> element_weight_quadrature(const Mesh& mesh, int elem, int levels,
                                                     int gauss_order) {
  if (levels < 4) throw Error(ERR_QUADRATURE_CONFIG, "grading_levels must be >= 4");
  std::vector<WeightedPoint> out;
  const QuadRule1D g = gauss_legendre_01(gauss_order);

  if (mesh.dim == 1) {
    const auto& seg = mesh.segments[elem];
    const double x0 = mesh.nodes[seg[0]].x(), x1 = mesh.nodes[seg[1]].x();
    const bool b0 = mesh.boundary_node[seg[0]], b1 = mesh.boundary_node[seg[1]];
    auto emit_cell = [&](double t0, double t1) {  // t: local coordinate in [0,1] from x0
      for (size_t i = 0; i < g.nodes.size(); ++i) {
        const double t = t0 + (t1 - t0) * g.nodes[i];
        WeightedPoint wp;
        wp.p = Point(x0 + (x1 - x0) * t, 0.0);
        wp.w = std::abs(x1 - x0) * (t1 - t0) * g.weights[i];
        wp.lambda = Eigen::Vector3d(1.0 - t, t, 0.0);
        out.push_back(wp);
      }
    };
    if (b0 == b1) {  // interior element (both flags false) or degenerate; single rule
      if (!b0) emit_cell(0.0, 1.0);
      return out;
    }
    // geometric cells accumulating toward the boundary endpoint
    const bool at0 = b0;
    auto cell_at = [&](double lo, double hi) {
      if (at0) emit_cell(lo, hi);
      else emit_cell(1.0 - hi, 1.0 - lo);
    };
    cell_at(0.5, 1.0);
    for (int l = 1; l < levels; ++l) cell_at(std::pow(0.5, l + 1), std::pow(0.5, l));
    cell_at(0.0, std::pow(0.5, levels));
    return out;
  }

  const auto& tri = mesh.triangles[elem];
  const Point V[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
  int nb = 0;
  for (int i = 0; i < 3; ++i) nb += mesh.boundary_node[tri[i]] ? 1 : 0;
  if (nb == 3) return out;  // every interior basis function vanishes here

  Eigen::Matrix2d Bm;
  Bm.col(0) = V[1] - V[0];
  Bm.col(1) = V[2] - V[0];
  const Eigen::Matrix2d Binv = Bm.inverse();
  auto emit_tri = [&](const Point& a, const Point& b, const Point& c) {
    for (const TriQuadPoint& q : triangle_gauss(a, b, c, gauss_order)) {
      WeightedPoint wp;
      wp.p = q.p;
      wp.w = q.w;
      const Eigen::Vector2d l12 = Binv * (q.p - V[0]);
      wp.lambda = Eigen::Vector3d(1.0 - l12.x() - l12.y(), l12.x(), l12.y());
      out.push_back(wp);
    }
  };
  if (nb == 0) {
    emit_tri(V[0], V[1], V[2]);
    return out;
  }
  // grade toward the edge opposite the most interior vertex; that edge carries
  // the whole touching set (1 or 2 boundary vertices)
  int vstar = -1;
  double best = -1.0;
  for (int i = 0; i < 3; ++i) {
    if (mesh.boundary_node[tri[i]]) continue;
    double dmin = std::numeric_limits<double>::max();
    for (int j = 0; j < 3; ++j)
      if (j != i) dmin = std::min(dmin, (V[i] - V[j]).norm());
    if (dmin > best) { best = dmin; vstar = i; }
  }
  const Point vs = V[vstar];
  const Point A = V[(vstar + 1) % 3], Bp = V[(vstar + 2) % 3];
  auto level_pt = [&](double c, const Point& base) { return (c * vs + (1.0 - c) * base).eval(); };
  auto emit_layer = [&](double lo, double hi) {
    const Point e1h = level_pt(hi, A), e2h = level_pt(hi, Bp);
    const Point e1l = level_pt(lo, A), e2l = level_pt(lo, Bp);
    emit_tri(e1h, e2h, e2l);
    emit_tri(e1h, e2l, e1l);
  };
  emit_tri(vs, level_pt(0.5, A), level_pt(0.5, Bp));
  for (int l = 1; l < levels; ++l) emit_layer(std::pow(0.5, l + 1), std::pow(0.5, l));
  emit_layer(0.0, std::pow(0.5, levels));
  return out;
}

Eigen::MatrixXd assemble_hardy_mass(const Mesh& mesh, const Domain& d, const FracParams& p,
                                    int grading_levels) {
  p.validate();
  if (!(p.s > 0.5))
    throw Error(ERR_INVALID_PARAMS, "assemble_hardy_mass requires s strictly above 1/2");
  if (grading_levels < 4) throw Error(ERR_QUADRATURE_CONFIG, "grading_levels must be >= 4");
  const int ni = mesh.num_interior;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ni, ni);
  const int nloc = mesh.dim == 1 ? 2 : 3;
  const double twos = 2.0 * p.s;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    int loc[3] = {-1, -1, -1};
    bool any_interior = false;
    for (int a = 0; a < nloc; ++a) {
      const int gid = mesh.dim == 1 ? mesh.segments[e][a] : mesh.triangles[e][a];
      loc[a] = mesh.interior_index[gid];
      any_interior |= loc[a] >= 0;
    }
    if (!any_interior) continue;
    for (const WeightedPoint& q : element_weight_quadrature(mesh, e, grading_levels, 6)) {
      const double delta = d.boundary_distance(q.p);
      if (delta <= 0.0)
        throw Error(ERR_QUADRATURE_CONFIG, "quadrature node hit the boundary exactly");
      const double w = q.w * std::pow(delta, -twos);
      for (int a = 0; a < nloc; ++a) {
        if (loc[a] < 0) continue;
        for (int b = 0; b < nloc; ++b) {
          if (loc[b] < 0) continue;
          B(loc[a], loc[b]) += w * q.lambda[a] * q.lambda[b];
        }
      }
    }
  }
  B = 0.5 * (B + B.transpose()).eval();
  return B;
}

Eigen::MatrixXd assemble_mass(const Mesh& mesh) {
  const int nn = static_cast<int>(mesh.nodes.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nn, nn);
  if (mesh.dim == 1) {
    for (const auto& s : mesh.segments) {
      const double h = std::abs(mesh.nodes[s[1]].x() - mesh.nodes[s[0]].x());
      M(s[0], s[0]) += h / 3.0;
      M(s[1], s[1]) += h / 3.0;
      M(s[0], s[1]) += h / 6.0;
      M(s[1], s[0]) += h / 6.0;
    }
  } else {
    for (size_t e = 0; e < mesh.triangles.size(); ++e) {
      const auto& t = mesh.triangles[e];
      const double area = mesh.element_area(static_cast<int>(e));
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M(t[a], t[b]) += area / 12.0 * (a == b ? 2.0 : 1.0);
    }
  }
  return M;
}

namespace {

Eigen::MatrixXd restrict_interior(const Eigen::MatrixXd& full, const std::vector<int>& idx,
                                  int ni) {
  Eigen::MatrixXd out(ni, ni);
  const int nn = static_cast<int>(idx.size());
  for (int i = 0; i < nn; ++i) {
    if (idx[i] < 0) continue;
    for (int j = 0; j < nn; ++j)
      if (idx[j] >= 0) out(idx[i], idx[j]) = full(i, j);
  }
  return out;
}

}  // namespace

void AssembledProblem::validate() const {
  auto check_sym = [](const Eigen::MatrixXd& m, const char* name) {
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
      throw Error(ERR_EIGENSOLVER, std::string(name) + " is not symmetric");
  };
  check_sym(A, "A");
  check_sym(B_int, "B");
  check_sym(M, "M");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(A.rows());
  const double asm_tol = 1e-8 * A.cwiseAbs().maxCoeff();
  if (std::abs(ones.dot(A * ones)) > asm_tol)
    throw Error(ERR_EIGENSOLVER, "Gagliardo form does not annihilate constants");
  if (Eigen::LLT<Eigen::MatrixXd>(A_int).info() != Eigen::Success)
    throw Error(ERR_EIGENSOLVER, "interior stiffness is not positive definite");
  if (Eigen::LLT<Eigen::MatrixXd>(B_int).info() != Eigen::Success)
    throw Error(ERR_EIGENSOLVER, "Hardy mass is not positive definite");
  if (Eigen::LLT<Eigen::MatrixXd>(M_int).info() != Eigen::Success)
    throw Error(ERR_EIGENSOLVER, "mass matrix is not positive definite");
}

AssembledProblem assemble_problem(const Mesh& mesh, const Domain& d, const FracParams& p,
                                  const QuadratureConfig& cfg, int grading_levels, int jobs) {
  AssembledProblem prob;
  prob.params = p;
  prob.domain_volume = d.volume();
  prob.interior_index = mesh.interior_index;
  prob.A = assemble_gagliardo(mesh, p, cfg, jobs);
  prob.M = assemble_mass(mesh);
  prob.B_int = assemble_hardy_mass(mesh, d, p, grading_levels);
  prob.A_int = restrict_interior(prob.A, mesh.interior_index, mesh.num_interior);
  prob.M_int = restrict_interior(prob.M, mesh.interior_index, mesh.num_interior);
  prob.validate();
  return prob;
}

std::vector<double> seminorm_in_s(const Mesh& mesh, const Eigen::VectorXd& u_all,
                                  const std::vector<double>& s_grid,
                                  const QuadratureConfig& cfg) {
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    FracParams p;
    p.dim = mesh.dim;
    p.s = s;
    const Eigen::MatrixXd A = assemble_gagliardo(mesh, p, cfg);
    out.push_back(u_all.dot(A * u_all));
  }
  return out;
}

void write_matrix_triplets(std::ostream& os, const Eigen::MatrixXd& m, double s, char kind) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# frac-hardy matrix N=%d s=%.17g kind=%c\n",
                static_cast<int>(m.rows()), s, kind);
  os << buf;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, m(i, j));
      os << buf;
    }
  }
}

}  // namespace frachardy
