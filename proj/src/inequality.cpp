#include "frachardy/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "frachardy/constants.hpp"
#include "frachardy/errors.hpp"
#include "frachardy/quadrature.hpp"

namespace frachardy {

double BarrierParams::gamma() const {
  validate();
  return 8.0 * alpha * (1.0 - s) / ((2.0 * s - 1.0) * (3.0 - 2.0 * s));
}

void BarrierParams::validate() const {
  if (!(alpha > 0.5) || !(alpha < 1.0))
    throw Error(ERR_INVALID_PARAMS, "barrier exponent alpha must lie in (1/2, 1)");
  if (!(s > 0.5) || !(s < 1.0))
    throw Error(ERR_INVALID_PARAMS, "barrier exponent s must lie in (1/2, 1)");
}

double barrier_chi(const BarrierParams& bp, double t) {
  bp.validate();
  if (!(t > 0.0)) throw Error(ERR_INVALID_PARAMS, "barrier argument must be positive");
  const double head = std::pow(t, 0.5 * (2.0 * bp.s - 1.0));
  if (t > 1.0) return head;
  return head * std::pow(1.0 - std::log(t), -bp.alpha);
}

double barrier_chi_prime(const BarrierParams& bp, double t) {
  bp.validate();
  if (!(t > 0.0)) throw Error(ERR_INVALID_PARAMS, "barrier argument must be positive");
  const double s = bp.s, al = bp.alpha;
  const double head = std::pow(t, -0.5 * (3.0 - 2.0 * s));
  if (t > 1.0) return 0.5 * (2.0 * s - 1.0) * head;
  const double L = 1.0 - std::log(t);
  return 0.5 * (2.0 * s - 1.0) * head * std::pow(L, -al) + al * head * std::pow(L, -al - 1.0);
}

double barrier_chi_double_prime(const BarrierParams& bp, double t) {
  bp.validate();
  if (!(t > 0.0)) throw Error(ERR_INVALID_PARAMS, "barrier argument must be positive");
  const double s = bp.s, al = bp.alpha;
  const double lead = -0.25 * (2.0 * s - 1.0) * (3.0 - 2.0 * s);
  const double head = std::pow(t, -0.5 * (5.0 - 2.0 * s));
  if (t > 1.0) return lead * head;
  const double L = 1.0 - std::log(t);
  // the (1 - log t)^{-alpha-1} cross term carries the gamma() coefficient when
  // the leading factor is pulled out
  return head * (lead * std::pow(L, -al) - 2.0 * al * (1.0 - s) * std::pow(L, -al - 1.0) +
                 al * (al + 1.0) * std::pow(L, -al - 2.0));
}

double algebraic_inequality_margin(double a, double b, double theta) {
  if (!(a >= b) || !(b > 0.0))
    throw Error(ERR_INVALID_PARAMS, "algebraic_inequality_margin requires a >= b > 0");
  if (!(theta > 1.0) || !(theta <= 2.0))
    throw Error(ERR_INVALID_PARAMS, "algebraic_inequality_margin requires 1 < theta <= 2");
  return std::pow(a + b, theta) - std::pow(a, theta) - theta * std::pow(b, theta);
}

// ---------------------------------------------------------------------------
// K(x): polar integration with adaptive angular panels
// ---------------------------------------------------------------------------

namespace {

// radial leg along direction nu: sum over the positive parts of the ray sections
double radial_leg(const Domain& d, const Point& x, const Eigen::Vector2d& nu, double delta_x,
                  double twos, const QuadRule1D& gj, const QuadRule1D& gl) {
  const RayTrace rt = d.ray_trace(x, nu);
  double acc = 0.0;
  for (const auto& [t0, t1] : rt.intervals) {
    if (t1 <= 0.0) continue;
    if (t0 < 0.0) {
      // section containing x: integrand = (diff/t)^2 t^{1-2s}, Gauss-Jacobi in t
      const double tau = t1;
      const double scale = std::pow(tau, 2.0 - twos);
      for (size_t i = 0; i < gj.nodes.size(); ++i) {
        const double t = tau * gj.nodes[i];
        const double diff = d.boundary_distance(x + t * Point(nu.x(), nu.y())) - delta_x;
        const double ratio = diff / t;
        acc += scale * gj.weights[i] * ratio * ratio;
      }
    } else {
      // detached section (non-convex re-entry): smooth, plain Gauss
      for (size_t i = 0; i < gl.nodes.size(); ++i) {
        const double t = t0 + (t1 - t0) * gl.nodes[i];
        const double diff = d.boundary_distance(x + t * Point(nu.x(), nu.y())) - delta_x;
        acc += (t1 - t0) * gl.weights[i] * diff * diff * std::pow(t, -1.0 - twos);
      }
    }
  }
  return acc;
}

}  // namespace

double delta_increment_energy(const Domain& d, const Point& x, const FracParams& p,
                              const AdaptiveConfig& cfg) {
  p.validate();
  if (!(p.s > 0.5)) throw Error(ERR_INVALID_PARAMS, "delta_increment_energy requires s > 1/2");
  if (!d.contains(x)) throw Error(ERR_POINT_OUTSIDE, "point must lie inside the domain");
  const double twos = 2.0 * p.s;
  const double delta_x = d.boundary_distance(x);
  const QuadRule1D gj = gauss_jacobi_01(cfg.radial_order, 1.0 - twos);
  const QuadRule1D gl = gauss_legendre_01(cfg.gauss_order);

  if (d.dim() == 1) {
    double acc = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const Eigen::Vector2d nu(sgn, 0.0);
      // split at the midpoint kink of the distance function
      const double mid = 0.5 * (d.interval_a() + d.interval_b());
      const double tau = sgn > 0 ? d.interval_b() - x.x() : x.x() - d.interval_a();
      const double tkink = sgn > 0 ? mid - x.x() : x.x() - mid;
      const double tsplit = (tkink > 0.0 && tkink < tau) ? tkink : tau;
      const double scale = std::pow(tsplit, 2.0 - twos);
      for (size_t i = 0; i < gj.nodes.size(); ++i) {
        const double t = tsplit * gj.nodes[i];
        const double diff = d.boundary_distance(x + t * Point(nu.x(), 0)) - delta_x;
        acc += scale * gj.weights[i] * (diff / t) * (diff / t);
      }
      if (tsplit < tau) {
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
          const double t = tsplit + (tau - tsplit) * gl.nodes[i];
          const double diff = d.boundary_distance(x + t * Point(nu.x(), 0)) - delta_x;
          acc += (tau - tsplit) * gl.weights[i] * diff * diff * std::pow(t, -1.0 - twos);
        }
      }
    }
    return acc;
  }

  // 2D: angular panels with budgeted refinement
  auto F = [&](double theta) {
    return radial_leg(d, x, Eigen::Vector2d(std::cos(theta), std::sin(theta)), delta_x, twos, gj,
                      gl);
  };
  auto panel = [&](double a, double b) {
    double acc = 0.0;
    for (size_t i = 0; i < gl.nodes.size(); ++i) acc += (b - a) * gl.weights[i] * F(a + (b - a) * gl.nodes[i]);
    return acc;
  };
  double pilot = 0.0;
  std::vector<std::pair<double, double>> panels;
  for (int k = 0; k < cfg.initial_panels; ++k)
    panels.emplace_back(2.0 * M_PI * k / cfg.initial_panels,
                        2.0 * M_PI * (k + 1) / cfg.initial_panels);
  for (const auto& [a, b] : panels) pilot += panel(a, b);
  if (pilot <= 0.0) return 0.0;

  std::function<double(double, double, double, int)> refine = [&](double a, double b,
                                                                  double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(a, m), right = panel(m, b);
    const double budget = cfg.rel_tol * pilot * (b - a) / (2.0 * M_PI);
    if (std::abs(left + right - whole) <= budget) return left + right;
    if (depth >= cfg.max_depth)
      throw Error(ERR_ADAPTIVE, "adaptive angular refinement did not converge");
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  };
  double total = 0.0;
  for (const auto& [a, b] : panels) total += refine(a, b, panel(a, b), 0);
  return total;
}

// ---------------------------------------------------------------------------
// geometric Hardy residual
// ---------------------------------------------------------------------------

GeomHardyVerifier::GeomHardyVerifier(const Domain& d, const Mesh& mesh, const FracParams& p,
                                     const DirectionalQuadrature& q, bool convex_specialization,
                                     int grading_levels, int gauss_order) {
  p.validate();
  const double twos = 2.0 * p.s;
  h_ = h_ns(p);
  a_ = a_ns(p);
  const double vol_pow = convex_specialization
                             ? std::pow(d.volume(), -twos / p.dim)
                             : 0.0;  // per-point otherwise
  const int nloc = mesh.dim == 1 ? 2 : 3;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (const WeightedPoint& wp : element_weight_quadrature(mesh, e, grading_levels,
                                                             std::max(gauss_order, 4))) {
      Entry en;
      en.nloc = nloc;
      for (int a = 0; a < nloc; ++a) {
        en.gid[a] = mesh.dim == 1 ? mesh.segments[e][a] : mesh.triangles[e][a];
        en.lambda[a] = wp.lambda[a];
      }
      if (convex_specialization) {
        en.w_hardy = wp.w * std::pow(d.boundary_distance(wp.p), -twos);
        en.w_iso = wp.w * vol_pow;
      } else {
        const MeanDistances md = mean_distances(d, wp.p, p, q);
        en.w_hardy = wp.w * std::pow(md.plain, -twos);
        en.w_iso = wp.w * std::pow(visible_volume(d, wp.p, q), -twos / p.dim);
      }
      table_.push_back(en);
    }
  }
}

double GeomHardyVerifier::hardy_weight_integral(const Eigen::VectorXd& u_all) const {
  double acc = 0.0;
  for (const Entry& en : table_) {
    double u = 0.0;
    for (int a = 0; a < en.nloc; ++a) u += en.lambda[a] * u_all[en.gid[a]];
    acc += en.w_hardy * u * u;
  }
  return acc;
}

double GeomHardyVerifier::isoperimetric_integral(const Eigen::VectorXd& u_all) const {
  double acc = 0.0;
  for (const Entry& en : table_) {
    double u = 0.0;
    for (int a = 0; a < en.nloc; ++a) u += en.lambda[a] * u_all[en.gid[a]];
    acc += en.w_iso * u * u;
  }
  return acc;
}

double GeomHardyVerifier::residual(const AssembledProblem& prob,
                                   const Eigen::VectorXd& u_all) const {
  const double energy = u_all.dot(prob.A * u_all);
  return energy - h_ * hardy_weight_integral(u_all) - a_ * isoperimetric_integral(u_all);
}

double geom_hardy_residual(const Domain& d, const Mesh& mesh, const AssembledProblem& prob,
                           const Eigen::VectorXd& u_all, const DirectionalQuadrature& q,
                           bool convex_specialization) {
  GeomHardyVerifier v(d, mesh, prob.params, q, convex_specialization);
  return v.residual(prob, u_all);
}

double d_lower_estimate_margin(const Domain& d, const Point& x, const FracParams& p,
                               const DirectionalQuadrature& q) {
  p.validate();
  if (!(p.s > 0.5)) throw Error(ERR_INVALID_PARAMS, "d_lower_estimate_margin requires s > 1/2");
  const double twos = 2.0 * p.s;
  double lhs = 0.0, tau_moment = 0.0;
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const Eigen::Vector2d nu(q.nodes[k].x(), q.nodes[k].y());
    const RayTrace rt = d.ray_trace(x, nu);
    lhs += q.weights[k] * std::pow(rt.max_reach, -twos);
    tau_moment += q.weights[k] * std::pow(rt.first_exit, p.dim);
  }
  // N |Omega_x| / |S^{N-1}| equals the tau moment for the same quadrature
  const double rhs = std::pow(2.0, -twos) * std::pow(tau_moment, -twos / p.dim);
  return lhs - rhs;
}

}  // namespace frachardy
