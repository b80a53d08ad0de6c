#pragma once

#include <vector>

#include <Eigen/Dense>

#include "frachardy/assembly.hpp"
#include "frachardy/geometry.hpp"

namespace frachardy {

//! Parameters of the boundary barrier t^{(2s-1)/2} (1 - log t)^{-alpha}.
struct BarrierParams {
  double alpha = 0.75;  // must lie in (1/2, 1)
  double s = 0.75;      // must lie in (1/2, 1)

  double gamma() const;  // 8 alpha (1-s) / ((2s-1)(3-2s)), recomputed on demand
  void validate() const;
};

double barrier_chi(const BarrierParams& bp, double t);
double barrier_chi_prime(const BarrierParams& bp, double t);
double barrier_chi_double_prime(const BarrierParams& bp, double t);

//! (a+b)^theta - a^theta - theta b^theta for a >= b > 0, 1 < theta <= 2.
//! Nonnegative up to rounding.
double algebraic_inequality_margin(double a, double b, double theta);

struct AdaptiveConfig {
  int radial_order = 24;    // Gauss-Jacobi order for the singular radial leg
  int gauss_order = 10;     // Gauss order for regular legs / angular panels
  int initial_panels = 16;  // starting angular subdivision (2D)
  double rel_tol = 1e-7;    // angular refinement budget, relative to the integral
  int max_depth = 30;
};

//! K(x) = int_Omega (delta(y) - delta(x))^2 / |y-x|^{N+2s} dy, by polar
//! integration about x: Gauss-Jacobi handles the weak |y-x|^{-2s} singularity
//! radially, adaptive panels handle the angular direction. Behaves like
//! delta(x)^{2-2s} near the boundary. All thresholds are relative, so the
//! result is exactly dilation-covariant.
double delta_increment_energy(const Domain& d, const Point& x, const FracParams& p,
                              const AdaptiveConfig& cfg = {});

//! Precomputed quadrature tables for the geometric Hardy residual
//!   u^T A u - h int u^2 / m_{2s}^{2s} - a(N,s) int u^2 / |Omega_x|^{2s/N}
//! (or the convex specialization with delta and |Omega|). Nonnegative in the
//! continuum; the discrete check allows a small quadrature slack.
class GeomHardyVerifier {
 public:
  GeomHardyVerifier(const Domain& d, const Mesh& mesh, const FracParams& p,
                    const DirectionalQuadrature& q, bool convex_specialization = false,
                    int grading_levels = 12, int gauss_order = 4);

  //! u_all: coefficients over all mesh nodes, zero on boundary nodes.
  double residual(const AssembledProblem& prob, const Eigen::VectorXd& u_all) const;

  double hardy_weight_integral(const Eigen::VectorXd& u_all) const;     // int u^2 * w_m
  double isoperimetric_integral(const Eigen::VectorXd& u_all) const;    // int u^2 * w_o

 private:
  struct Entry {
    int nloc;
    int gid[3];
    double lambda[3];
    double w_hardy;  // w * m^{-2s}  (or w * delta^{-2s})
    double w_iso;    // w * |Omega_x|^{-2s/N}  (or w * |Omega|^{-2s/N})
  };
  std::vector<Entry> table_;
  double h_, a_;
};

//! One-shot convenience wrapper around GeomHardyVerifier.
double geom_hardy_residual(const Domain& d, const Mesh& mesh, const AssembledProblem& prob,
                           const Eigen::VectorXd& u_all, const DirectionalQuadrature& q,
                           bool convex_specialization = false);

//! LHS - RHS of the reach lower estimate
//!   int (1/max_reach)^{2s} domega >= 2^{-2s} (N |Omega_x| / |S^{N-1}|)^{-2s/N};
//! nonnegative for any normalized directional quadrature.
double d_lower_estimate_margin(const Domain& d, const Point& x, const FracParams& p,
                               const DirectionalQuadrature& q);

}  // namespace frachardy
