#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frachardy/constants.hpp"

namespace frachardy {

using Point = Eigen::Vector2d;  // 1D domains use the x component only

//! Section of the line {x + t*nu} inside the domain: sorted disjoint parameter
//! intervals plus the derived directional quantities at t = 0.
struct RayTrace {
  std::vector<std::pair<double, double>> intervals;
  double first_exit = 0.0;       // tau_nu: first positive exit time
  double first_exit_back = 0.0;  // tau_{-nu}
  double two_sided_min = 0.0;    // d_nu = min(tau_nu, tau_{-nu})
  double chord_length = 0.0;     // D_nu = tau_nu + tau_{-nu}
  double max_reach = 0.0;        // sup{|t| : x + t nu in Omega} over all intervals
};

//! Quadrature on the unit sphere S^{N-1} with weights normalized to sum to 1.
struct DirectionalQuadrature {
  int dim = 2;
  std::vector<Eigen::Vector3d> nodes;  // unit vectors; z = 0 for dim <= 2
  std::vector<double> weights;

  static DirectionalQuadrature two_point();                           // N = 1: {+1,-1}
  static DirectionalQuadrature circle_trapezoid(int m);               // N = 2, uniform
  static DirectionalQuadrature circle_gauss(int per_quadrant);        // N = 2, 4 GL panels
  static DirectionalQuadrature sphere_product(int n_polar, int n_azimuth);  // N = 3
  static DirectionalQuadrature sphere_monte_carlo(int m, std::uint64_t seed);

  void validate() const;  // unit nodes, positive weights summing to 1
};

//! Bounded domain: interval (1D), polygon / convex polygon / disk (2D).
//! Immutable after construction; all queries are const and thread-safe.
class Domain {
 public:
  enum class Kind { Interval, ConvexPolygon, Polygon, Disk };

  static Domain interval(double a, double b);
  static Domain convex_polygon(std::vector<Point> vertices);
  static Domain polygon(std::vector<Point> vertices);
  static Domain disk(const Point& center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::Interval ? 1 : 2; }
  bool convex() const { return kind_ != Kind::Polygon; }

  double volume() const;    // length (1D) or area (2D, shoelace / pi r^2)
  double diameter() const;
  bool contains(const Point& x) const;  // open-set membership

  //! Distance to the boundary; throws if x is outside the closure.
  double boundary_distance(const Point& x) const;

  //! All crossings of the line {x + t nu} with the boundary; x must be inside.
  //! Directions tangent to an edge are resolved by a small angular nudge.
  RayTrace ray_trace(const Point& x, const Eigen::Vector2d& nu) const;

  //! Domain scaled by r about the origin (dilation tests and sweeps).
  Domain dilated(double r) const;

  // shape accessors
  double interval_a() const { return a_; }
  double interval_b() const { return b_; }
  const std::vector<Point>& vertices() const { return verts_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Domain() = default;
  RayTrace trace_once(const Point& x, const Eigen::Vector2d& nu) const;

  Kind kind_ = Kind::Interval;
  double a_ = 0.0, b_ = 1.0;   // interval
  std::vector<Point> verts_;   // polygons (counter-clockwise)
  Point center_ = Point::Zero();
  double radius_ = 1.0;        // disk
};

//! Volume |Omega_x| of the part of Omega seen from x along straight chords,
//! via |Omega_x| = (|S^{N-1}|/N) int tau_nu(x)^N domega(nu) with first-exit tau.
double visible_volume(const Domain& d, const Point& x, const DirectionalQuadrature& q);

//! Loss-Sloane directional mean distances at x. `plain` uses the two-sided
//! distance d_nu only (the larger of the two); `reach_corrected` adds the
//! 1/max_reach term inside the 2s-mean and never exceeds `plain`.
struct MeanDistances {
  double plain = 0.0;            // m_{2s}
  double reach_corrected = 0.0;  // M_{2s}
};
MeanDistances mean_distances(const Domain& d, const Point& x, const FracParams& p,
                             const DirectionalQuadrature& q);

}  // namespace frachardy
