#include "frachardy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "frachardy/errors.hpp"
#include "frachardy/quadrature.hpp"

namespace frachardy {

namespace {

constexpr double kTangentTol = 1e-12;
constexpr double kBoundaryTol = 1e-12;

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Point& p, const std::vector<Point>& v) {
  // even-odd rule
  bool inside = false;
  const int n = static_cast<int>(v.size());
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const bool cond = (v[i].y() > p.y()) != (v[j].y() > p.y());
    if (cond) {
      const double xint =
          v[j].x() + (p.y() - v[j].y()) / (v[i].y() - v[j].y()) * (v[i].x() - v[j].x());
      if (p.x() < xint) inside = !inside;
    }
  }
  return inside;
}

bool segments_properly_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double signed_area(const std::vector<Point>& v) {
  double s = 0.0;
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) s += cross2(v[i], v[(i + 1) % n]);
  return 0.5 * s;
}

void check_polygon(std::vector<Point>& v, bool require_convex) {
  const int n = static_cast<int>(v.size());
  if (n < 3) throw Error(ERR_DOMAIN_BAD_POLYGON, "polygon needs at least 3 vertices");
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  if (std::abs(signed_area(v)) < 1e-14)
    throw Error(ERR_DOMAIN_BAD_POLYGON, "polygon is degenerate (zero area)");
  // simplicity: no proper intersection between non-adjacent edges
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw Error(ERR_DOMAIN_BAD_POLYGON, "polygon is not simple");
    }
  }
  if (require_convex) {
    for (int i = 0; i < n; ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % n];
      const Point& c = v[(i + 2) % n];
      if (cross2(b - a, c - b) <= 0.0)
        throw Error(ERR_DOMAIN_BAD_POLYGON,
                    "convex_polygon: cross-product test failed (vertices not strictly convex)");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectionalQuadrature factories
// ---------------------------------------------------------------------------

DirectionalQuadrature DirectionalQuadrature::two_point() {
  DirectionalQuadrature q;
  q.dim = 1;
  q.nodes = {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)};
  q.weights = {0.5, 0.5};
  return q;
}

DirectionalQuadrature DirectionalQuadrature::circle_trapezoid(int m) {
  if (m < 4) throw Error(ERR_INVALID_PARAMS, "circle_trapezoid: need at least 4 nodes");
  DirectionalQuadrature q;
  q.dim = 2;
  q.nodes.reserve(m);
  q.weights.assign(m, 1.0 / m);
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * M_PI * k / m;
    q.nodes.emplace_back(std::cos(th), std::sin(th), 0.0);
  }
  return q;
}

DirectionalQuadrature DirectionalQuadrature::circle_gauss(int per_quadrant) {
  const QuadRule1D g = gauss_legendre_01(per_quadrant);
  DirectionalQuadrature q;
  q.dim = 2;
  for (int quad = 0; quad < 4; ++quad) {
    const double off = 0.5 * M_PI * quad;
    for (int i = 0; i < per_quadrant; ++i) {
      const double th = off + 0.5 * M_PI * g.nodes[i];
      q.nodes.emplace_back(std::cos(th), std::sin(th), 0.0);
      q.weights.push_back(0.25 * g.weights[i]);
    }
  }
  return q;
}

DirectionalQuadrature DirectionalQuadrature::sphere_product(int n_polar, int n_azimuth) {
  const QuadRule1D g = gauss_legendre_01(n_polar);
  DirectionalQuadrature q;
  q.dim = 3;
  // mu = cos(polar) on (0,1) and (-1,0) via symmetry, uniform azimuth
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < n_polar; ++i) {
      const double mu = half == 0 ? g.nodes[i] : -g.nodes[i];
      const double r = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int k = 0; k < n_azimuth; ++k) {
        const double ph = 2.0 * M_PI * k / n_azimuth;
        q.nodes.emplace_back(r * std::cos(ph), r * std::sin(ph), mu);
        q.weights.push_back(0.5 * g.weights[i] / n_azimuth);
      }
    }
  }
  return q;
}

DirectionalQuadrature DirectionalQuadrature::sphere_monte_carlo(int m, std::uint64_t seed) {
  DirectionalQuadrature q;
  q.dim = 3;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  q.nodes.reserve(m);
  q.weights.assign(m, 1.0 / m);
  for (int k = 0; k < m; ++k) {
    Eigen::Vector3d v;
    do {
      v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-8);
    q.nodes.push_back(v.normalized());
  }
  return q;
}

void DirectionalQuadrature::validate() const {
  double sum = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i].norm() - 1.0) > 1e-12)
      throw Error(ERR_INVALID_PARAMS, "directional quadrature node is not unit length");
    if (weights[i] <= 0.0) throw Error(ERR_INVALID_PARAMS, "nonpositive quadrature weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ERR_INVALID_PARAMS, "directional quadrature weights must sum to 1");
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain Domain::interval(double a, double b) {
  if (!(a < b)) throw Error(ERR_DOMAIN_BAD_SHAPE, "interval requires a < b");
  Domain d;
  d.kind_ = Kind::Interval;
  d.a_ = a;
  d.b_ = b;
  return d;
}

Domain Domain::convex_polygon(std::vector<Point> vertices) {
  check_polygon(vertices, /*require_convex=*/true);
  Domain d;
  d.kind_ = Kind::ConvexPolygon;
  d.verts_ = std::move(vertices);
  return d;
}

Domain Domain::polygon(std::vector<Point> vertices) {
  check_polygon(vertices, /*require_convex=*/false);
  Domain d;
  d.kind_ = Kind::Polygon;
  d.verts_ = std::move(vertices);
  return d;
}

Domain Domain::disk(const Point& center, double radius) {
  if (!(radius > 0.0)) throw Error(ERR_DOMAIN_BAD_SHAPE, "radius must be positive");
  Domain d;
  d.kind_ = Kind::Disk;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

double Domain::volume() const {
  switch (kind_) {
    case Kind::Interval: return b_ - a_;
    case Kind::Disk: return M_PI * radius_ * radius_;
    default: return std::abs(signed_area(verts_));
  }
}

double Domain::diameter() const {
  switch (kind_) {
    case Kind::Interval: return b_ - a_;
    case Kind::Disk: return 2.0 * radius_;
    default: {
      double d2 = 0.0;
      for (size_t i = 0; i < verts_.size(); ++i)
        for (size_t j = i + 1; j < verts_.size(); ++j)
          d2 = std::max(d2, (verts_[i] - verts_[j]).squaredNorm());
      return std::sqrt(d2);
    }
  }
}

bool Domain::contains(const Point& x) const {
  switch (kind_) {
    case Kind::Interval: return x.x() > a_ && x.x() < b_;
    case Kind::Disk: return (x - center_).norm() < radius_;
    default: return point_in_polygon(x, verts_);
  }
}

double Domain::boundary_distance(const Point& x) const {
  double delta = 0.0;
  switch (kind_) {
    case Kind::Interval: delta = std::min(x.x() - a_, b_ - x.x()); break;
    case Kind::Disk: delta = radius_ - (x - center_).norm(); break;
    default: {
      double dist = std::numeric_limits<double>::max();
      const int n = static_cast<int>(verts_.size());
      for (int i = 0; i < n; ++i)
        dist = std::min(dist, point_segment_distance(x, verts_[i], verts_[(i + 1) % n]));
      if (!point_in_polygon(x, verts_) && dist > kBoundaryTol * diameter())
        throw Error(ERR_POINT_OUTSIDE, "point outside the closure of the domain");
      return dist;
    }
  }
  if (delta < -kBoundaryTol * diameter())
    throw Error(ERR_POINT_OUTSIDE, "point outside the closure of the domain");
  return std::max(delta, 0.0);
}

RayTrace Domain::trace_once(const Point& x, const Eigen::Vector2d& nu) const {
  RayTrace rt;
  if (kind_ == Kind::Interval) {
    if (std::abs(nu.x()) < kTangentTol)
      throw Error(ERR_DEGENERATE_RAY, "1D ray direction has zero x component");
    double t0 = (a_ - x.x()) / nu.x();
    double t1 = (b_ - x.x()) / nu.x();
    if (t0 > t1) std::swap(t0, t1);
    rt.intervals = {{t0, t1}};
  } else if (kind_ == Kind::Disk) {
    const Eigen::Vector2d cx = x - center_;
    const double b = cx.dot(nu);
    const double c = cx.squaredNorm() - radius_ * radius_;
    const double disc = b * b - c;
    if (disc <= 0.0) throw Error(ERR_DEGENERATE_RAY, "ray misses the disk");
    const double sq = std::sqrt(disc);
    rt.intervals = {{-b - sq, -b + sq}};
  } else {
    const int n = static_cast<int>(verts_.size());
    const double scale = diameter();
    std::vector<double> ts;
    for (int i = 0; i < n; ++i) {
      const Point& p = verts_[i];
      const Point& q = verts_[(i + 1) % n];
      const Eigen::Vector2d e = q - p;
      const double den = cross2(nu, e);
      if (std::abs(den) < kTangentTol * e.norm())
        throw Error(ERR_DEGENERATE_RAY, "ray parallel to an edge");
      const double t = cross2(p - x, e) / den;
      const double sigma = (x + t * nu - p).dot(e) / e.squaredNorm();
      if (sigma > -1e-12 && sigma < 1e-12)
        throw Error(ERR_DEGENERATE_RAY, "ray hits a vertex");
      if (sigma > 1.0 - 1e-12 && sigma < 1.0 + 1e-12)
        throw Error(ERR_DEGENERATE_RAY, "ray hits a vertex");
      if (sigma >= 0.0 && sigma < 1.0) ts.push_back(t);
      (void)scale;
    }
    std::sort(ts.begin(), ts.end());
    if (ts.size() % 2 != 0)
      throw Error(ERR_DEGENERATE_RAY, "inconsistent crossing parity");
    for (size_t k = 0; k + 1 < ts.size(); k += 2) rt.intervals.push_back({ts[k], ts[k + 1]});
  }

  // locate the interval containing t = 0 and fill the derived quantities
  bool found = false;
  for (const auto& [t0, t1] : rt.intervals) {
    if (t0 < 0.0 && t1 > 0.0) {
      rt.first_exit = t1;
      rt.first_exit_back = -t0;
      found = true;
    }
    rt.max_reach = std::max({rt.max_reach, std::abs(t0), std::abs(t1)});
  }
  if (!found) throw Error(ERR_DEGENERATE_RAY, "base point is not inside any line section");
  rt.two_sided_min = std::min(rt.first_exit, rt.first_exit_back);
  rt.chord_length = rt.first_exit + rt.first_exit_back;
  return rt;
}

RayTrace Domain::ray_trace(const Point& x, const Eigen::Vector2d& nu) const {
  if (!contains(x)) throw Error(ERR_POINT_OUTSIDE, "ray_trace: base point must be inside");
  Eigen::Vector2d dir = nu.normalized();
  // tangent / vertex hits are measure-zero: retry with a slightly rotated direction
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return trace_once(x, dir);
    } catch (const Error& e) {
      if (e.code() != ERR_DEGENERATE_RAY || kind_ == Kind::Interval) throw;
      const double ang = 1e-9 * (attempt + 1);
      const double c = std::cos(ang), s = std::sin(ang);
      dir = Eigen::Vector2d(c * dir.x() - s * dir.y(), s * dir.x() + c * dir.y());
    }
  }
  throw Error(ERR_DEGENERATE_RAY, "ray_trace: degenerate direction persisted after nudges");
}

Domain Domain::dilated(double r) const {
  if (!(r > 0.0)) throw Error(ERR_DOMAIN_BAD_SHAPE, "dilation factor must be positive");
  switch (kind_) {
    case Kind::Interval: return interval(r * a_, r * b_);
    case Kind::Disk: return disk(r * center_, r * radius_);
    default: {
      std::vector<Point> v = verts_;
      for (auto& p : v) p *= r;
      return kind_ == Kind::ConvexPolygon ? convex_polygon(std::move(v)) : polygon(std::move(v));
    }
  }
}

// ---------------------------------------------------------------------------
// directional integrals
// ---------------------------------------------------------------------------

namespace {

void check_dims(const Domain& d, const DirectionalQuadrature& q) {
  if (d.dim() != q.dim)
    throw Error(ERR_INVALID_PARAMS, "directional quadrature dimension does not match domain");
}

}  // namespace

double visible_volume(const Domain& d, const Point& x, const DirectionalQuadrature& q) {
  check_dims(d, q);
  if (!d.contains(x)) throw Error(ERR_POINT_OUTSIDE, "visible_volume: point must be inside");
  const int n = d.dim();
  double acc = 0.0;
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const Eigen::Vector2d nu(q.nodes[k].x(), q.nodes[k].y());
    const RayTrace rt = d.ray_trace(x, nu);
    acc += q.weights[k] * std::pow(rt.first_exit, n);
  }
  return sphere_measure(n) / n * acc;
}

MeanDistances mean_distances(const Domain& d, const Point& x, const FracParams& p,
                             const DirectionalQuadrature& q) {
  check_dims(d, q);
  p.validate();
  if (!(p.s > 0.5)) throw Error(ERR_INVALID_PARAMS, "mean_distances requires s > 1/2");
  if (!d.contains(x)) throw Error(ERR_POINT_OUTSIDE, "mean_distances: point must be inside");
  if (d.boundary_distance(x) < 1e-12 * d.diameter())
    throw Error(ERR_POINT_ON_BOUNDARY, "point is too close to the boundary");
  const double twos = 2.0 * p.s;
  double acc_m = 0.0, acc_M = 0.0;
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const Eigen::Vector2d nu(q.nodes[k].x(), q.nodes[k].y());
    const RayTrace rt = d.ray_trace(x, nu);
    acc_m += q.weights[k] * std::pow(rt.two_sided_min, -twos);
    acc_M += q.weights[k] * std::pow(1.0 / rt.two_sided_min + 1.0 / rt.max_reach, twos);
  }
  const double cm = std::pow(cos_moment(p), 1.0 / twos);
  MeanDistances out;
  out.plain = cm * std::pow(acc_m, -1.0 / twos);
  out.reach_corrected = cm * std::pow(acc_M, -1.0 / twos);
  return out;
}

}  // namespace frachardy
