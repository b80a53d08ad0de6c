#include "frachardy/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "frachardy/errors.hpp"

namespace frachardy {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

double Mesh::element_area(int e) const {
  if (dim == 1) {
    const auto& s = segments[e];
    return std::abs(nodes[s[1]].x() - nodes[s[0]].x());
  }
  const auto& t = triangles[e];
  return 0.5 * std::abs(cross2(nodes[t[1]] - nodes[t[0]], nodes[t[2]] - nodes[t[0]]));
}

Mesh Mesh::dilated(double r) const {
  if (!(r > 0.0)) throw Error(ERR_MESH_FAILURE, "dilation factor must be positive");
  Mesh m = *this;
  for (auto& p : m.nodes) p *= r;
  m.min_diameter *= r;
  return m;
}

void Mesh::finalize() {
  interior_index.assign(nodes.size(), -1);
  num_interior = 0;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (!boundary_node[i]) interior_index[i] = num_interior++;

  min_diameter = std::numeric_limits<double>::max();
  shape_regularity = 1.0;
  if (dim == 1) {
    for (const auto& s : segments) {
      const double h = std::abs(nodes[s[1]].x() - nodes[s[0]].x());
      if (h <= 0.0) throw Error(ERR_MESH_FAILURE, "zero-length segment");
      min_diameter = std::min(min_diameter, h);
    }
  } else {
    for (auto& t : triangles) {
      double twice_area = cross2(nodes[t[1]] - nodes[t[0]], nodes[t[2]] - nodes[t[0]]);
      if (twice_area < 0.0) {  // enforce positive orientation
        std::swap(t[1], t[2]);
        twice_area = -twice_area;
      }
      if (twice_area <= 0.0) throw Error(ERR_MESH_FAILURE, "degenerate triangle");
      const double a = (nodes[t[1]] - nodes[t[0]]).norm();
      const double b = (nodes[t[2]] - nodes[t[1]]).norm();
      const double c = (nodes[t[0]] - nodes[t[2]]).norm();
      const double diam = std::max({a, b, c});
      const double inradius = twice_area / (a + b + c);
      min_diameter = std::min(min_diameter, diam);
      shape_regularity = std::max(shape_regularity, diam / (2.0 * inradius));
    }
    if (shape_regularity > 100.0)
      throw Error(ERR_MESH_FAILURE, "mesh quality below the configured shape-regularity bound");
  }
}

Mesh mesh_interval(int n) { return mesh_interval(n, 0.0, 1.0); }

Mesh mesh_interval(int n, double a, double b) {
  if (n < 4) throw Error(ERR_MESH_FAILURE, "mesh_interval: need at least 4 elements");
  if (!(a < b)) throw Error(ERR_MESH_FAILURE, "mesh_interval: need a < b");
  Mesh m;
  m.dim = 1;
  m.nodes.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    m.nodes.emplace_back(a + t * (b - a), 0.0);
  }
  for (int i = 0; i < n; ++i) m.segments.push_back({i, i + 1});
  m.boundary_node.assign(n + 1, false);
  m.boundary_node[0] = m.boundary_node[n] = true;
  m.finalize();
  return m;
}

namespace {

struct NodeKey {
  double x, y;
  bool operator<(const NodeKey& o) const { return x < o.x || (x == o.x && y < o.y); }
};

class MeshBuilder {
 public:
  int add(const Point& p) {
    const NodeKey k{p.x(), p.y()};
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(p);
    index_[k] = id;
    return id;
  }
  void tri(int a, int b, int c) { tris_.push_back({a, b, c}); }
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> tris_;

 private:
  std::map<NodeKey, int> index_;
};

bool is_axis_rectangle(const std::vector<Point>& v) {
  if (v.size() != 4) return false;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d e = v[(i + 1) % 4] - v[i];
    if (std::abs(e.x()) > 1e-14 && std::abs(e.y()) > 1e-14) return false;
  }
  return true;
}

Mesh structured_rectangle(const std::vector<Point>& v, double h) {
  double x0 = v[0].x(), x1 = v[0].x(), y0 = v[0].y(), y1 = v[0].y();
  for (const auto& p : v) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  const int nx = std::max(2, static_cast<int>(std::ceil((x1 - x0) / h - 1e-9)));
  const int ny = std::max(2, static_cast<int>(std::ceil((y1 - y0) / h - 1e-9)));
  Mesh m;
  m.dim = 2;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  m.boundary_node.assign(m.nodes.size(), false);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || j == 0 || i == nx || j == ny) m.boundary_node[id(i, j)] = true;
  m.finalize();
  return m;
}

Mesh mapped_disk(const Point& c, double R, double h) {
  // elliptical map of a square grid; the image of the square's boundary lies
  // exactly on the circle.
  const int n = std::max(2, static_cast<int>(std::ceil(2.0 * R / h - 1e-9)));
  Mesh m;
  m.dim = 2;
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double u = -1.0 + 2.0 * i / n;
      const double v = -1.0 + 2.0 * j / n;
      const double x = u * std::sqrt(1.0 - 0.5 * v * v);
      const double y = v * std::sqrt(1.0 - 0.5 * u * u);
      m.nodes.emplace_back(c.x() + R * x, c.y() + R * y);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  m.boundary_node.assign(m.nodes.size(), false);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      if (i == 0 || j == 0 || i == n || j == n) m.boundary_node[id(i, j)] = true;
  m.finalize();
  return m;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Point>& poly) {
  const int n = static_cast<int>(poly.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::array<int, 3>> tris;
  // inclusive: a vertex sitting exactly on the candidate ear's boundary blocks
  // the ear as well (a reflex corner may lie on the diagonal)
  auto inside_tri = [](const Point& p, const Point& a, const Point& b, const Point& c) {
    const double eps = 1e-12 * ((b - a).norm() * (c - a).norm());
    const double d1 = cross2(b - a, p - a);
    const double d2 = cross2(c - b, p - b);
    const double d3 = cross2(a - c, p - c);
    return d1 >= -eps && d2 >= -eps && d3 >= -eps;
  };
  int guard = 0;
  while (idx.size() > 3) {
    if (++guard > 10000) throw Error(ERR_MESH_FAILURE, "ear clipping failed to terminate");
    bool clipped = false;
    const int k = static_cast<int>(idx.size());
    for (int i = 0; i < k; ++i) {
      const int ia = idx[(i + k - 1) % k], ib = idx[i], ic = idx[(i + 1) % k];
      const Point &a = poly[ia], &b = poly[ib], &c = poly[ic];
      if (cross2(b - a, c - b) <= 1e-14) continue;  // reflex or collinear corner
      bool ear = true;
      for (int j = 0; j < k && ear; ++j) {
        const int ij = idx[j];
        if (ij == ia || ij == ib || ij == ic) continue;
        if (inside_tri(poly[ij], a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) throw Error(ERR_MESH_FAILURE, "ear clipping stuck (degenerate polygon?)");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

Mesh polygon_mesh(const Domain& d, double h) {
  std::vector<Point> poly = d.vertices();
  auto coarse = ear_clip(poly);
  MeshBuilder mb;
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : coarse)
    tris.push_back({mb.add(poly[t[0]]), mb.add(poly[t[1]]), mb.add(poly[t[2]])});
  // uniform quadrisection until every edge is at most h
  auto longest_edge = [&](const std::array<int, 3>& t) {
    return std::max({(mb.nodes_[t[1]] - mb.nodes_[t[0]]).norm(),
                     (mb.nodes_[t[2]] - mb.nodes_[t[1]]).norm(),
                     (mb.nodes_[t[0]] - mb.nodes_[t[2]]).norm()});
  };
  int rounds = 0;
  while (true) {
    double hmax = 0.0;
    for (const auto& t : tris) hmax = std::max(hmax, longest_edge(t));
    if (hmax <= h + 1e-12 || ++rounds > 12) break;
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * tris.size());
    for (const auto& t : tris) {
      const int a = t[0], b = t[1], c = t[2];
      const int ab = mb.add(0.5 * (mb.nodes_[a] + mb.nodes_[b]));
      const int bc = mb.add(0.5 * (mb.nodes_[b] + mb.nodes_[c]));
      const int ca = mb.add(0.5 * (mb.nodes_[c] + mb.nodes_[a]));
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  Mesh m;
  m.dim = 2;
  m.nodes = mb.nodes_;
  m.triangles = tris;
  m.boundary_node.assign(m.nodes.size(), false);
  const double tol = 1e-12 * d.diameter();
  for (size_t i = 0; i < m.nodes.size(); ++i)
    m.boundary_node[i] = d.boundary_distance(m.nodes[i]) < tol;
  m.finalize();
  return m;
}

}  // namespace

Mesh mesh_domain_2d(const Domain& d, double h) {
  if (d.dim() != 2) throw Error(ERR_MESH_FAILURE, "mesh_domain_2d needs a 2D domain");
  if (!(h > 0.0) || h > d.diameter() / 4.0 + 1e-12)
    throw Error(ERR_MESH_FAILURE, "mesh size must satisfy 0 < h <= diam/4");
  if (d.kind() == Domain::Kind::Disk) return mapped_disk(d.center(), d.radius(), h);
  if (is_axis_rectangle(d.vertices())) return structured_rectangle(d.vertices(), h);
  return polygon_mesh(d, h);
}

}  // namespace frachardy
