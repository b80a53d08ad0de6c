#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "frachardy/geometry.hpp"

namespace frachardy {

//! Conforming simplicial mesh with homogeneous boundary flags.
//! 1D meshes fill `segments`, 2D meshes fill `triangles` (positively oriented).
struct Mesh {
  int dim = 1;
  std::vector<Point> nodes;  // y = 0 for 1D
  std::vector<std::array<int, 2>> segments;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary_node;
  std::vector<int> interior_index;  // dense renumbering, -1 on boundary nodes
  int num_interior = 0;
  double min_diameter = 0.0;
  double shape_regularity = 1.0;  // max over elements of diameter / (2 * inradius)

  int num_elements() const {
    return dim == 1 ? static_cast<int>(segments.size()) : static_cast<int>(triangles.size());
  }
  double element_area(int e) const;  // length in 1D
  Mesh dilated(double r) const;      // nodes scaled by r about the origin

  void finalize();  // rebuild interior map and quality metrics; validates orientation
};

//! Uniform mesh of (0,1) with n elements (n >= 4), nodes at i/n.
Mesh mesh_interval(int n);

//! Uniform mesh of (a,b) with n elements.
Mesh mesh_interval(int n, double a, double b);

//! Triangulation of a 2D domain with target mesh size h (h <= diam/4).
//! Axis-aligned rectangles and disks use mapped structured grids; general
//! polygons use ear clipping followed by uniform refinement.
Mesh mesh_domain_2d(const Domain& d, double h);

}  // namespace frachardy
