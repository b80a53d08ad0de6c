#pragma once

#include <vector>

#include <Eigen/Dense>

namespace frachardy {

struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Gauss-Legendre rule on [0,1].
QuadRule1D gauss_legendre_01(int n);

//! Gauss-Jacobi rule on [0,1] for the weight t^beta, beta > -1.
//! The returned weights absorb the t^beta factor: sum_i w_i f(t_i) ~ int_0^1 t^beta f(t) dt.
QuadRule1D gauss_jacobi_01(int n, double beta);

struct TriQuadPoint {
  Eigen::Vector2d p;       // physical point
  double w;                // weight (includes element area factor)
  Eigen::Vector3d lambda;  // barycentric coordinates w.r.t. the triangle passed in
};

//! Tensor Gauss rule on a triangle via the collapsed-square map; n*n points.
std::vector<TriQuadPoint> triangle_gauss(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1,
                                         const Eigen::Vector2d& v2, int n);

}  // namespace frachardy
