#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "frachardy/geometry.hpp"
#include "frachardy/mesh.hpp"

namespace frachardy {

struct QuadratureConfig {
  int singular_order = 4;  // Gauss order inside the regularized touching-pair transforms
  int regular_order = 3;   // tensor Gauss order for disjoint element pairs
  int near_order = 5;      // used instead when the pair distance is below one diameter

  void validate() const;  // singular transform order must be >= 2
};

//! The three discretized forms of the shifted Hardy quotient on P1 elements:
//! Gagliardo stiffness A, boundary-weighted mass B, plain mass M.
//! A and M cover all nodes; B and the *_int restrictions act on interior nodes.
struct AssembledProblem {
  Eigen::MatrixXd A;  // all nodes
  Eigen::MatrixXd M;  // all nodes
  Eigen::MatrixXd A_int, B_int, M_int;
  FracParams params;
  double domain_volume = 0.0;
  std::vector<int> interior_index;

  void validate() const;  // symmetry, definiteness, constant annihilation
};

//! Gagliardo form matrix over all nodes:
//! A_ij = (c_{N,s}/2) iint (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) / |x-y|^{N+2s}.
//! Touching element pairs are handled by singularity-removing relative-coordinate
//! transforms (exact radial integrals, Gauss in the regular directions);
//! disjoint pairs by tensor Gauss. jobs = 0 picks a hardware default; results
//! are merged in a fixed order, so runs with the same jobs count are bit-identical.
Eigen::MatrixXd assemble_gagliardo(const Mesh& mesh, const FracParams& p,
                                   const QuadratureConfig& cfg = {}, int jobs = 0);

//! Hardy-weighted mass over interior nodes: B_ij = int phi_i phi_j delta^{-2s}.
//! Elements touching the boundary are split by geometric grading (ratio 1/2,
//! grading_levels layers) toward the touching set before Gauss quadrature.
Eigen::MatrixXd assemble_hardy_mass(const Mesh& mesh, const Domain& d, const FracParams& p,
                                    int grading_levels = 12);

//! Exact P1 mass matrix over all nodes.
Eigen::MatrixXd assemble_mass(const Mesh& mesh);

AssembledProblem assemble_problem(const Mesh& mesh, const Domain& d, const FracParams& p,
                                  const QuadratureConfig& cfg = {}, int grading_levels = 12,
                                  int jobs = 0);

//! Gagliardo seminorm of a P1 coefficient vector for each s in the grid
//! (reassembles A per s; used for the continuity-in-s property).
std::vector<double> seminorm_in_s(const Mesh& mesh, const Eigen::VectorXd& u_all,
                                  const std::vector<double>& s_grid,
                                  const QuadratureConfig& cfg = {});

//! Quadrature points for integrating a boundary-singular weight against P1
//! basis products over one element. Boundary-touching elements get geometric
//! grading toward the touching set; elements with all vertices on the boundary
//! yield no points (every interior basis function vanishes there).
struct WeightedPoint {
  Point p;
  double w;
  Eigen::Vector3d lambda;  // barycentric w.r.t. the element (lambda[2] = 0 in 1D)
};
std::vector<WeightedPoint> element_weight_quadrature(const Mesh& mesh, int elem, int levels,
                                                     int gauss_order);

//! Plain-text triplet dump "i j value" with a one-line header.
void write_matrix_triplets(std::ostream& os, const Eigen::MatrixXd& m, double s, char kind);

}  // namespace frachardy
