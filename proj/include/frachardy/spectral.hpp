#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frachardy/assembly.hpp"

namespace frachardy {

struct EigResult {
  double value = 0.0;
  Eigen::VectorXd vector;
};

//! Smallest eigenpair of the symmetric pencil (L, R) with R positive definite:
//! Cholesky reduction to a dense standard problem, with a shift-inverse
//! polish when the residual exceeds tol * ||L v||.
EigResult smallest_generalized_eig(const Eigen::MatrixXd& L, const Eigen::MatrixXd& R,
                                   double tol = 1e-10);

//! Discrete sharp Hardy constant: smallest eigenvalue of (A, B) on interior
//! nodes. An upper bound for the continuum constant (Rayleigh quotient over a
//! subspace), non-increasing under nested refinement.
double mu_estimate(const AssembledProblem& prob);

//! Discrete shifted Hardy quotient: smallest eigenvalue of (A - lambda M, B).
double j_lambda(const AssembledProblem& prob, double lambda);

//! Discrete first Dirichlet eigenvalue: smallest eigenvalue of (A, M).
double first_eigenvalue(const AssembledProblem& prob);

//! Discrete analogue of the largest admissible shift: smallest eigenvalue of
//! the pencil (A - h B, M) with h the half-space Hardy constant.
double lambda_star_pencil(const AssembledProblem& prob);

//! Same quantity through the curve: solves j_lambda(x) = h by bisection on
//! [bracket, lambda_1]; the two routes coincide in exact arithmetic.
double lambda_star_bisect(const AssembledProblem& prob, double tol = -1.0 /* auto */);

struct HardyReport {
  int dim = 0;
  double s = 0.0;
  double mu_discrete = 0.0;
  double lambda1_discrete = 0.0;
  double lambda_star_pencil = 0.0;
  double lambda_star_bisect = 0.0;
  double h_reference = 0.0;
  double a_bound = 0.0;  // a(N,s)|Omega|^{-2s/N}; NaN when the domain is not convex
  bool upper_bound = true;  // every discrete infimum over-estimates its continuum value
  std::vector<std::pair<double, double>> j_curve;  // ascending lambda
};

//! Full report for one (domain, s) cell: eigenvalues, both lambda* routes and
//! the j-curve on curve_points Chebyshev-spaced shifts in [-2 lambda_1, lambda_1].
HardyReport make_report(const AssembledProblem& prob, bool domain_convex,
                        int curve_points = 33, double bisect_tol = -1.0);

}  // namespace frachardy
