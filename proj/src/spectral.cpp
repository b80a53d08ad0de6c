#include "frachardy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frachardy/constants.hpp"
#include "frachardy/errors.hpp"

namespace frachardy {

EigResult smallest_generalized_eig(const Eigen::MatrixXd& L, const Eigen::MatrixXd& R,
                                   double tol) {
  if (L.rows() != L.cols() || R.rows() != R.cols() || L.rows() != R.rows())
    throw Error(ERR_EIGENSOLVER, "pencil matrices must be square and of equal size");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
    throw Error(ERR_EIGENSOLVER, "right matrix is not positive definite (assembly bug?)");

  // C = Linv * L * Linv^T, reduced standard symmetric problem
  Eigen::MatrixXd C = llt.matrixL().solve(L);
  C = llt.matrixL().solve(C.transpose()).eval();
  C = (0.5 * (C + C.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw Error(ERR_EIGENSOLVER, "dense eigensolver failed");

  EigResult out;
  out.value = es.eigenvalues()(0);
  Eigen::VectorXd v = llt.matrixU().solve(es.eigenvectors().col(0));
  v /= std::sqrt(v.dot(R * v));
  out.vector = v;

  // relative residual with a roundoff floor (the pencil value can be 0)
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * L.norm();
  auto converged = [&](const Eigen::VectorXd& w, double theta) {
    const double resid = (L * w - theta * (R * w)).norm();
    return resid <= tol * (L * w).norm() + floor * w.norm();
  };
  int iter = 0;
  while (!converged(v, out.value)) {
    if (++iter > 50)
      throw Error(ERR_EIGENSOLVER, "shift-inverse refinement did not converge");
    // one step of shift-inverse iteration about a slightly displaced shift
    const double sigma = out.value - 1e-8 * std::max(1.0, std::abs(out.value));
    Eigen::LDLT<Eigen::MatrixXd> ldlt(L - sigma * R);
    if (ldlt.info() != Eigen::Success)
      throw Error(ERR_EIGENSOLVER, "shift-inverse factorization failed");
    v = ldlt.solve(R * v);
    v /= std::sqrt(v.dot(R * v));
    out.value = v.dot(L * v);
    out.vector = v;
  }
  return out;
}

double mu_estimate(const AssembledProblem& prob) {
  return smallest_generalized_eig(prob.A_int, prob.B_int).value;
}

double j_lambda(const AssembledProblem& prob, double lambda) {
  return smallest_generalized_eig(prob.A_int - lambda * prob.M_int, prob.B_int).value;
}

double first_eigenvalue(const AssembledProblem& prob) {
  return smallest_generalized_eig(prob.A_int, prob.M_int).value;
}

double lambda_star_pencil(const AssembledProblem& prob) {
  const double h = h_ns(prob.params);
  return smallest_generalized_eig(prob.A_int - h * prob.B_int, prob.M_int).value;
}

double lambda_star_bisect(const AssembledProblem& prob, double tol) {
  const double h = h_ns(prob.params);
  const double lam1 = first_eigenvalue(prob);
  if (tol <= 0.0) tol = 1e-8 * std::max(1.0, std::abs(lam1));

  // j is strictly decreasing with j(lam1) = 0 < h; expand downward for the bracket
  double hi = lam1;
  double lo = lam1 - std::max(1.0, std::abs(lam1));
  double step = std::max(1.0, std::abs(lam1));
  while (j_lambda(prob, lo) <= h) {
    if (lo < -1e6)
      throw Error(ERR_BRACKET_FAILURE,
                  "no shift below -1e6 raises the quotient above h (h misconfigured?)");
    step *= 2.0;
    lo -= step;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (hi + lo);
    if (j_lambda(prob, mid) > h)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (hi + lo);
}

HardyReport make_report(const AssembledProblem& prob, bool domain_convex, int curve_points,
                        double bisect_tol) {
  HardyReport r;
  r.dim = prob.params.dim;
  r.s = prob.params.s;
  r.h_reference = h_ns(prob.params);
  r.mu_discrete = mu_estimate(prob);
  r.lambda1_discrete = first_eigenvalue(prob);
  r.lambda_star_pencil = frachardy::lambda_star_pencil(prob);
  r.lambda_star_bisect = frachardy::lambda_star_bisect(prob, bisect_tol);
  if (domain_convex) {
    r.a_bound = a_ns(prob.params) *
                std::pow(prob.domain_volume, -2.0 * prob.params.s / prob.params.dim);
  } else {
    r.a_bound = std::numeric_limits<double>::quiet_NaN();
  }
  const double lam1 = r.lambda1_discrete;
  const double mid = -0.5 * lam1, rad = 1.5 * lam1;
  r.j_curve.reserve(curve_points);
  for (int k = curve_points - 1; k >= 0; --k) {  // ascending lambda
    const double lam = mid + rad * std::cos(M_PI * k / (curve_points - 1));
    r.j_curve.emplace_back(lam, j_lambda(prob, lam));
  }
  return r;
}

}  // namespace frachardy
