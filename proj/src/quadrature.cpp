#include "frachardy/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace frachardy {

namespace {

// Golub-Welsch: nodes/weights on [-1,1] from the three-term recurrence of the
// orthogonal polynomials of the weight. a = diagonal, b = squared off-diagonal
// (b[0] = total mass of the weight).
QuadRule1D golub_welsch(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = a[i];
    if (i + 1 < n) {
      const double off = std::sqrt(b[i + 1]);
      J(i, i + 1) = off;
      J(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = b[0] * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadRule1D gauss_legendre_01(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: order must be >= 1");
  std::vector<double> a(n, 0.0), b(n);
  b[0] = 2.0;
  for (int k = 1; k < n; ++k) b[k] = k * k / (4.0 * k * k - 1.0);
  QuadRule1D r = golub_welsch(a, b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

QuadRule1D gauss_jacobi_01(int n, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_01: order must be >= 1");
  if (beta <= -1.0) throw std::invalid_argument("gauss_jacobi_01: beta must be > -1");
  // weight (1+x)^beta on [-1,1] (Jacobi with alpha = 0)
  std::vector<double> a(n), b(n);
  a[0] = beta / (beta + 2.0);
  b[0] = std::pow(2.0, beta + 1.0) / (beta + 1.0);
  for (int k = 1; k < n; ++k) {
    const double den = (2.0 * k + beta) * (2.0 * k + beta + 2.0);
    a[k] = beta * beta / den;
    if (k == 1) {
      b[1] = 4.0 * (1.0 + beta) / ((2.0 + beta) * (2.0 + beta) * (3.0 + beta));
    } else {
      const double t = 2.0 * k + beta;
      b[k] = 4.0 * k * k * (k + beta) * (k + beta) / (t * t * (t + 1.0) * (t - 1.0));
    }
  }
  QuadRule1D r = golub_welsch(a, b);
  // map to [0,1]: t = (1+x)/2, (1+x)^beta = (2t)^beta, dx = 2 dt
  const double scale = std::pow(2.0, -beta - 1.0);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= scale;
  }
  return r;
}

std::vector<TriQuadPoint> triangle_gauss(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1,
                                         const Eigen::Vector2d& v2, int n) {
  const QuadRule1D g = gauss_legendre_01(n);
  const Eigen::Vector2d e1 = v1 - v0, e2 = v2 - v0;
  const double det = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  std::vector<TriQuadPoint> pts;
  pts.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double l1 = g.nodes[i];
      const double l2 = g.nodes[j] * (1.0 - l1);
      TriQuadPoint q;
      q.p = v0 + l1 * e1 + l2 * e2;
      q.w = det * (1.0 - l1) * g.weights[i] * g.weights[j];
      q.lambda = Eigen::Vector3d(1.0 - l1 - l2, l1, l2);
      pts.push_back(q);
    }
  }
  return pts;
}

}  // namespace frachardy
