#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frachardy/errors.hpp"
#include "frachardy/inequality.hpp"
#include "frachardy/mesh.hpp"
#include "frachardy/spectral.hpp"

using namespace frachardy;

namespace {

Domain unit_square() {
  return Domain::convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

}  // namespace

TEST_CASE("barrier: branch agreement at t = 1 and domain errors") {
  const BarrierParams bp{0.7, 0.8};
  CHECK(barrier_chi(bp, 1.0) == doctest::Approx(1.0));
  CHECK(barrier_chi(bp, 1.0 - 1e-12) == doctest::Approx(barrier_chi(bp, 1.0 + 1e-12)).epsilon(1e-9));
  CHECK_THROWS_AS(barrier_chi(bp, 0.0), Error);
  CHECK_THROWS_AS(barrier_chi(bp, -1.0), Error);
  const BarrierParams bad_alpha{1.2, 0.8};
  CHECK_THROWS_AS(bad_alpha.validate(), Error);  // alpha >= 1 rejected
  const BarrierParams bad_s{0.7, 0.4};
  CHECK_THROWS_AS(bad_s.validate(), Error);
  const BarrierParams g{0.6, 0.75};
  CHECK(g.gamma() == doctest::Approx(8.0 * 0.6 * 0.25 / (0.5 * 1.5)).epsilon(1e-14));
}

TEST_CASE("barrier derivative matches central differences at 50 log-spaced points") {
  for (const BarrierParams bp : {BarrierParams{0.6, 0.75}, BarrierParams{0.9, 0.6}}) {
    for (int k = 0; k < 50; ++k) {
      const double t = std::pow(10.0, -3.0 + 4.0 * k / 49.0);  // (1e-3, 10)
      if (std::abs(t - 1.0) < 1e-3) continue;                  // branch point excluded
      const double step = 1e-6 * t;
      const double fd =
          (barrier_chi(bp, t + step) - barrier_chi(bp, t - step)) / (2.0 * step);
      CHECK(barrier_chi_prime(bp, t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("barrier second derivative matches differences of the first") {
  const BarrierParams bp{0.75, 0.7};
  for (double t : {0.02, 0.2, 0.7, 0.95, 1.5, 4.0}) {
    const double step = 1e-6 * t;
    const double fd =
        (barrier_chi_prime(bp, t + step) - barrier_chi_prime(bp, t - step)) / (2.0 * step);
    CHECK(barrier_chi_double_prime(bp, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("barrier is strictly increasing left of 1 and matches the one-sided forms") {
  const BarrierParams bp{0.8, 0.85};
  for (double t : {1e-3, 0.1, 0.5, 0.9, 1.0}) CHECK(barrier_chi_prime(bp, t) > 0.0);
  // left limit of chi' at t = 1 is (2s-1)/2 + alpha; the right value (2s-1)/2
  CHECK(barrier_chi_prime(bp, 1.0) ==
        doctest::Approx(0.5 * (2 * bp.s - 1.0) + bp.alpha).epsilon(1e-12));
  CHECK(barrier_chi_prime(bp, 1.0 + 1e-15) ==
        doctest::Approx(0.5 * (2 * bp.s - 1.0)).epsilon(1e-12));
  // chi'' left value carries the gamma coefficient when factored like the
  // operator expansion: -chi''/2 = c (L^2 + gamma L) L^{-alpha-2} - ...
  const double lead = 0.25 * (2 * bp.s - 1.0) * (3.0 - 2 * bp.s);
  const double expect_left =
      -lead - 2.0 * bp.alpha * (1.0 - bp.s) + bp.alpha * (bp.alpha + 1.0);
  CHECK(barrier_chi_double_prime(bp, 1.0) == doctest::Approx(expect_left).epsilon(1e-12));
  const double factored =
      -lead * (1.0 + bp.gamma()) + bp.alpha * (bp.alpha + 1.0);  // at L = 1
  CHECK(expect_left == doctest::Approx(factored).epsilon(1e-12));
}

TEST_CASE("algebraic inequality margin: anchors and fuzz") {
  CHECK(algebraic_inequality_margin(1.0, 1.0, 2.0) == doctest::Approx(1.0));
  for (double a : {1.0, 3.7, 100.0}) {
    const double b = a * 0.6;
    CHECK(algebraic_inequality_margin(a, b, 1.0 + 1e-9) ==
          doctest::Approx(0.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(algebraic_inequality_margin(1.0, 2.0, 1.5), Error);  // a < b
  CHECK_THROWS_AS(algebraic_inequality_margin(1.0, 0.5, 2.5), Error);  // theta > 2
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    const double b = 1e-6 + 100.0 * unit(rng);
    const double a = b * (1.0 + 10.0 * unit(rng));
    const double theta = 1.0 + unit(rng);
    const double m = algebraic_inequality_margin(a, b, theta);
    CHECK(m >= -1e-12 * std::pow(a + b, theta));
  }
}

TEST_CASE("distance energy: exact dilation covariance") {
  const FracParams p{2, 0.75, 0.0};
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const Point x(0.4, 0.1);
  const double K1 = delta_increment_energy(disk, x, p);
  const double r = 3.1;
  const double K2 = delta_increment_energy(disk.dilated(r), r * x, p);
  CHECK(K2 == doctest::Approx(std::pow(r, 2.0 - 2 * p.s) * K1).epsilon(1e-6));

  const FracParams p1{1, 0.8, 0.0};
  const Domain iv = Domain::interval(0, 1);
  const double J1 = delta_increment_energy(iv, {0.3, 0}, p1);
  const double J2 = delta_increment_energy(iv.dilated(r), {r * 0.3, 0}, p1);
  CHECK(J2 == doctest::Approx(std::pow(r, 2.0 - 2 * p1.s) * J1).epsilon(1e-9));
}

TEST_CASE("distance energy: boundary ratio band on the disk radius sequence") {
  // regression band frozen from the first computation (unit disk, s = 0.75):
  // ratios 10.94 .. 47.92 for delta = 2^-k, k = 3..8. The energy itself
  // decreases monotonically toward a positive constant (the inward-ray and
  // far-field contributions do not vanish with delta).
  const FracParams p{2, 0.75, 0.0};
  const Domain disk = Domain::disk({0, 0}, 1.0);
  double prev_K = 1e300;
  for (int k = 3; k <= 8; ++k) {
    const double delta = std::pow(2.0, -k);
    const Point x(1.0 - delta, 0.0);
    const double K = delta_increment_energy(disk, x, p);
    const double ratio = K / std::pow(delta, 2.0 - 2 * p.s);
    CHECK(ratio > 10.0);
    CHECK(ratio < 50.0);
    CHECK(K < prev_K);
    CHECK(K > 2.8);
    prev_K = K;
  }
}

TEST_CASE("distance energy grows with s like the boundary-layer model") {
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const Point x(0.9, 0.0);
  double prev = 0.0;
  for (double s : {0.9, 0.95, 0.975}) {
    const double K = delta_increment_energy(disk, x, {2, s, 0.0});
    CHECK(K > prev);  // the model coefficient 1/(2-2s) increases
    prev = K;
  }
}

TEST_CASE("reach lower estimate margin") {
  const FracParams p{2, 0.75, 0.0};
  const auto q = DirectionalQuadrature::circle_trapezoid(400);
  const Domain disk = Domain::disk({0, 0}, 1.0);
  // at the center the margin is R^{-2s}(1 - 2^{-2s}) > 0 exactly
  const double m0 = d_lower_estimate_margin(disk, {0, 0}, p, q);
  CHECK(m0 == doctest::Approx(1.0 - std::pow(2.0, -1.5)).epsilon(1e-10));
  const Domain sq = unit_square();
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      CHECK(d_lower_estimate_margin(sq, {i / 6.0, j / 6.0}, p, q) >= -1e-8);
  // scaling leaves the sign untouched (both sides scale by r^{-2s})
  const double m1 = d_lower_estimate_margin(sq, {0.3, 0.4}, p, q);
  const double m2 = d_lower_estimate_margin(sq.dilated(2.0), {0.6, 0.8}, p, q);
  CHECK(m2 == doctest::Approx(std::pow(2.0, -1.5) * m1).epsilon(1e-10));
}

TEST_CASE("mean-distance chain inequality from the algebraic power bound") {
  const FracParams p{2, 0.8, 0.0};
  const auto q = DirectionalQuadrature::circle_trapezoid(400);
  const Domain sq = unit_square();
  const double cm = cos_moment(p);
  for (const Point x : {Point(0.5, 0.5), Point(0.2, 0.7), Point(0.85, 0.15)}) {
    const MeanDistances md = mean_distances(sq, x, p, q);
    double reach_int = 0.0;
    for (size_t k = 0; k < q.nodes.size(); ++k) {
      const RayTrace rt = sq.ray_trace(x, {q.nodes[k].x(), q.nodes[k].y()});
      reach_int += q.weights[k] * std::pow(rt.max_reach, -2.0 * p.s);
    }
    const double lhs = std::pow(md.reach_corrected, -2.0 * p.s);
    const double rhs = std::pow(md.plain, -2.0 * p.s) + 2.0 * p.s / cm * reach_int;
    CHECK(lhs >= rhs - 1e-8 * std::abs(lhs));
  }
}

TEST_CASE("geometric Hardy residual: nonnegative for a centered hat and random vectors") {
  const Domain sq = unit_square();
  const Mesh mesh = mesh_domain_2d(sq, 0.25);
  const FracParams p{2, 0.75, 0.0};
  const AssembledProblem prob = assemble_problem(mesh, sq, p);
  const auto q = DirectionalQuadrature::circle_trapezoid(200);

  Eigen::VectorXd hat = Eigen::VectorXd::Zero(mesh.nodes.size());
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    if ((mesh.nodes[i] - Point(0.5, 0.5)).norm() < 1e-12) hat[i] = 1.0;
  const double e_hat = hat.dot(prob.A * hat);
  CHECK(e_hat > 0.0);
  CHECK(geom_hardy_residual(sq, mesh, prob, hat, q) >= -1e-6 * e_hat);
  // convex specialization: delta replaces the mean distance, |Omega| the
  // visibility volume
  CHECK(geom_hardy_residual(sq, mesh, prob, hat, q, /*convex_specialization=*/true) >=
        -1e-6 * e_hat);

  GeomHardyVerifier verifier(sq, mesh, p, q);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.nodes.size());
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
      if (!mesh.boundary_node[i]) u[i] = gauss(rng);
    CHECK(verifier.residual(prob, u) >= -1e-6 * u.dot(prob.A * u));
  }
}
