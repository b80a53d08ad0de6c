#include "frachardy/constants.hpp"

#include <cmath>

#include "frachardy/errors.hpp"

namespace frachardy {

void FracParams::validate() const {
  if (dim < 1) throw Error(ERR_INVALID_PARAMS, "dimension must be >= 1");
  if (!(s >= 0.5) || !(s < 1.0))
    throw Error(ERR_INVALID_PARAMS, "exponent s must lie in [1/2, 1)");
  if (!std::isfinite(lambda)) throw Error(ERR_INVALID_PARAMS, "lambda must be finite");
}

double gamma_fn(double x) {
  // Lanczos, g = 7, 9 coefficients.
  static const double coef[9] = {
      0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  if (!(x > 0.0)) throw Error(ERR_INVALID_PARAMS, "gamma_fn requires a positive argument");
  if (x < 0.5) {
    // reflection keeps full accuracy near the origin
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = coef[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double sphere_measure(int dim) {
  if (dim < 1) throw Error(ERR_INVALID_PARAMS, "sphere_measure: dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * dim) / gamma_fn(0.5 * dim);
}

double c_ns(const FracParams& p) {
  p.validate();
  return std::pow(2.0, 2.0 * p.s) * std::pow(M_PI, -0.5 * p.dim) * p.s *
         gamma_fn(0.5 * (p.dim + 2.0 * p.s)) / gamma_fn(1.0 - p.s);
}

double kappa_ns(const FracParams& p) {
  p.validate();
  if (p.s == 0.5) return 0.0;  // the bracket vanishes; pin the limit value
  const double bracket = std::pow(2.0, 1.0 - 2.0 * p.s) / std::sqrt(M_PI) *
                             gamma_fn(1.0 - p.s) * gamma_fn(0.5 + p.s) -
                         1.0;
  return std::pow(M_PI, 0.5 * (p.dim - 1)) * gamma_fn(0.5 + p.s) /
         gamma_fn(0.5 * (p.dim + 2.0 * p.s)) / (2.0 * p.s) * bracket;
}

double h_ns(const FracParams& p) { return c_ns(p) * kappa_ns(p); }

double a_ns(const FracParams& p) {
  const double h = h_ns(p);
  const double ratio = std::sqrt(M_PI) * gamma_fn(0.5 * (p.dim + 2.0 * p.s)) /
                       (gamma_fn(0.5 * p.dim) * gamma_fn(0.5 + p.s));
  const double iso = std::pow(p.dim / sphere_measure(p.dim), -2.0 * p.s / p.dim);
  return h * p.s * std::pow(2.0, 1.0 - 2.0 * p.s) * ratio * iso;
}

double cos_moment(const FracParams& p) {
  p.validate();
  return gamma_fn(0.5 * p.dim) * gamma_fn(0.5 + p.s) /
         (std::sqrt(M_PI) * gamma_fn(0.5 * (p.dim + 2.0 * p.s)));
}

double flat_kernel_constant(const FracParams& p) {
  p.validate();
  return std::pow(M_PI, 0.5 * (p.dim - 1)) * gamma_fn(0.5 + p.s) /
         gamma_fn(0.5 * (p.dim + 2.0 * p.s));
}

}  // namespace frachardy
