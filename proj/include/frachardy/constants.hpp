#pragma once

namespace frachardy {

//! Problem parameters: dimension N, fractional exponent s, optional spectral shift lambda.
//!
//! s = 1/2 is admitted here only; the closed-form constants below degenerate to 0 there.
//! Mesh assembly and eigenvalue routines require s strictly above 1/2.
struct FracParams {
  int dim = 1;
  double s = 0.75;
  double lambda = 0.0;

  void validate() const;  // throws Error(ERR_INVALID_PARAMS) unless N >= 1 and 1/2 <= s < 1
};

//! Gamma function on the positive axis (Lanczos approximation, relative error
//! below 1e-12 on (0, 30); an independent Stirling-series oracle lives in the tests).
double gamma_fn(double x);

//! Surface measure |S^{N-1}| of the unit sphere in R^N.
double sphere_measure(int dim);

//! Normalization constant of the regional fractional Laplacian:
//! c_{N,s} = 2^{2s} pi^{-N/2} s Gamma((N+2s)/2) / Gamma(1-s).
double c_ns(const FracParams& p);

//! Loss-Sloane constant kappa_{N,2s}; zero at s = 1/2, positive on (1/2, 1).
double kappa_ns(const FracParams& p);

//! Sharp half-space Hardy constant h_{N,s} = c_ns * kappa_ns. Tends to 1/4 as s -> 1.
double h_ns(const FracParams& p);

//! Convex-domain shift constant: lambda*(s, Omega) >= a_ns * |Omega|^{-2s/N}.
double a_ns(const FracParams& p);

//! Normalized directional cosine moment: int_{S^{N-1}} |cos(e,nu)|^{2s} domega(nu),
//! independent of e. Closed Gamma-ratio form.
double cos_moment(const FracParams& p);

//! Total mass of the flat-boundary kernel slice: int_{R^{N-1}} (|Z|^2+1)^{-(N+2s)/2} dZ.
//! Equals 1 for N = 1. Used by the boundary-layer asymptotics of the distance energy.
double flat_kernel_constant(const FracParams& p);

}  // namespace frachardy
