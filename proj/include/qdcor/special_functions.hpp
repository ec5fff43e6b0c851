#pragma once

// Scalar special functions used by the distribution layer. All of these are
// plain double precision; inputs outside the stated domains return NaN.

namespace qdcor::sf {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal cdf, accurate in both tails (erfc based).
double normal_cdf(double x);

/// Standard normal quantile (Wichura's PPND16 rational approximation,
/// full double precision). Requires 0 < p < 1.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b), x in [0,1], a,b > 0.
/// Continued-fraction evaluation (modified Lentz).
double regularized_incomplete_beta(double x, double a, double b);

/// Classical (unstandardized) Student-t density with `df` degrees of freedom.
double student_pdf(double t, double df);

/// Classical Student-t cdf via the regularized incomplete beta function.
double student_cdf(double t, double df);

/// Classical Student-t quantile. Requires 0 < p < 1, df > 0.
double student_quantile(double p, double df);

}  // namespace qdcor::sf
