#pragma once

// Gaussian tail Q(x) and its inverse.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace abcr {

inline double gaussian_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Q(x) = P[N(0,1) > x], computed through erfc for full tail accuracy.
inline double q_function(double x) {
  if (!std::isfinite(x)) throw std::domain_error("q_function: non-finite input");
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// accurate to ~1.15e-9 over (0,1).
inline double norm_quantile_estimate(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace detail

// Q^{-1}(p): rational estimate refined by Newton steps against erfc.
inline double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inverse: p must lie in (0,1)");
  // Q(x) = p  <=>  Phi(x) = 1 - p
  double x = -detail::norm_quantile_estimate(p);
  for (int i = 0; i < 2; ++i) {
    double pdf = gaussian_pdf(x);
    if (pdf <= std::numeric_limits<double>::min()) break;
    x += (q_function(x) - p) / pdf;
  }
  return x;
}

}  // namespace abcr
