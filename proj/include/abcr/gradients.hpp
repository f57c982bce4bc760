#pragma once

// Analytic derivatives of the sensing statistics and of the throughput
// part of the energy efficiency. Each expression is cross-checked against
// central finite differences in the test suite.

#include <cmath>
#include <stdexcept>

#include "abcr/model.hpp"
#include "abcr/types.hpp"

namespace abcr {

// dPf/d(epsilon); always <= 0.
inline double dpf_deps(const SensingParams& s, double tau) {
  require_tau(tau);
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  double x = s.threshold / s.noise_variance - 1.0;
  return -std::exp(-m * x * x / 2.0) * std::sqrt(m) /
         std::sqrt(2.0 * M_PI * s.noise_variance * s.noise_variance);
}

// dPd/d(epsilon); always <= 0.
inline double dpd_deps(const SensingParams& s, double tau) {
  require_tau(tau);
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  double g = 2.0 * s.snr + 1.0;
  double x = s.threshold / s.noise_variance - s.snr - 1.0;
  return -std::exp(-m * x * x / (2.0 * g)) * std::sqrt(m / g) /
         std::sqrt(2.0 * M_PI * s.noise_variance * s.noise_variance);
}

// dPf/d(tau) at fixed threshold. Diverges as tau -> 1, so the boundary is
// rejected outright.
inline double dpf_dtau(const SensingParams& s, double tau) {
  if (!(tau > 0 && tau <= 1.0 - 1e-6)) throw std::domain_error("dpf_dtau: tau must lie in (0, 1-1e-6]");
  double ns = static_cast<double>(s.num_samples);
  double m = (1.0 - tau) * ns;
  double x = s.threshold / s.noise_variance - 1.0;
  return x * std::sqrt(ns / (8.0 * M_PI * (1.0 - tau))) * std::exp(-m * x * x / 2.0);
}

namespace detail {

struct LogArgCoeffs {
  double y1, y2;  // S3 log argument = y1 + alpha*y2
  double y3, y4;  // S4 log argument = y3 + alpha*y4
};

inline LogArgCoeffs log_arg_coeffs(const NetworkParams& n, const TimeSplit& t) {
  double z0 = n.interference_gain_ratio * n.pu_tx_power + n.noise_to_channel_power;
  double p0 = n.noise_to_channel_power;
  double es_over = n.sensing_power * (1.0 - t.tau) / (t.tau * t.mu);
  return {1.0 - n.circuit_power / z0 - es_over / z0, n.harvested_power / (z0 * t.mu),
          1.0 - n.circuit_power / p0 - es_over / p0, n.harvested_power / (p0 * t.mu)};
}

// d/d(alpha) of the average throughput at fixed sensing outcome, in bits.
inline double throughput_dalpha(const NetworkParams& n, const TimeSplit& t, double pf,
                                double pd) {
  auto y = log_arg_coeffs(n, t);
  double w_term = t.mu * t.tau * n.bandwidth / std::log(2.0);
  return -n.prior_busy * pd * t.tau * n.backscatter_rate +
         w_term * (n.partial_throughput_factor * n.prior_busy * (1.0 - pd) * y.y2 /
                       (y.y1 + t.alpha * y.y2) +
                   n.prior_idle * (1.0 - pf) * y.y4 / (y.y3 + t.alpha * y.y4));
}

}  // namespace detail

// d(EE)/d(alpha) with the energy denominator held at its value at the
// evaluation point, which is how the throughput/backscatter trade-off is
// balanced when the harvesting fraction is optimized. Raw units (bits/J
// per unit alpha).
inline double dee_dalpha(const NetworkParams& n, const SensingParams& s,
                         const TimeSplit& t) {
  validate(t);
  double ad = alpha_dagger(n, t);
  if (!(t.alpha >= ad && t.alpha <= 1.0))
    throw std::domain_error("dee_dalpha: alpha must lie in [alpha_dagger, 1]");
  double pf = prob_false_alarm(s, t.tau);
  double pd = prob_detection(s, t.tau);
  auto b = detail::ee_core(n, t, pf, pd, EeUnit::bits_per_joule);
  return detail::throughput_dalpha(n, t, pf, pd) / b.energy;
}

struct GradientBundle {
  double dpf_deps = 0;
  double dpd_deps = 0;
  double dpf_dtau = 0;
  double dee_dalpha = 0;
};

inline GradientBundle evaluate_gradients(const NetworkParams& n, const SensingParams& s,
                                         const TimeSplit& t) {
  return {dpf_deps(s, t.tau), dpd_deps(s, t.tau), dpf_dtau(s, t.tau),
          dee_dalpha(n, s, t)};
}

// Sufficient condition under which EE is non-decreasing in the threshold,
// so pinning Pd at its target is optimal. Used as a diagnostic.
inline bool threshold_monotonicity_condition(const NetworkParams& n,
                                             const SensingParams& s,
                                             const TimeSplit& t) {
  validate(t);
  auto b = detail::ee_core(n, t, prob_false_alarm(s, t.tau), prob_detection(s, t.tau),
                           EeUnit::bits_per_joule);
  double ptr = b.ptr > 0 ? b.ptr : 0.0;
  double r = b.throughput_abc + b.throughput_htt;
  double e = b.energy;
  double lhs = n.bandwidth * n.partial_throughput_factor *
               std::log2(1.0 + ptr / n.noise_to_channel_power);
  double rhs = (1.0 - t.alpha) * n.backscatter_rate / (e * t.mu) + ptr * r / (e * e);
  return lhs >= rhs;
}

}  // namespace abcr
