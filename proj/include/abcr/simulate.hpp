#pragma once

// Frame-level Monte Carlo realization of the sensing/transmission model.
// Each frame draws the PU state and an energy-detector statistic, lands in
// one of the four scenarios and accrues that scenario's deterministic
// throughput and energy. Every frame uses its own counter-derived
// substream, so results are independent of evaluation order.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "abcr/model.hpp"
#include "abcr/types.hpp"

namespace abcr {

enum class DetectorModel {
  gaussian_approx,   // statistic drawn from the moments behind the closed forms
  exact_chi_square,  // scaled chi-square over the actual sensing samples
};

struct SimConfig {
  std::uint64_t num_frames = 1'000'000;
  std::uint64_t seed = 1;
  DetectorModel detector_model = DetectorModel::gaussian_approx;
};

struct SimResult {
  double empirical_pf = 0;
  double empirical_pd = 0;
  double mean_throughput = 0;  // bits per frame
  double mean_energy = 0;      // joules per frame
  double empirical_ee = 0;     // bits per joule
  double se_pf = 0;
  double se_pd = 0;
  double se_throughput = 0;
  double se_energy = 0;
  double se_ee = 0;
  std::array<std::uint64_t, 4> scenario_counts{};  // S1..S4
};

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-frame substream keyed on (seed, counter); block-parallel evaluation
// reproduces the serial stream exactly.
class FrameStream {
 public:
  FrameStream(std::uint64_t seed, std::uint64_t frame) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = frame ^ 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(s);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  double uniform01() {  // (0, 1]
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Marsaglia-Tsang; requires shape >= 1.
  double gamma(double shape) {
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0) continue;
      v = v * v * v;
      double u = uniform01();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace rng

enum class Hypothesis { idle, busy };

// Moments of the test statistic under the Gaussian approximation; these
// are exactly the moments that make the closed-form Pf/Pd hold.
inline std::pair<double, double> detector_statistic_moments(const SensingParams& s,
                                                            double tau,
                                                            Hypothesis h) {
  require_tau(tau);
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  double s2 = s.noise_variance;
  if (h == Hypothesis::idle) return {s2, s2 * s2 / m};
  return {s2 * (1.0 + s.snr), s2 * s2 * (2.0 * s.snr + 1.0) / m};
}

inline SimResult simulate(const NetworkParams& n, const SensingParams& s,
                          const TimeSplit& t, const SimConfig& c) {
  validate(n);
  validate(s);
  validate(t);
  if (c.num_frames < 1) throw std::invalid_argument("SimConfig: num_frames must be >= 1");
  if (c.num_frames > (1ULL << 40)) throw std::length_error("SimConfig: num_frames too large");

  auto [m0, v0] = detector_statistic_moments(s, t.tau, Hypothesis::idle);
  auto [m1, v1] = detector_statistic_moments(s, t.tau, Hypothesis::busy);
  double sd0 = std::sqrt(v0), sd1 = std::sqrt(v1);

  // chi-square model: complex-envelope energies, (1-tau)*Ns samples
  double samples = std::max(1.0, std::round((1.0 - t.tau) * s.num_samples));

  std::array<std::uint64_t, 4> counts{};
  for (std::uint64_t i = 0; i < c.num_frames; ++i) {
    rng::FrameStream fs(c.seed, i);
    bool busy = fs.uniform01() <= n.prior_busy;
    double stat;
    if (c.detector_model == DetectorModel::gaussian_approx) {
      stat = busy ? m1 + sd1 * fs.normal() : m0 + sd0 * fs.normal();
    } else {
      double scale = s.noise_variance * (busy ? 1.0 + s.snr : 1.0);
      stat = scale * fs.gamma(samples) / samples;
    }
    bool declared_busy = stat > s.threshold;
    int scenario = busy ? (declared_busy ? 0 : 2) : (declared_busy ? 1 : 3);
    ++counts[static_cast<std::size_t>(scenario)];
  }

  // Per-frame throughput/energy are deterministic given the scenario, so
  // the averages come exactly from the counts.
  auto rows = detail::scenario_table_core(n, t, 0.0, 0.0);  // probs unused here
  double nf = static_cast<double>(c.num_frames);
  double sum_r = 0, sum_e = 0, sum_r2 = 0, sum_e2 = 0, sum_re = 0;
  for (int k = 0; k < 4; ++k) {
    double w = static_cast<double>(counts[static_cast<std::size_t>(k)]);
    double r = rows[static_cast<std::size_t>(k)].throughput;
    double e = rows[static_cast<std::size_t>(k)].energy;
    sum_r += w * r;
    sum_e += w * e;
    sum_r2 += w * r * r;
    sum_e2 += w * e * e;
    sum_re += w * r * e;
  }

  SimResult out;
  out.scenario_counts = counts;
  double n_idle = static_cast<double>(counts[1] + counts[3]);
  double n_busy = static_cast<double>(counts[0] + counts[2]);
  out.empirical_pf = n_idle > 0 ? static_cast<double>(counts[1]) / n_idle : 0.0;
  out.empirical_pd = n_busy > 0 ? static_cast<double>(counts[0]) / n_busy : 0.0;
  out.se_pf = n_idle > 0 ? std::sqrt(out.empirical_pf * (1 - out.empirical_pf) / n_idle) : 0.0;
  out.se_pd = n_busy > 0 ? std::sqrt(out.empirical_pd * (1 - out.empirical_pd) / n_busy) : 0.0;

  out.mean_throughput = sum_r / nf;
  out.mean_energy = sum_e / nf;
  out.empirical_ee = out.mean_throughput / out.mean_energy;
  double var_r = sum_r2 / nf - out.mean_throughput * out.mean_throughput;
  double var_e = sum_e2 / nf - out.mean_energy * out.mean_energy;
  double cov_re = sum_re / nf - out.mean_throughput * out.mean_energy;
  out.se_throughput = std::sqrt(std::max(0.0, var_r) / nf);
  out.se_energy = std::sqrt(std::max(0.0, var_e) / nf);
  // delta method for the ratio of means
  double ee = out.empirical_ee;
  double var_ee = (var_r - 2.0 * ee * cov_re + ee * ee * var_e) /
                  (out.mean_energy * out.mean_energy);
  out.se_ee = std::sqrt(std::max(0.0, var_ee) / nf);
  return out;
}

}  // namespace abcr
