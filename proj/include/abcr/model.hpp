#pragma once

// Sensing statistics, per-scenario throughput/energy accounting and the
// energy-efficiency objective.
//
// The four sensing-outcome x PU-state scenarios:
//   S1  busy,  declared busy   -- backscatter for (1-alpha)*tau
//   S2  idle,  declared busy   -- missed opportunity, no throughput
//   S3  busy,  declared idle   -- HTT transmission under PU interference
//   S4  idle,  declared idle   -- HTT transmission on the clean channel
// HTT throughput and transmit energy exist only when the harvested energy
// covers sensing + circuit costs (alpha >= alpha_dagger).

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "abcr/qfunc.hpp"
#include "abcr/types.hpp"

namespace abcr {

inline void require_tau(double tau) {
  if (!(tau > 0 && tau < 1)) throw std::domain_error("tau must lie in (0,1)");
}

// P[declare busy | idle] for an energy detector with (1-tau)*Ns samples.
inline double prob_false_alarm(const SensingParams& s, double tau) {
  require_tau(tau);
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  return q_function((s.threshold / s.noise_variance - 1.0) * std::sqrt(m));
}

// P[declare busy | busy].
inline double prob_detection(const SensingParams& s, double tau) {
  require_tau(tau);
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  return q_function((s.threshold / s.noise_variance - s.snr - 1.0) *
                    std::sqrt(m / (2.0 * s.snr + 1.0)));
}

inline double friis_harvested_power(const FriisParams& f, double pu_tx_power) {
  if (!(f.distance > 0)) throw std::domain_error("friis_harvested_power: distance must be > 0");
  double denom = 4.0 * M_PI * f.distance;
  return f.harvesting_efficiency * pu_tx_power * f.tx_gain * f.rx_gain *
         f.wavelength * f.wavelength / (denom * denom);
}

// Minimum harvesting fraction of tau for the HTT budget to close.
// May exceed 1, in which case HTT is infeasible at this split.
inline double alpha_dagger(const NetworkParams& n, const TimeSplit& t) {
  double e_c = t.mu * t.tau * n.circuit_power;
  double e_s = n.sensing_power * (1.0 - t.tau);
  return (e_c + e_s) / (t.tau * n.harvested_power);
}

// Transmit power funded by harvested energy net of sensing and circuit
// costs. Negative exactly when alpha < alpha_dagger.
inline double transmit_power(const NetworkParams& n, const TimeSplit& t) {
  return (t.alpha * t.tau * n.harvested_power - n.sensing_power * (1.0 - t.tau) -
          t.mu * t.tau * n.circuit_power) /
         (t.mu * t.tau);
}

struct ScenarioRow {
  double probability = 0;
  double throughput = 0;  // bits
  double energy = 0;      // J
};

namespace detail {

// Scenario accounting for externally supplied (pf, pd). Does not validate
// tau so the perfect-sensing / dropped-sensing paths can evaluate tau = 1.
inline std::array<ScenarioRow, 4> scenario_table_core(const NetworkParams& n,
                                                      const TimeSplit& t,
                                                      double pf, double pd) {
  std::array<ScenarioRow, 4> rows{};
  double es = n.sensing_power * (1.0 - t.tau);
  double ad = alpha_dagger(n, t);
  double ptr = transmit_power(n, t);
  bool feasible = t.alpha >= ad;

  rows[0] = {n.prior_busy * pd, (1.0 - t.alpha) * t.tau * n.backscatter_rate, es};
  rows[1] = {n.prior_idle * pf, 0.0, es};

  double r3 = 0, r4 = 0, etx = 0;
  if (feasible) {
    double z0 = n.interference_gain_ratio * n.pu_tx_power + n.noise_to_channel_power;
    r3 = n.partial_throughput_factor * t.mu * t.tau * n.bandwidth *
         std::log2(1.0 + ptr / z0);
    r4 = t.mu * t.tau * n.bandwidth * std::log2(1.0 + ptr / n.noise_to_channel_power);
    etx = ptr * t.mu * t.tau;
  }
  rows[2] = {n.prior_busy * (1.0 - pd), r3, es + etx};
  rows[3] = {n.prior_idle * (1.0 - pf), r4, es + etx};
  return rows;
}

inline EEBreakdown ee_core(const NetworkParams& n, const TimeSplit& t, double pf,
                           double pd, EeUnit unit) {
  auto rows = scenario_table_core(n, t, pf, pd);
  EEBreakdown out;
  out.pf = pf;
  out.pd = pd;
  out.ptr = transmit_power(n, t);
  out.htt_feasible = t.alpha >= alpha_dagger(n, t);

  double r_abc = rows[0].probability * rows[0].throughput;
  double r_htt = rows[2].probability * rows[2].throughput +
                 rows[3].probability * rows[3].throughput;
  double energy = 0;
  for (const auto& r : rows) energy += r.probability * r.energy;

  if (unit == EeUnit::bits_per_hz_joule) {
    r_abc /= n.bandwidth;
    r_htt /= n.bandwidth;
  }
  out.throughput_abc = r_abc;
  out.throughput_htt = r_htt;
  out.energy = energy;
  out.ee = (r_abc + r_htt) / energy;
  return out;
}

}  // namespace detail

inline std::array<ScenarioRow, 4> scenario_table(const NetworkParams& n,
                                                 const SensingParams& s,
                                                 const TimeSplit& t) {
  return detail::scenario_table_core(n, t, prob_false_alarm(s, t.tau),
                                     prob_detection(s, t.tau));
}

// Probability-weighted throughput, split into the backscatter and HTT
// contributions, in bits.
inline std::pair<double, double> avg_throughput(const NetworkParams& n,
                                                const SensingParams& s,
                                                const TimeSplit& t) {
  auto b = detail::ee_core(n, t, prob_false_alarm(s, t.tau), prob_detection(s, t.tau),
                           EeUnit::bits_per_joule);
  return {b.throughput_abc, b.throughput_htt};
}

// Probability-weighted energy consumption, in joules.
inline double avg_energy(const NetworkParams& n, const SensingParams& s,
                         const TimeSplit& t) {
  auto b = detail::ee_core(n, t, prob_false_alarm(s, t.tau), prob_detection(s, t.tau),
                           EeUnit::bits_per_joule);
  return b.energy;
}

// Evaluation at externally supplied sensing probabilities; used by the
// perfect-sensing baseline and by expected-value cross-checks.
inline EEBreakdown ee_from_probs(const NetworkParams& n, const TimeSplit& t,
                                 double pf, double pd,
                                 EeUnit unit = EeUnit::bits_per_hz_joule) {
  validate(t);
  if (!(pf >= 0 && pf <= 1 && pd >= 0 && pd <= 1))
    throw std::domain_error("ee_from_probs: probabilities must lie in [0,1]");
  return detail::ee_core(n, t, pf, pd, unit);
}

inline EEBreakdown energy_efficiency(const NetworkParams& n, const SensingParams& s,
                                     const TimeSplit& t,
                                     EeUnit unit = EeUnit::bits_per_hz_joule) {
  validate(t);
  return detail::ee_core(n, t, prob_false_alarm(s, t.tau), prob_detection(s, t.tau),
                         unit);
}

}  // namespace abcr
