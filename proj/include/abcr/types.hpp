#pragma once

// Domain types shared across the model, optimizer, oracle and simulator.
//
// Conventions: the frame is normalized to 1 s, so powers (W) double as
// per-frame energies (J) when multiplied by time fractions. Rates are in
// bits/s, SNR is linear, thresholds and noise levels are in watts.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace abcr {

// Energy-detector configuration.
struct SensingParams {
  std::uint32_t num_samples = 2000;  // observations over a full frame
  double snr = 0.1;                  // received PU SNR at the ST, linear
  double noise_variance = 1.0;       // sigma^2, W
  double threshold = 1.0;            // detection threshold epsilon, W
};

// Powers, rates, gains, priors and constraint targets of the network.
struct NetworkParams {
  double prior_idle = 0.75;
  double prior_busy = 0.25;
  double bandwidth = 6e6;                // W, Hz
  double backscatter_rate = 5e4;         // B_b, bits/s
  double partial_throughput_factor = 1;  // kappa in (0,1]
  double sensing_power = 1e-3;           // P_s, W
  double circuit_power = 1e-4;           // P_c, W
  double pu_tx_power = 1.7e4;            // PU transmit power, W
  double interference_gain_ratio = 0.5e-3;  // Z_I (PT->ST gain over g_c)
  double noise_to_channel_power = 1e-2;     // P_0 = N_0/g_c, W
  double harvested_power = 0.25;            // P_R, W
  double target_pd = 0.9;
  double target_pf = 0.1;
};

// Friis link parameters; an auxiliary constructor for harvested_power.
struct FriisParams {
  double harvesting_efficiency = 0.6;  // delta in [0,1]
  double tx_gain = 3.9810717055349722; // 6 dBi, linear
  double rx_gain = 3.9810717055349722;
  double wavelength = 38.677196397066959;  // m
  double distance = 2475.0;                // m
};

// Normalized frame allocation.
struct TimeSplit {
  double tau = 0.5;    // data-transmission fraction, (0,1)
  double alpha = 0.5;  // harvesting fraction of tau when declared busy, [0,1]
  double mu = 1.0;     // transmitting fraction of tau when declared idle, (0,1]
};

enum class EeUnit {
  bits_per_hz_joule,  // throughput normalized by bandwidth before the ratio
  bits_per_joule,
};

// Per-point evaluation of the model. Throughput fields follow the unit
// convention of `ee` (bits for bits_per_joule, bits/Hz otherwise) so that
// ee == (throughput_abc + throughput_htt) / energy holds exactly.
struct EEBreakdown {
  double pf = 0;
  double pd = 0;
  double throughput_abc = 0;
  double throughput_htt = 0;
  double energy = 0;
  double ee = 0;
  bool htt_feasible = false;
  double ptr = 0;  // as computed; negative when alpha < alpha_dagger
};

inline void validate(const SensingParams& s) {
  if (s.num_samples < 1) throw std::invalid_argument("SensingParams: num_samples must be >= 1");
  if (!(s.snr > 0)) throw std::invalid_argument("SensingParams: snr must be > 0");
  if (!(s.noise_variance > 0)) throw std::invalid_argument("SensingParams: noise_variance must be > 0");
  if (!(s.threshold > 0)) throw std::invalid_argument("SensingParams: threshold must be > 0");
}

inline void validate(const NetworkParams& n) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw std::invalid_argument(std::string("NetworkParams: ") + name + " must be > 0");
  };
  auto in01 = [](double v, const char* name) {
    if (!(v > 0 && v < 1)) throw std::invalid_argument(std::string("NetworkParams: ") + name + " must lie in (0,1)");
  };
  in01(n.prior_idle, "prior_idle");
  in01(n.prior_busy, "prior_busy");
  if (std::abs(n.prior_idle + n.prior_busy - 1.0) > 1e-12)
    throw std::invalid_argument("NetworkParams: priors must sum to 1");
  positive(n.bandwidth, "bandwidth");
  if (n.backscatter_rate < 0) throw std::invalid_argument("NetworkParams: backscatter_rate must be >= 0");
  if (!(n.partial_throughput_factor > 0 && n.partial_throughput_factor <= 1))
    throw std::invalid_argument("NetworkParams: partial_throughput_factor must lie in (0,1]");
  positive(n.sensing_power, "sensing_power");
  if (n.circuit_power < 0) throw std::invalid_argument("NetworkParams: circuit_power must be >= 0");
  positive(n.pu_tx_power, "pu_tx_power");
  if (n.interference_gain_ratio < 0)
    throw std::invalid_argument("NetworkParams: interference_gain_ratio must be >= 0");
  positive(n.noise_to_channel_power, "noise_to_channel_power");
  positive(n.harvested_power, "harvested_power");
  in01(n.target_pd, "target_pd");
  in01(n.target_pf, "target_pf");
}

inline void validate(const FriisParams& f) {
  if (!(f.harvesting_efficiency >= 0 && f.harvesting_efficiency <= 1))
    throw std::invalid_argument("FriisParams: harvesting_efficiency must lie in [0,1]");
  if (!(f.tx_gain > 0) || !(f.rx_gain > 0) || !(f.wavelength > 0) || !(f.distance > 0))
    throw std::invalid_argument("FriisParams: gains, wavelength and distance must be > 0");
}

inline void validate(const TimeSplit& t) {
  if (!(t.tau > 0 && t.tau < 1)) throw std::invalid_argument("TimeSplit: tau must lie in (0,1)");
  if (!(t.alpha >= 0 && t.alpha <= 1)) throw std::invalid_argument("TimeSplit: alpha must lie in [0,1]");
  if (!(t.mu > 0 && t.mu <= 1)) throw std::invalid_argument("TimeSplit: mu must lie in (0,1]");
}

}  // namespace abcr
