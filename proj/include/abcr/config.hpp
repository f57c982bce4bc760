#pragma once

// Experiment configuration: JSON ingestion with the default desk-scale
// parameter set filled in for absent fields. Parse failures name the
// offending field.

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcr/model.hpp"
#include "abcr/types.hpp"

namespace abcr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OperatingMode { hybrid, abc_only, htt_only, no_sensing_errors };

inline const char* to_string(OperatingMode m) {
  switch (m) {
    case OperatingMode::hybrid: return "hybrid";
    case OperatingMode::abc_only: return "abc_only";
    case OperatingMode::htt_only: return "htt_only";
    case OperatingMode::no_sensing_errors: return "no_sensing_errors";
  }
  return "?";
}

enum class SweepAxis { tau, alpha, snr_db, num_samples, target_pd, backscatter_rate };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::tau: return "tau";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::num_samples: return "num_samples";
    case SweepAxis::target_pd: return "target_pd";
    case SweepAxis::backscatter_rate: return "backscatter_rate";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> values;
};

struct ExperimentConfig {
  NetworkParams net;
  SensingParams sensing;  // snr converted to linear; threshold is a placeholder
  double snr_db = -10.0;
  std::optional<SweepSpec> sweep;
  std::vector<OperatingMode> mode_set{OperatingMode::hybrid};
  EeUnit unit = EeUnit::bits_per_hz_joule;
  std::string output_path;
  std::optional<TimeSplit> operating_point;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, const char* scope,
                                std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(std::string(scope) + ": unknown field '" + it.key() + "'");
  }
}

inline double get_number(const json& obj, const char* scope, const char* key,
                         double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string(scope) + "." + key + ": expected a number");
  return v.get<double>();
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace detail

inline ExperimentConfig load_config_json(const nlohmann::json& j) {
  using detail::get_number;
  using detail::reject_unknown_keys;
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown_keys(j, "config",
                      {"network", "sensing", "friis", "sweep", "modes", "ee_unit",
                       "output_path", "operating_point"});

  ExperimentConfig cfg;

  if (j.contains("network")) {
    const auto& n = j.at("network");
    if (!n.is_object()) throw ConfigError("network: expected an object");
    reject_unknown_keys(n, "network",
                        {"prior_idle", "prior_busy", "bandwidth_hz",
                         "backscatter_rate_bps", "kappa", "sensing_power_w",
                         "circuit_power_w", "pu_tx_power_w", "interference_gain_ratio",
                         "noise_to_channel_power_w", "harvested_power_w", "target_pd",
                         "target_pf"});
    auto& d = cfg.net;
    d.prior_idle = get_number(n, "network", "prior_idle", d.prior_idle);
    d.prior_busy = get_number(n, "network", "prior_busy", d.prior_busy);
    d.bandwidth = get_number(n, "network", "bandwidth_hz", d.bandwidth);
    d.backscatter_rate = get_number(n, "network", "backscatter_rate_bps", d.backscatter_rate);
    d.partial_throughput_factor = get_number(n, "network", "kappa", d.partial_throughput_factor);
    d.sensing_power = get_number(n, "network", "sensing_power_w", d.sensing_power);
    d.circuit_power = get_number(n, "network", "circuit_power_w", d.circuit_power);
    d.pu_tx_power = get_number(n, "network", "pu_tx_power_w", d.pu_tx_power);
    d.interference_gain_ratio =
        get_number(n, "network", "interference_gain_ratio", d.interference_gain_ratio);
    d.noise_to_channel_power =
        get_number(n, "network", "noise_to_channel_power_w", d.noise_to_channel_power);
    d.harvested_power = get_number(n, "network", "harvested_power_w", d.harvested_power);
    d.target_pd = get_number(n, "network", "target_pd", d.target_pd);
    d.target_pf = get_number(n, "network", "target_pf", d.target_pf);
  }

  if (j.contains("sensing")) {
    const auto& s = j.at("sensing");
    if (!s.is_object()) throw ConfigError("sensing: expected an object");
    reject_unknown_keys(s, "sensing", {"num_samples", "snr_db", "noise_variance_w"});
    double ns = get_number(s, "sensing", "num_samples",
                           static_cast<double>(cfg.sensing.num_samples));
    if (!(ns >= 1) || ns != std::floor(ns))
      throw ConfigError("sensing.num_samples: expected a positive integer");
    cfg.sensing.num_samples = static_cast<std::uint32_t>(ns);
    cfg.snr_db = get_number(s, "sensing", "snr_db", cfg.snr_db);
    cfg.sensing.noise_variance =
        get_number(s, "sensing", "noise_variance_w", cfg.sensing.noise_variance);
  }
  cfg.sensing.snr = detail::db_to_linear(cfg.snr_db);
  cfg.sensing.threshold = cfg.sensing.noise_variance;

  if (j.contains("friis")) {
    const auto& f = j.at("friis");
    if (!f.is_object()) throw ConfigError("friis: expected an object");
    reject_unknown_keys(f, "friis",
                        {"harvesting_efficiency", "tx_gain_dbi", "rx_gain_dbi",
                         "wavelength_m", "distance_m"});
    if (j.contains("network") && j.at("network").contains("harvested_power_w"))
      throw ConfigError("friis: mutually exclusive with network.harvested_power_w");
    FriisParams fp;
    fp.harvesting_efficiency =
        get_number(f, "friis", "harvesting_efficiency", fp.harvesting_efficiency);
    fp.tx_gain = detail::db_to_linear(get_number(f, "friis", "tx_gain_dbi", 6.0));
    fp.rx_gain = detail::db_to_linear(get_number(f, "friis", "rx_gain_dbi", 6.0));
    fp.wavelength = get_number(f, "friis", "wavelength_m", fp.wavelength);
    fp.distance = get_number(f, "friis", "distance_m", fp.distance);
    validate(fp);
    cfg.net.harvested_power = friis_harvested_power(fp, cfg.net.pu_tx_power);
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("sweep: expected an object");
    reject_unknown_keys(s, "sweep", {"axis", "values"});
    if (!s.contains("axis") || !s.at("axis").is_string())
      throw ConfigError("sweep.axis: expected a string");
    SweepSpec spec;
    std::string ax = s.at("axis").get<std::string>();
    if (ax == "tau") spec.axis = SweepAxis::tau;
    else if (ax == "alpha") spec.axis = SweepAxis::alpha;
    else if (ax == "snr_db") spec.axis = SweepAxis::snr_db;
    else if (ax == "num_samples") spec.axis = SweepAxis::num_samples;
    else if (ax == "target_pd") spec.axis = SweepAxis::target_pd;
    else if (ax == "backscatter_rate") spec.axis = SweepAxis::backscatter_rate;
    else throw ConfigError("sweep.axis: unknown axis '" + ax + "'");
    if (!s.contains("values") || !s.at("values").is_array() || s.at("values").empty())
      throw ConfigError("sweep.values: expected a non-empty array");
    for (const auto& v : s.at("values")) {
      if (!v.is_number()) throw ConfigError("sweep.values: expected numbers");
      spec.values.push_back(v.get<double>());
    }
    for (std::size_t i = 1; i < spec.values.size(); ++i)
      if (!(spec.values[i] > spec.values[i - 1]))
        throw ConfigError("sweep.values: must be strictly increasing");
    cfg.sweep = spec;
  }

  if (j.contains("modes")) {
    const auto& m = j.at("modes");
    if (!m.is_array() || m.empty()) throw ConfigError("modes: expected a non-empty array");
    cfg.mode_set.clear();
    for (const auto& v : m) {
      if (!v.is_string()) throw ConfigError("modes: expected strings");
      std::string name = v.get<std::string>();
      if (name == "hybrid") cfg.mode_set.push_back(OperatingMode::hybrid);
      else if (name == "abc_only") cfg.mode_set.push_back(OperatingMode::abc_only);
      else if (name == "htt_only") cfg.mode_set.push_back(OperatingMode::htt_only);
      else if (name == "no_sensing_errors")
        cfg.mode_set.push_back(OperatingMode::no_sensing_errors);
      else throw ConfigError("modes: unknown mode '" + name + "'");
    }
  }

  if (j.contains("ee_unit")) {
    if (!j.at("ee_unit").is_string()) throw ConfigError("ee_unit: expected a string");
    std::string u = j.at("ee_unit").get<std::string>();
    if (u == "bits_per_hz_joule") cfg.unit = EeUnit::bits_per_hz_joule;
    else if (u == "bits_per_joule") cfg.unit = EeUnit::bits_per_joule;
    else throw ConfigError("ee_unit: expected 'bits_per_hz_joule' or 'bits_per_joule'");
  }

  if (j.contains("output_path")) {
    if (!j.at("output_path").is_string()) throw ConfigError("output_path: expected a string");
    cfg.output_path = j.at("output_path").get<std::string>();
  }

  if (j.contains("operating_point")) {
    const auto& p = j.at("operating_point");
    if (!p.is_object()) throw ConfigError("operating_point: expected an object");
    reject_unknown_keys(p, "operating_point", {"tau", "alpha", "mu"});
    TimeSplit t;
    t.tau = get_number(p, "operating_point", "tau", t.tau);
    t.alpha = get_number(p, "operating_point", "alpha", t.alpha);
    t.mu = get_number(p, "operating_point", "mu", t.mu);
    try {
      validate(t);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("operating_point: ") + e.what());
    }
    cfg.operating_point = t;
  }

  try {
    validate(cfg.net);
    validate(cfg.sensing);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return load_config_json(j);
}

}  // namespace abcr
