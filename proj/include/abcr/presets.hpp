#pragma once

// Experiment presets: each emits one CSV sweep. fig2/fig4 are surface
// slices of the objective, fig3 is the constrained operating curve the
// tau-search sees, and fig5-fig9 sweep the full optimizer. Points where
// the sensing constraints cannot be met are written as nan.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "abcr/config.hpp"
#include "abcr/model.hpp"
#include "abcr/optimize.hpp"
#include "abcr/types.hpp"

namespace abcr {

// Perfect-PU-knowledge evaluation: the slot structure and the sensing
// energy are retained, only the error events vanish.
inline EEBreakdown no_sensing_errors_baseline(const NetworkParams& n, const TimeSplit& t,
                                              EeUnit unit = EeUnit::bits_per_hz_joule) {
  return ee_from_probs(n, t, 0.0, 1.0, unit);
}

enum class Preset { fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9 };

inline std::optional<Preset> parse_preset(const std::string& name) {
  if (name == "fig2") return Preset::fig2;
  if (name == "fig3") return Preset::fig3;
  if (name == "fig4") return Preset::fig4;
  if (name == "fig5") return Preset::fig5;
  if (name == "fig6") return Preset::fig6;
  if (name == "fig7") return Preset::fig7;
  if (name == "fig8") return Preset::fig8;
  if (name == "fig9") return Preset::fig9;
  return std::nullopt;
}

inline const char* to_string(Preset p) {
  switch (p) {
    case Preset::fig2: return "fig2";
    case Preset::fig3: return "fig3";
    case Preset::fig4: return "fig4";
    case Preset::fig5: return "fig5";
    case Preset::fig6: return "fig6";
    case Preset::fig7: return "fig7";
    case Preset::fig8: return "fig8";
    case Preset::fig9: return "fig9";
  }
  return "?";
}

struct PresetOptions {
  std::uint64_t seed = 1;
  bool drop_sensing = false;  // baseline sensitivity: no sensing time or energy
};

struct ModeOptimum {
  bool feasible = false;
  double tau = 0;
  double alpha = 0;
  double ee = std::numeric_limits<double>::quiet_NaN();
  double throughput = std::numeric_limits<double>::quiet_NaN();  // bits
  double energy = std::numeric_limits<double>::quiet_NaN();      // J
};

namespace detail {

// Optimum under perfect sensing. With drop_sensing the sensing slot is
// removed entirely (tau = 1, no sensing energy); pure backscatter then
// consumes no energy at all and its efficiency is unbounded.
inline ModeOptimum perfect_optimum(const NetworkParams& n, EeUnit unit,
                                   bool drop_sensing) {
  auto eval = [&](double tau, double alpha) {
    return ee_core(n, TimeSplit{tau, alpha, 1.0}, 0.0, 1.0, unit);
  };
  auto best_at_tau = [&](double tau) -> std::pair<double, double> {  // (ee, alpha)
    double abc = eval(tau, 0.0).ee;
    auto a = choose_alpha_full(n, TimeSplit{tau, 0.0, 1.0}, 0.0, 1.0);
    if (!a) return {abc, 0.0};
    double hyb = eval(tau, *a).ee;
    return hyb >= abc ? std::pair{hyb, *a} : std::pair{abc, 0.0};
  };

  ModeOptimum out;
  out.feasible = true;
  if (drop_sensing) {
    // tau = 1 zeroes the sensing energy along with the slot; backscatter
    // then costs nothing at all, so its efficiency is unbounded whenever
    // the rate is positive.
    auto evald = [&](double alpha) {
      return ee_core(n, TimeSplit{1.0, alpha, 1.0}, 0.0, 1.0, unit);
    };
    out.tau = 1.0;
    double abc = n.backscatter_rate > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    double ad = alpha_dagger(n, TimeSplit{1.0, 0.0, 1.0});
    double a = 0.0, hyb = -std::numeric_limits<double>::infinity();
    if (ad <= 1.0) {
      auto r = golden_section_max([&](double al) { return evald(al).ee; }, ad, 1.0, 1e-7);
      a = r.first;
      hyb = r.second;
    }
    if (hyb >= abc) {
      out.alpha = a;
      out.ee = hyb;
      auto b = evald(a);
      out.throughput = (b.throughput_abc + b.throughput_htt) *
                       (unit == EeUnit::bits_per_hz_joule ? n.bandwidth : 1.0);
      out.energy = b.energy;
    } else {
      out.alpha = 0.0;
      out.ee = abc;
      out.throughput = n.prior_busy * n.backscatter_rate;
      out.energy = 0.0;
    }
    return out;
  }

  double lo = 1e-3, hi = 1.0 - 1e-3;
  constexpr int kPrescan = 64;
  double bx = lo, bv = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPrescan; ++i) {
    double x = lo + (hi - lo) * i / double(kPrescan - 1);
    double v = best_at_tau(x).first;
    if (v > bv) {
      bv = v;
      bx = x;
    }
  }
  double step = (hi - lo) / double(kPrescan - 1);
  auto [x, v] = golden_section_max(
      [&](double tau) { return best_at_tau(tau).first; }, std::max(lo, bx - step),
      std::min(hi, bx + step), 1e-6);
  auto [ee, alpha] = best_at_tau(x);
  out.tau = x;
  out.alpha = alpha;
  out.ee = ee;
  auto b = eval(x, alpha);
  out.throughput = (b.throughput_abc + b.throughput_htt) *
                   (unit == EeUnit::bits_per_hz_joule ? n.bandwidth : 1.0);
  out.energy = b.energy;
  return out;
}

}  // namespace detail

// Optimize one operating mode; infeasible constraint sets yield a
// non-feasible result rather than a throw.
inline ModeOptimum optimize_operating_mode(const NetworkParams& n,
                                           const SensingParams& s_template,
                                           OperatingMode mode,
                                           EeUnit unit = EeUnit::bits_per_hz_joule,
                                           bool drop_sensing = false) {
  ModeOptimum out;
  try {
    if (mode == OperatingMode::no_sensing_errors) {
      return detail::perfect_optimum(n, unit, drop_sensing);
    }
    if (mode == OperatingMode::abc_only) {
      AlphaRule rule = [](const SensingParams&, double) { return 0.0; };
      TauSearchResult r = optimal_tau(n, s_template, rule, 1.0, unit);
      if (!std::isfinite(r.ee)) return out;
      out.feasible = true;
      out.tau = r.tau_star;
      out.alpha = 0.0;
      out.ee = r.ee;
    } else {
      NetworkParams nn = n;
      if (mode == OperatingMode::htt_only) nn.backscatter_rate = 0.0;
      OptimalPoint p = maximize_ee(nn, s_template, unit);
      out.feasible = true;
      out.tau = p.tau_star;
      out.alpha = p.alpha_star;
      out.ee = p.ee_max;
      SensingParams s = s_template;
      s.threshold = p.eps_star;
      auto b = energy_efficiency(nn, s, TimeSplit{p.tau_star, p.alpha_star, 1.0},
                                 EeUnit::bits_per_joule);
      out.throughput = b.throughput_abc + b.throughput_htt;
      out.energy = b.energy;
      return out;
    }
    SensingParams s = s_template;
    s.threshold = optimal_threshold(s_template, out.tau, n.target_pd);
    auto b = energy_efficiency(n, s, TimeSplit{out.tau, out.alpha, 1.0},
                               EeUnit::bits_per_joule);
    out.throughput = b.throughput_abc + b.throughput_htt;
    out.energy = b.energy;
  } catch (const InfeasibleError&) {
    return ModeOptimum{};
  }
  return out;
}

namespace detail {

class CsvFile {
 public:
  CsvFile(const std::string& path) : f_(path, std::ios::binary) {
    if (!f_) throw std::runtime_error("cannot open output file '" + path + "'");
  }
  void comment(const std::string& key, const std::string& value) {
    f_ << "# " << key << " = " << value << "\n";
  }
  void comment(const std::string& key, double value) {
    comment(key, num(value));
  }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) f_ << (i ? "," : "") << cols[i];
    f_ << "\n";
  }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) f_ << (i ? "," : "") << num(vals[i]);
    f_ << "\n";
  }
  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
  }

 private:
  std::ofstream f_;
};

inline void echo_config(CsvFile& f, Preset p, const ExperimentConfig& cfg,
                        const PresetOptions& opt) {
  f.comment("preset", to_string(p));
  f.comment("seed", static_cast<double>(opt.seed));
  f.comment("ee_unit", cfg.unit == EeUnit::bits_per_hz_joule ? "bits_per_hz_joule"
                                                             : "bits_per_joule");
  if (opt.drop_sensing) f.comment("baseline_drop_sensing", "true");
  const NetworkParams& n = cfg.net;
  f.comment("prior_idle", n.prior_idle);
  f.comment("prior_busy", n.prior_busy);
  f.comment("bandwidth_hz", n.bandwidth);
  f.comment("backscatter_rate_bps", n.backscatter_rate);
  f.comment("kappa", n.partial_throughput_factor);
  f.comment("sensing_power_w", n.sensing_power);
  f.comment("circuit_power_w", n.circuit_power);
  f.comment("pu_tx_power_w", n.pu_tx_power);
  f.comment("interference_gain_ratio", n.interference_gain_ratio);
  f.comment("noise_to_channel_power_w", n.noise_to_channel_power);
  f.comment("harvested_power_w", n.harvested_power);
  f.comment("target_pd", n.target_pd);
  f.comment("target_pf", n.target_pf);
  f.comment("num_samples", static_cast<double>(cfg.sensing.num_samples));
  f.comment("snr_db", cfg.snr_db);
  f.comment("noise_variance_w", cfg.sensing.noise_variance);
}

inline std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / double(points - 1);
  return xs;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace detail

// Runs one preset sweep and writes it to out_path. The preset pins the
// parameters that define the figure (sample counts, harvested power,
// per-curve values); everything else comes from cfg.
inline void run_preset(Preset preset, const ExperimentConfig& cfg,
                       const std::string& out_path, const PresetOptions& opt = {}) {
  using detail::CsvFile;
  using detail::kNan;
  CsvFile f(out_path);

  ExperimentConfig c = cfg;
  switch (preset) {
    case Preset::fig2:
      c.sensing.num_samples = 1000;
      c.net.sensing_power = 0.3e-3;
      c.net.partial_throughput_factor = 0.6;
      break;
    case Preset::fig8:
      c.sensing.num_samples = 1000;
      c.net.harvested_power = 1.0;
      break;
    case Preset::fig9:
      c.sensing.num_samples = 2000;
      c.net.harvested_power = 1.0;
      break;
    default:
      break;
  }
  detail::echo_config(f, preset, c, opt);
  const NetworkParams& n = c.net;
  const SensingParams& st = c.sensing;
  EeUnit unit = c.unit;

  auto eps_at = [&](double tau) {
    SensingParams s = st;
    s.threshold = optimal_threshold(st, tau, n.target_pd);
    return s;
  };

  switch (preset) {
    case Preset::fig2: {
      f.header({"tau", "alpha", "ee"});
      for (double tau : detail::linspace(0.02, 0.98, 49)) {
        SensingParams s = eps_at(tau);
        for (double alpha : detail::linspace(0.0, 1.0, 51)) {
          f.row({tau, alpha, energy_efficiency(n, s, {tau, alpha, 1.0}, unit).ee});
        }
      }
      break;
    }
    case Preset::fig3: {
      f.header({"tau", "ee_snr_m12db", "ee_snr_m10db", "ee_snr_m8db"});
      const double snrs_db[3] = {-12, -10, -8};
      SensingParams sv[3];
      std::optional<double> tmax[3];
      for (int k = 0; k < 3; ++k) {
        sv[k] = st;
        sv[k].snr = std::pow(10.0, snrs_db[k] / 10.0);
        tmax[k] = tau_feasible_upper(n, sv[k]);
      }
      for (double tau : detail::linspace(0.005, 0.995, 199)) {
        std::vector<double> row{tau, kNan, kNan, kNan};
        for (int k = 0; k < 3; ++k) {
          if (!tmax[k] || tau > *tmax[k]) continue;
          SensingParams s = sv[k];
          s.threshold = optimal_threshold(sv[k], tau, n.target_pd);
          double pf = prob_false_alarm(s, tau);
          double pd = prob_detection(s, tau);
          auto a = detail::choose_alpha_full(n, {tau, 0.0, 1.0}, pf, pd);
          row[static_cast<std::size_t>(k) + 1] =
              energy_efficiency(n, s, {tau, a ? *a : 0.0, 1.0}, unit).ee;
        }
        f.row(row);
      }
      break;
    }
    case Preset::fig4: {
      f.header({"alpha", "ee_tau0.3", "ee_tau0.5", "ee_tau0.7"});
      const double taus[3] = {0.3, 0.5, 0.7};
      SensingParams s[3] = {eps_at(taus[0]), eps_at(taus[1]), eps_at(taus[2])};
      for (double alpha : detail::linspace(0.0, 1.0, 201)) {
        f.row({alpha, energy_efficiency(n, s[0], {taus[0], alpha, 1.0}, unit).ee,
               energy_efficiency(n, s[1], {taus[1], alpha, 1.0}, unit).ee,
               energy_efficiency(n, s[2], {taus[2], alpha, 1.0}, unit).ee});
      }
      break;
    }
    case Preset::fig5:
    case Preset::fig6: {
      const bool by_ns = preset == Preset::fig5;
      f.header(by_ns ? std::vector<std::string>{"snr_db", "ee_ns500", "ee_ns1000",
                                                "ee_ns2000"}
                     : std::vector<std::string>{"snr_db", "ee_pd0.8", "ee_pd0.9",
                                                "ee_pd0.99"});
      const std::uint32_t ns_set[3] = {500, 1000, 2000};
      const double pd_set[3] = {0.8, 0.9, 0.99};
      for (double snr_db : detail::linspace(-20, 0, 21)) {
        std::vector<double> row{snr_db};
        for (int k = 0; k < 3; ++k) {
          NetworkParams nk = n;
          SensingParams sk = st;
          sk.snr = std::pow(10.0, snr_db / 10.0);
          if (by_ns) sk.num_samples = ns_set[k];
          else nk.target_pd = pd_set[k];
          auto r = optimize_operating_mode(nk, sk, OperatingMode::hybrid, unit);
          row.push_back(r.feasible ? r.ee : kNan);
        }
        f.row(row);
      }
      break;
    }
    case Preset::fig7: {
      f.header({"snr_db", "throughput_pd0.8", "energy_pd0.8", "throughput_pd0.9",
                "energy_pd0.9", "throughput_pd0.99", "energy_pd0.99"});
      const double pd_set[3] = {0.8, 0.9, 0.99};
      for (double snr_db : detail::linspace(-20, 0, 21)) {
        std::vector<double> row{snr_db};
        for (double pd : pd_set) {
          NetworkParams nk = n;
          nk.target_pd = pd;
          SensingParams sk = st;
          sk.snr = std::pow(10.0, snr_db / 10.0);
          auto r = optimize_operating_mode(nk, sk, OperatingMode::hybrid, unit);
          row.push_back(r.feasible ? r.throughput : kNan);
          row.push_back(r.feasible ? r.energy : kNan);
        }
        f.row(row);
      }
      break;
    }
    case Preset::fig8: {
      f.header({"bb_bps", "ee_abc_only", "ee_htt_only", "ee_hybrid"});
      for (int i = 0; i <= 16; ++i) {
        double bb = std::pow(10.0, 4.0 + 0.25 * i);
        NetworkParams nk = n;
        nk.backscatter_rate = bb;
        auto abc = optimize_operating_mode(nk, st, OperatingMode::abc_only, unit);
        auto htt = optimize_operating_mode(nk, st, OperatingMode::htt_only, unit);
        auto hyb = optimize_operating_mode(nk, st, OperatingMode::hybrid, unit);
        f.row({bb, abc.feasible ? abc.ee : kNan, htt.feasible ? htt.ee : kNan,
               hyb.feasible ? hyb.ee : kNan});
      }
      break;
    }
    case Preset::fig9: {
      f.header({"snr_db", "ee_with_errors", "ee_no_errors"});
      for (double snr_db : detail::linspace(-20, 0, 21)) {
        SensingParams sk = st;
        sk.snr = std::pow(10.0, snr_db / 10.0);
        auto err = optimize_operating_mode(n, sk, OperatingMode::hybrid, unit);
        auto noe = optimize_operating_mode(n, sk, OperatingMode::no_sensing_errors,
                                           unit, opt.drop_sensing);
        f.row({snr_db, err.feasible ? err.ee : kNan, noe.feasible ? noe.ee : kNan});
      }
      break;
    }
  }
}

}  // namespace abcr
