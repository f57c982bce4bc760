// Command-line front end: figure presets, one-shot optimization and the
// frame-level Monte Carlo simulator.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 infeasible
// constraint set.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "abcr/abcr.hpp"

namespace {

using nlohmann::ordered_json;

abcr::ExperimentConfig resolve_config(const std::string& path, bool raw_ee) {
  abcr::ExperimentConfig cfg =
      path.empty() ? abcr::load_config_json(nlohmann::json::object())
                   : abcr::load_config(path);
  if (raw_ee) cfg.unit = abcr::EeUnit::bits_per_joule;
  return cfg;
}

const char* unit_name(abcr::EeUnit u) {
  return u == abcr::EeUnit::bits_per_hz_joule ? "bits_per_hz_joule" : "bits_per_joule";
}

int cmd_run(const std::string& preset_name, const std::string& config_path,
            std::string out_path, std::uint64_t seed, bool drop_sensing, bool raw_ee) {
  auto preset = abcr::parse_preset(preset_name);
  if (!preset) {
    std::cerr << "error: unknown preset '" << preset_name << "' (expected fig2..fig9)\n";
    return 2;
  }
  abcr::ExperimentConfig cfg = resolve_config(config_path, raw_ee);
  if (out_path.empty())
    out_path = cfg.output_path.empty() ? preset_name + ".csv" : cfg.output_path;
  abcr::PresetOptions opt;
  opt.seed = seed;
  opt.drop_sensing = drop_sensing;
  abcr::run_preset(*preset, cfg, out_path, opt);
  std::cout << out_path << "\n";
  return 0;
}

int cmd_optimize(const std::string& config_path, bool raw_ee) {
  abcr::ExperimentConfig cfg = resolve_config(config_path, raw_ee);
  abcr::OptimalPoint p = abcr::maximize_ee(cfg.net, cfg.sensing, cfg.unit);
  abcr::SensingParams s = cfg.sensing;
  s.threshold = p.eps_star;
  ordered_json j;
  j["mode"] = abcr::to_string(p.mode);
  j["eps_star"] = p.eps_star;
  j["mu_star"] = p.mu_star;
  j["alpha_star"] = p.alpha_star;
  j["tau_star"] = p.tau_star;
  j["ee_max"] = p.ee_max;
  j["ee_unit"] = unit_name(cfg.unit);
  j["pf_at_optimum"] = abcr::prob_false_alarm(s, p.tau_star);
  j["pd_at_optimum"] = abcr::prob_detection(s, p.tau_star);
  j["nonconcave_warning"] = p.nonconcave_warning;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t frames,
                 std::uint64_t seed, const std::string& detector, bool raw_ee) {
  abcr::ExperimentConfig cfg = resolve_config(config_path, raw_ee);

  abcr::TimeSplit t;
  abcr::SensingParams s = cfg.sensing;
  if (cfg.operating_point) {
    t = *cfg.operating_point;
    s.threshold = abcr::optimal_threshold(cfg.sensing, t.tau, cfg.net.target_pd);
  } else {
    abcr::OptimalPoint p = abcr::maximize_ee(cfg.net, cfg.sensing, cfg.unit);
    t = {p.tau_star, p.alpha_star, p.mu_star};
    s.threshold = p.eps_star;
  }

  abcr::SimConfig sc;
  sc.num_frames = frames;
  sc.seed = seed;
  if (detector == "gaussian_approx") sc.detector_model = abcr::DetectorModel::gaussian_approx;
  else if (detector == "exact_chi_square") sc.detector_model = abcr::DetectorModel::exact_chi_square;
  else {
    std::cerr << "error: unknown detector model '" << detector << "'\n";
    return 2;
  }

  abcr::SimResult r = abcr::simulate(cfg.net, s, t, sc);
  abcr::EEBreakdown analytic =
      abcr::energy_efficiency(cfg.net, s, t, abcr::EeUnit::bits_per_joule);

  ordered_json j;
  j["config"] = {{"frames", sc.num_frames},
                 {"seed", sc.seed},
                 {"detector_model", detector},
                 {"tau", t.tau},
                 {"alpha", t.alpha},
                 {"mu", t.mu},
                 {"threshold", s.threshold}};
  j["empirical_pf"] = r.empirical_pf;
  j["empirical_pd"] = r.empirical_pd;
  j["mean_throughput_bits"] = r.mean_throughput;
  j["mean_energy_j"] = r.mean_energy;
  j["empirical_ee_bits_per_j"] = r.empirical_ee;
  j["standard_errors"] = {{"pf", r.se_pf},
                          {"pd", r.se_pd},
                          {"throughput", r.se_throughput},
                          {"energy", r.se_energy},
                          {"ee", r.se_ee}};
  j["scenario_counts"] = r.scenario_counts;
  j["analytic"] = {{"pf", analytic.pf},
                   {"pd", analytic.pd},
                   {"ee_bits_per_j", analytic.ee}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency model, optimizer and simulator for a "
               "backscatter-assisted RF-powered cognitive radio link"};
  app.require_subcommand(1);

  std::string config_path, out_path, detector = "gaussian_approx";
  std::string preset_name;
  std::uint64_t seed = 1, frames = 1'000'000;
  bool drop_sensing = false, raw_ee = false;

  CLI::App* run = app.add_subcommand("run", "Run a figure preset and write a CSV sweep");
  run->add_option("--preset", preset_name, "Preset name (fig2..fig9)")->required();
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--out", out_path, "Output CSV path");
  run->add_option("--seed", seed, "Seed echoed into the output");
  run->add_flag("--baseline-drop-sensing", drop_sensing,
                "Remove sensing time and energy from the perfect-sensing baseline");
  run->add_flag("--raw-ee", raw_ee, "Report efficiency in bits/J instead of bits/Hz/J");

  CLI::App* opt = app.add_subcommand("optimize", "Print the optimal operating point as JSON");
  opt->add_option("--config", config_path, "JSON config file");
  opt->add_flag("--raw-ee", raw_ee, "Report efficiency in bits/J instead of bits/Hz/J");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo validation at an operating point");
  sim->add_option("--config", config_path, "JSON config file");
  sim->add_option("--frames", frames, "Number of frames");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--detector", detector, "gaussian_approx | exact_chi_square");
  sim->add_flag("--raw-ee", raw_ee, "Report efficiency in bits/J instead of bits/Hz/J");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(preset_name, config_path, out_path, seed, drop_sensing, raw_ee);
    if (opt->parsed()) return cmd_optimize(config_path, raw_ee);
    if (sim->parsed()) return cmd_simulate(config_path, frames, seed, detector, raw_ee);
  } catch (const abcr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const abcr::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
