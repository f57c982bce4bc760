#pragma once

// Deterministic optimization pipeline: detection-constrained threshold,
// full transmission when idle (mu* = 1), harvesting-fraction selection,
// and a derivative-free search over the data-transmission time, composed
// into the final mode selection between hybrid and backscatter-only
// operation.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "abcr/gradients.hpp"
#include "abcr/model.hpp"
#include "abcr/qfunc.hpp"
#include "abcr/types.hpp"

namespace abcr {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Threshold at which the detection probability meets its target exactly.
// The false-alarm constraint is checked separately.
inline double optimal_threshold(const SensingParams& s, double tau, double target_pd) {
  require_tau(tau);
  if (!(target_pd > 0 && target_pd < 1))
    throw std::domain_error("optimal_threshold: target_pd must lie in (0,1)");
  double m = (1.0 - tau) * static_cast<double>(s.num_samples);
  if (m < 1.0) throw std::domain_error("optimal_threshold: degenerate sensing window ((1-tau)*num_samples < 1)");
  return s.noise_variance *
         ((s.snr + 1.0) + std::sqrt((2.0 * s.snr + 1.0) / m) * q_inverse(target_pd));
}

// True iff the false-alarm probability at the current threshold satisfies
// its target (inclusive).
inline bool check_pf_constraint(const NetworkParams& n, const SensingParams& s,
                                double tau) {
  return prob_false_alarm(s, tau) <= n.target_pf;
}

// Transmitting for the whole idle-declared window is always optimal.
inline double optimal_mu(const NetworkParams&, const SensingParams&, const TimeSplit&) {
  return 1.0;
}

struct BbWindow {
  double lower = 0;  // backscatter rate at which the optimum sits at alpha = 1
  double upper = 0;  // ... at alpha = alpha_dagger
};

namespace detail {

// Interference-neglected stationarity machinery for the harvesting
// fraction. The shared expression gives the backscatter rate whose
// throughput trade-off is stationary at a given alpha.
inline double bb_stationary_rate(const NetworkParams& n, const TimeSplit& t, double pf,
                                 double pd, double alpha) {
  auto y = log_arg_coeffs(n, t);
  double k = n.partial_throughput_factor * n.prior_busy * (1.0 - pd) +
             n.prior_idle * (1.0 - pf);
  return k * t.mu * n.bandwidth * y.y4 /
         (std::log(2.0) * n.prior_busy * pd * (y.y3 + alpha * y.y4));
}

inline double alpha_closed_form(const NetworkParams& n, const TimeSplit& t, double pf,
                                double pd) {
  auto y = log_arg_coeffs(n, t);
  double k = n.partial_throughput_factor * n.prior_busy * (1.0 - pd) +
             n.prior_idle * (1.0 - pf);
  return k * t.mu * n.bandwidth /
             (std::log(2.0) * n.prior_busy * pd * n.backscatter_rate) -
         y.y3 / y.y4;
}

}  // namespace detail

// Backscatter-rate window inside which the harvesting fraction has an
// interior optimum (interference neglected).
inline BbWindow bb_window(const NetworkParams& n, const SensingParams& s,
                          const TimeSplit& t) {
  validate(t);
  double pf = prob_false_alarm(s, t.tau);
  double pd = prob_detection(s, t.tau);
  double ad = std::min(alpha_dagger(n, t), 1.0);
  return {detail::bb_stationary_rate(n, t, pf, pd, 1.0),
          detail::bb_stationary_rate(n, t, pf, pd, ad)};
}

template <typename F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi,
                                             double tol = 1e-6) {
  static const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

namespace detail {

// Full-objective selection of the harvesting fraction on
// [alpha_dagger, 1]: closed-form seed plus a bounded golden-section
// refinement plus both endpoints, decided by direct evaluation. Returns
// nothing when the harvesting budget cannot close.
inline std::optional<double> choose_alpha_full(const NetworkParams& n,
                                               const TimeSplit& shape, double pf,
                                               double pd) {
  TimeSplit t = shape;
  double ad = alpha_dagger(n, t);
  if (ad > 1.0) return std::nullopt;
  auto value = [&](double a) {
    t.alpha = a;
    return ee_core(n, t, pf, pd, EeUnit::bits_per_joule).ee;
  };
  double best = ad;
  double best_v = value(ad);
  auto consider = [&](double a) {
    double v = value(a);
    if (v > best_v) {
      best_v = v;
      best = a;
    }
  };
  consider(1.0);
  if (n.backscatter_rate > 0) {
    double cf = alpha_closed_form(n, t, pf, pd);
    if (std::isfinite(cf) && cf > ad && cf < 1.0) consider(cf);
  }
  if (1.0 - ad > 1e-9) {
    auto [x, v] = golden_section_max(value, ad, 1.0, 1e-6 * std::max(1.0, 1.0 - ad));
    if (v > best_v) {
      best_v = v;
      best = x;
    }
  }
  return best;
}

}  // namespace detail

struct AlphaResult {
  double alpha = 0;
  bool clamped = false;
};

// Interference-neglected optimum of the harvesting fraction: the closed
// form when the backscatter rate lies inside bb_window, otherwise the
// better of the two endpoints by direct evaluation.
inline AlphaResult optimal_alpha(const NetworkParams& n, const SensingParams& s,
                                 const TimeSplit& t) {
  validate(t);
  double ad = alpha_dagger(n, t);
  if (ad > 1.0) throw std::domain_error("optimal_alpha: harvesting budget infeasible (alpha_dagger > 1)");
  double pf = prob_false_alarm(s, t.tau);
  double pd = prob_detection(s, t.tau);
  BbWindow w{detail::bb_stationary_rate(n, t, pf, pd, 1.0),
             detail::bb_stationary_rate(n, t, pf, pd, ad)};
  if (n.backscatter_rate >= w.lower && n.backscatter_rate <= w.upper) {
    double cf = detail::alpha_closed_form(n, t, pf, pd);
    if (cf < ad) return {ad, true};
    if (cf > 1.0) return {1.0, true};
    return {cf, false};
  }
  TimeSplit te = t;
  auto at = [&](double a) {
    te.alpha = a;
    return detail::ee_core(n, te, pf, pd, EeUnit::bits_per_joule).ee;
  };
  return at(ad) >= at(1.0) ? AlphaResult{ad, true} : AlphaResult{1.0, true};
}

// Largest tau whose detection-constrained threshold still satisfies the
// false-alarm target; the false alarm at that threshold grows with tau.
// Empty when no tau in the bracket is feasible.
inline std::optional<double> tau_feasible_upper(const NetworkParams& n,
                                                const SensingParams& s_template,
                                                double lo = 1e-3) {
  double hi = std::min(1.0 - 1e-3, 1.0 - 1.0 / static_cast<double>(s_template.num_samples));
  if (hi <= lo) return std::nullopt;
  auto violation = [&](double tau) {
    SensingParams s = s_template;
    s.threshold = optimal_threshold(s_template, tau, n.target_pd);
    return prob_false_alarm(s, tau) - n.target_pf;
  };
  if (violation(lo) > 0) return std::nullopt;
  if (violation(hi) <= 0) return hi;
  double a = lo, b = hi;
  for (int i = 0; i < 200 && b - a > 1e-14; ++i) {
    double m = 0.5 * (a + b);
    (violation(m) <= 0 ? a : b) = m;
  }
  return a;
}

// Maps a candidate tau (with its re-derived threshold) to the harvesting
// fraction to evaluate; NaN signals that the choice is infeasible there.
using AlphaRule = std::function<double(const SensingParams& s_at_tau, double tau)>;

struct TauSearchResult {
  double tau_star = 0;
  double ee = -std::numeric_limits<double>::infinity();
  bool nonconcave_warning = false;
};

// Search over the data-transmission time with the threshold re-derived
// per candidate. A 64-point pre-scan brackets the peak (and flags any
// multimodality) before the golden-section refinement.
inline TauSearchResult optimal_tau(const NetworkParams& n,
                                   const SensingParams& s_template,
                                   const AlphaRule& alpha_rule, double mu_star,
                                   EeUnit unit = EeUnit::bits_per_hz_joule) {
  double lo = 1e-3;
  auto hi = tau_feasible_upper(n, s_template, lo);
  if (!hi) throw InfeasibleError("no tau satisfies the sensing constraints");

  auto curve = [&](double tau) {
    SensingParams s = s_template;
    s.threshold = optimal_threshold(s_template, tau, n.target_pd);
    double alpha = alpha_rule(s, tau);
    if (std::isnan(alpha)) return -std::numeric_limits<double>::infinity();
    return energy_efficiency(n, s, TimeSplit{tau, alpha, mu_star}, unit).ee;
  };

  constexpr int kPrescan = 64;
  std::vector<double> xs(kPrescan), vs(kPrescan);
  int best = 0;
  int local_maxima = 0;
  for (int i = 0; i < kPrescan; ++i) {
    xs[i] = lo + (*hi - lo) * i / double(kPrescan - 1);
    vs[i] = curve(xs[i]);
    if (vs[i] > vs[best]) best = i;
  }
  for (int i = 1; i + 1 < kPrescan; ++i)
    if (vs[i] > vs[i - 1] && vs[i] > vs[i + 1]) ++local_maxima;

  TauSearchResult out;
  out.nonconcave_warning = local_maxima > 1;
  if (!std::isfinite(vs[best])) {
    return out;  // whole bracket infeasible for this rule
  }
  double a = xs[std::max(0, best - 1)];
  double b = xs[std::min(kPrescan - 1, best + 1)];
  auto [x, v] = golden_section_max(curve, a, b, 1e-6);
  out.tau_star = x;
  out.ee = v;
  // a constraint-bound optimum sits exactly on a bracket edge
  for (double edge : {a, b}) {
    double ve = curve(edge);
    if (ve > out.ee) {
      out.tau_star = edge;
      out.ee = ve;
    }
  }
  return out;
}

enum class Mode { hybrid, abc_only };

inline const char* to_string(Mode m) {
  return m == Mode::hybrid ? "hybrid" : "abc_only";
}

struct OptimalPoint {
  double eps_star = 0;
  double mu_star = 1;
  double alpha_star = 0;  // 0 for backscatter-only operation
  double tau_star = 0;
  double ee_max = 0;
  Mode mode = Mode::hybrid;
  bool nonconcave_warning = false;
};

// Full pipeline plus the final mode selection: the backscatter-only
// optimum (alpha = 0) is compared against the hybrid optimum, each with
// its own tau search; ties resolve to hybrid.
inline OptimalPoint maximize_ee(const NetworkParams& n, const SensingParams& s_template,
                                EeUnit unit = EeUnit::bits_per_hz_joule) {
  validate(n);

  AlphaRule abc_rule = [](const SensingParams&, double) { return 0.0; };
  AlphaRule hybrid_rule = [&n](const SensingParams& s, double tau) {
    double pf = prob_false_alarm(s, tau);
    double pd = prob_detection(s, tau);
    auto a = detail::choose_alpha_full(n, TimeSplit{tau, 0.0, 1.0}, pf, pd);
    return a ? *a : std::numeric_limits<double>::quiet_NaN();
  };

  TauSearchResult abc = optimal_tau(n, s_template, abc_rule, 1.0, unit);
  TauSearchResult hyb = optimal_tau(n, s_template, hybrid_rule, 1.0, unit);

  OptimalPoint out;
  bool pick_hybrid = std::isfinite(hyb.ee) && hyb.ee >= abc.ee - 1e-12;
  const TauSearchResult& sel = pick_hybrid ? hyb : abc;
  if (!std::isfinite(sel.ee)) throw InfeasibleError("no feasible operating point");

  out.mode = pick_hybrid ? Mode::hybrid : Mode::abc_only;
  out.tau_star = sel.tau_star;
  out.mu_star = 1.0;
  out.nonconcave_warning = abc.nonconcave_warning || hyb.nonconcave_warning;
  out.eps_star = optimal_threshold(s_template, out.tau_star, n.target_pd);

  SensingParams s = s_template;
  s.threshold = out.eps_star;
  if (pick_hybrid) {
    auto a = detail::choose_alpha_full(n, TimeSplit{out.tau_star, 0.0, 1.0},
                                       prob_false_alarm(s, out.tau_star),
                                       prob_detection(s, out.tau_star));
    out.alpha_star = a ? *a : 0.0;
  } else {
    out.alpha_star = 0.0;
  }
  out.ee_max =
      energy_efficiency(n, s, TimeSplit{out.tau_star, out.alpha_star, 1.0}, unit).ee;
  return out;
}

}  // namespace abcr
