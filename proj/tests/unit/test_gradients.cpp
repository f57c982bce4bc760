#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "abcr/gradients.hpp"
#include "abcr/optimize.hpp"
#include "abcr/oracle.hpp"

using namespace abcr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Rng {
  std::mt19937_64 g{777};
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
};

// Draws with both detector arguments within +-4 sigma, where the
// statistics are numerically meaningful (operating targets live well
// inside +-2.4).
struct SensingDraw {
  SensingParams s;
  double tau;
};

SensingDraw draw_sensing(Rng& rng) {
  for (;;) {
    SensingParams s;
    s.num_samples = static_cast<std::uint32_t>(rng.uniform(100, 5000));
    s.snr = rng.log_uniform(0.03, 1.0);
    s.noise_variance = rng.log_uniform(0.3, 3.0);
    double tau = rng.uniform(0.1, 0.9);
    double m = (1.0 - tau) * s.num_samples;
    double uf = rng.uniform(-4.0, 4.0);
    s.threshold = s.noise_variance * (1.0 + uf / std::sqrt(m));
    double ud = (s.threshold / s.noise_variance - s.snr - 1.0) *
                std::sqrt(m / (2.0 * s.snr + 1.0));
    if (s.threshold > 0 && std::abs(ud) <= 4.0) return {s, tau};
  }
}

}  // namespace

TEST_CASE("dpf_deps and dpd_deps match finite differences") {
  Rng rng;
  for (int i = 0; i < 100; ++i) {
    auto [s, tau] = draw_sensing(rng);
    double h = fd_step(s.threshold);
    double fd_pf = finite_difference(
        [&](double e) {
          SensingParams ss = s;
          ss.threshold = e;
          return prob_false_alarm(ss, tau);
        },
        s.threshold, h);
    double fd_pd = finite_difference(
        [&](double e) {
          SensingParams ss = s;
          ss.threshold = e;
          return prob_detection(ss, tau);
        },
        s.threshold, h);
    CHECK_THAT(dpf_deps(s, tau), WithinRel(fd_pf, 1e-5));
    CHECK_THAT(dpd_deps(s, tau), WithinRel(fd_pd, 1e-5));
  }
}

TEST_CASE("dpf_deps structure") {
  SensingParams s;
  s.threshold = s.noise_variance;  // exponential factor equals 1
  double m = (1.0 - 0.5) * s.num_samples;
  CHECK_THAT(dpf_deps(s, 0.5),
             WithinRel(-std::sqrt(m) / std::sqrt(2 * M_PI), 1e-12));
  // sign everywhere
  for (double e = 0.5; e <= 2.0; e += 0.01) {
    s.threshold = e;
    CHECK(dpf_deps(s, 0.5) <= 0.0);
    CHECK(dpd_deps(s, 0.5) <= 0.0);
  }
}

TEST_CASE("derivative ordering holds below the noise floor") {
  // dPd/deps >= dPf/deps is provable for thresholds at or below the noise
  // power; above it the detection branch can be steeper.
  SensingParams s;
  s.snr = 0.1;
  for (int i = 1; i <= 1000; ++i) {
    s.threshold = s.noise_variance * i / 1000.0;
    CHECK(dpd_deps(s, 0.5) >= dpf_deps(s, 0.5));
  }
}

TEST_CASE("dpd_deps approaches dpf_deps as snr vanishes") {
  SensingParams s;
  s.snr = 1e-12;
  s.threshold = 1.03;
  CHECK_THAT(dpd_deps(s, 0.4), WithinRel(dpf_deps(s, 0.4), 1e-9));
}

TEST_CASE("dpf_dtau matches finite differences and guards the boundary") {
  Rng rng;
  for (int i = 0; i < 100; ++i) {
    auto [s, tau] = draw_sensing(rng);
    double h = fd_step(tau);
    double fd = finite_difference([&](double t) { return prob_false_alarm(s, t); }, tau, h);
    CHECK_THAT(dpf_dtau(s, tau), WithinRel(fd, 1e-5));
    // sign agreement with the oracle
    if (std::abs(fd) > 1e-12) CHECK(dpf_dtau(s, tau) * fd > 0.0);
  }
  SensingParams s;
  CHECK_THROWS_AS(dpf_dtau(s, 1.0 - 1e-9), std::domain_error);
  CHECK(std::isfinite(dpf_dtau(s, 1.0 - 1e-6)));
}

TEST_CASE("dee_dalpha matches the fixed-denominator finite difference") {
  Rng rng;
  int done = 0;
  while (done < 100) {
    NetworkParams n;
    n.interference_gain_ratio = rng.log_uniform(1e-5, 1e-3);
    n.harvested_power = rng.log_uniform(3e-3, 0.3);
    n.sensing_power = rng.log_uniform(2e-3, 1e-2);
    n.circuit_power = rng.log_uniform(1e-5, 1e-4);
    n.noise_to_channel_power = rng.log_uniform(1e-3, 0.3);
    n.partial_throughput_factor = rng.uniform(0.3, 1.0);
    n.bandwidth = rng.log_uniform(3e4, 6e5);
    n.backscatter_rate = rng.log_uniform(1e3, 1e6);
    SensingParams s;
    s.snr = rng.log_uniform(0.06, 0.25);
    double tau = rng.uniform(0.2, 0.6);
    s.threshold = optimal_threshold(s, tau, n.target_pd);

    TimeSplit t{tau, 0.0, 1.0};
    double ad = alpha_dagger(n, t);
    if (ad > 0.98) continue;
    t.alpha = rng.uniform(ad + 1e-4, 1.0);
    if (t.alpha - fd_step(t.alpha) < ad) continue;
    ++done;

    double e0 = energy_efficiency(n, s, t, EeUnit::bits_per_joule).energy;
    double h = fd_step(t.alpha);
    double fd = finite_difference(
        [&](double a) {
          TimeSplit ta = t;
          ta.alpha = a;
          auto b = energy_efficiency(n, s, ta, EeUnit::bits_per_joule);
          return (b.throughput_abc + b.throughput_htt) / e0;
        },
        t.alpha, h);
    CHECK_THAT(dee_dalpha(n, s, t), WithinRel(fd, 1e-5));
  }
}

TEST_CASE("dee_dalpha is zero at the closed-form optimum and decreasing") {
  NetworkParams n;
  n.interference_gain_ratio = 0.0;
  SensingParams s;
  double tau = 0.5;
  s.threshold = optimal_threshold(s, tau, n.target_pd);
  TimeSplit t{tau, 0.5, 1.0};
  auto w = bb_window(n, s, t);
  n.backscatter_rate = std::sqrt(w.lower * w.upper);

  AlphaResult a = optimal_alpha(n, s, t);
  CHECK_FALSE(a.clamped);
  t.alpha = a.alpha;
  CHECK_THAT(dee_dalpha(n, s, t), WithinAbs(0.0, 1e-6));

  // the fixed-denominator throughput derivative (dEE/dalpha times the
  // energy at the point) is strictly decreasing; the ratio itself is not
  // monotone once the derivative changes sign and the energy keeps growing
  double ad = alpha_dagger(n, t);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 50; ++i) {
    t.alpha = std::min(1.0, ad + (1.0 - ad) * i / 50.0);
    double d = dee_dalpha(n, s, t) *
               energy_efficiency(n, s, t, EeUnit::bits_per_joule).energy;
    CHECK(d < prev);
    prev = d;
  }
  t.alpha = ad / 2.0;
  CHECK_THROWS_AS(dee_dalpha(n, s, t), std::domain_error);
}

TEST_CASE("threshold monotonicity condition") {
  NetworkParams n;
  SensingParams s;
  s.threshold = optimal_threshold(s, 0.5, n.target_pd);
  TimeSplit t{0.5, 0.5, 1.0};

  // no backscatter earnings and a vanishing transmit budget: the condition
  // holds for any positive bandwidth (both sides scale with W, and the
  // right side is quadratic in the transmit power while the left is linear)
  NetworkParams nb = n;
  nb.backscatter_rate = 0.0;
  TimeSplit tb = t;
  tb.alpha = alpha_dagger(nb, t) * (1.0 + 1e-6);
  for (double w : {1e3, 1e6, 1e9}) {
    nb.bandwidth = w;
    CHECK(threshold_monotonicity_condition(nb, s, tb));
  }

  // vanishing bandwidth with a real backscatter rate cannot
  NetworkParams nw = n;
  nw.bandwidth = 1e-6;
  CHECK_FALSE(threshold_monotonicity_condition(nw, s, t));

  // the default configuration's value is stable across calls
  bool v = threshold_monotonicity_condition(n, s, t);
  for (int i = 0; i < 5; ++i) CHECK(threshold_monotonicity_condition(n, s, t) == v);
}

TEST_CASE("gradient bundle carries the pointwise values") {
  NetworkParams n;
  SensingParams s;
  double tau = 0.5;
  s.threshold = optimal_threshold(s, tau, n.target_pd);
  TimeSplit t{tau, 0.5, 1.0};
  auto g = evaluate_gradients(n, s, t);
  CHECK(g.dpf_deps == dpf_deps(s, tau));
  CHECK(g.dpd_deps == dpd_deps(s, tau));
  CHECK(g.dpf_dtau == dpf_dtau(s, tau));
  CHECK(g.dee_dalpha == dee_dalpha(n, s, t));
  CHECK(g.dpf_deps <= 0);
  CHECK(g.dpd_deps <= 0);
}
