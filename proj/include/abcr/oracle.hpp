#pragma once

// Brute-force references: exhaustive grid search over the time split,
// a discrete concavity probe, and central finite differences. These are
// the arbiters the closed forms are validated against.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcr/model.hpp"
#include "abcr/optimize.hpp"

namespace abcr {

struct GridSpec {
  struct Axis {
    std::size_t points;
    double lo, hi;
  };
  Axis tau{100, 1e-3, 1.0 - 1e-3};
  Axis alpha{100, 0.0, 1.0};
  Axis mu{10, 0.1, 1.0};
};

inline void validate(const GridSpec& g) {
  for (const auto& ax : {g.tau, g.alpha, g.mu}) {
    if (ax.points < 2) throw std::invalid_argument("GridSpec: each axis needs >= 2 points");
    if (!(ax.lo < ax.hi)) throw std::invalid_argument("GridSpec: axis bounds must satisfy lo < hi");
  }
  if (!(g.tau.lo > 0 && g.tau.hi < 1)) throw std::invalid_argument("GridSpec: tau bounds must lie in (0,1)");
  if (!(g.alpha.lo >= 0 && g.alpha.hi <= 1)) throw std::invalid_argument("GridSpec: alpha bounds must lie in [0,1]");
  if (!(g.mu.lo > 0 && g.mu.hi <= 1)) throw std::invalid_argument("GridSpec: mu bounds must lie in (0,1]");
}

struct SurfaceCell {
  double tau, alpha, mu, ee;
};

struct GridSearchResult {
  struct Best {
    TimeSplit split;
    double ee;
    std::size_t index;  // linear index into surface, (tau, alpha, mu) order
  };
  std::optional<Best> best;  // empty when no cell is feasible with ee > 0
  std::vector<SurfaceCell> surface;
};

// Exhaustive EE evaluation with the detection-constrained threshold
// re-derived per tau. The argmax honors the false-alarm constraint (cells
// on tau columns violating it are recorded in the surface but skipped for
// the optimum); ties resolve to the lowest linear index.
inline GridSearchResult grid_search_ee(const NetworkParams& n,
                                       const SensingParams& s_template,
                                       const GridSpec& g,
                                       EeUnit unit = EeUnit::bits_per_hz_joule) {
  validate(g);
  GridSearchResult out;
  out.surface.reserve(g.tau.points * g.alpha.points * g.mu.points);
  double best_ee = 0.0;
  bool have_best = false;
  TimeSplit best_split{};
  std::size_t best_index = 0;

  auto coord = [](const GridSpec::Axis& ax, std::size_t i) {
    return ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / static_cast<double>(ax.points - 1);
  };

  for (std::size_t it = 0; it < g.tau.points; ++it) {
    double tau = coord(g.tau, it);
    bool degenerate = (1.0 - tau) * s_template.num_samples < 1.0;
    SensingParams s = s_template;
    bool pf_ok = false;
    if (!degenerate) {
      s.threshold = optimal_threshold(s_template, tau, n.target_pd);
      pf_ok = prob_false_alarm(s, tau) <= n.target_pf;
    }
    for (std::size_t ia = 0; ia < g.alpha.points; ++ia) {
      double alpha = coord(g.alpha, ia);
      for (std::size_t im = 0; im < g.mu.points; ++im) {
        double mu = coord(g.mu, im);
        TimeSplit t{tau, alpha, mu};
        double ee = std::numeric_limits<double>::quiet_NaN();
        if (!degenerate) {
          ee = energy_efficiency(n, s, t, unit).ee;
          if (pf_ok && ee > best_ee) {
            best_ee = ee;
            best_split = t;
            best_index = out.surface.size();
            have_best = true;
          }
        }
        out.surface.push_back({tau, alpha, mu, ee});
      }
    }
  }
  if (have_best) out.best = GridSearchResult::Best{best_split, best_ee, best_index};
  return out;
}

struct ConcavityReport {
  bool concave = false;
  double max_positive_second_difference = 0;
};

// Discrete concavity check on uniformly spaced samples: all second
// differences must stay below a slack proportional to the value scale.
inline ConcavityReport concavity_probe(const std::vector<double>& values) {
  if (values.size() < 3) throw std::domain_error("concavity_probe: need at least 3 samples");
  double scale = 0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  double slack = 1e-9 * scale;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    worst = std::max(worst, values[i - 1] - 2.0 * values[i] + values[i + 1]);
  }
  return {worst <= slack, worst};
}

template <typename F>
double finite_difference(F&& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

inline double fd_step(double x) { return std::max(1e-8, 1e-6 * std::abs(x)); }

inline void write_surface_csv(const std::string& path,
                              const std::vector<SurfaceCell>& surface) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_surface_csv: cannot open " + path);
  f << "tau,alpha,mu,ee\n";
  char buf[160];
  for (const auto& c : surface) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", c.tau, c.alpha, c.mu,
                  c.ee);
    f << buf;
  }
}

}  // namespace abcr
