#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abcr/oracle.hpp"

using namespace abcr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("finite difference sanity") {
  CHECK_THAT(finite_difference([](double x) { return x; }, 3.0, 0.25),
             WithinAbs(1.0, 1e-12));
  CHECK_THAT(finite_difference([](double x) { return q_function(x); }, 0.0, 1e-5),
             WithinAbs(-1.0 / std::sqrt(2.0 * M_PI), 1e-6));
}

TEST_CASE("concavity probe") {
  std::vector<double> parabola, kinked;
  for (int i = 0; i <= 50; ++i) {
    double x = -1.0 + 2.0 * i / 50.0;
    parabola.push_back(-x * x);
    kinked.push_back(-x * x + (i == 30 ? 0.5 : 0.0));
  }
  CHECK(concavity_probe(parabola).concave);
  CHECK_FALSE(concavity_probe(kinked).concave);
  CHECK_THROWS_AS(concavity_probe(std::vector<double>{1.0, 2.0}), std::domain_error);
}

TEST_CASE("grid search structure at the defaults") {
  NetworkParams n;
  SensingParams s;
  GridSpec g;
  g.tau.points = 40;
  g.alpha.points = 40;
  g.mu.points = 10;
  auto r = grid_search_ee(n, s, g);
  REQUIRE(r.best.has_value());
  CHECK(r.surface.size() == 40u * 40u * 10u);
  // full idle-window transmission wins on the mu axis
  CHECK_THAT(r.best->split.mu, WithinAbs(1.0, 1e-12));
  // the grid never beats the composed optimizer beyond its own resolution
  OptimalPoint p = maximize_ee(n, s);
  CHECK(p.ee_max >= r.best->ee - 1e-9 * r.best->ee);

  // determinism: identical calls give identical surfaces
  auto r2 = grid_search_ee(n, s, g);
  REQUIRE(r2.surface.size() == r.surface.size());
  for (std::size_t i = 0; i < r.surface.size(); ++i) {
    bool same = (r.surface[i].ee == r2.surface[i].ee) ||
                (std::isnan(r.surface[i].ee) && std::isnan(r2.surface[i].ee));
    if (!same) FAIL("surface mismatch at index " << i);
  }
}

TEST_CASE("grid search flags an empty feasible set") {
  NetworkParams n;
  n.backscatter_rate = 0.0;
  n.harvested_power = 1e-9;  // harvesting budget never closes
  SensingParams s;
  GridSpec g;
  g.tau.points = 10;
  g.alpha.points = 10;
  g.mu.points = 3;
  auto r = grid_search_ee(n, s, g);
  CHECK_FALSE(r.best.has_value());
  CHECK(r.surface.size() == 300u);
}

TEST_CASE("single interior peak of the restricted surface") {
  // the alpha-slice through the optimum rises once and falls once
  NetworkParams n;
  SensingParams s;
  OptimalPoint p = maximize_ee(n, s);
  SensingParams se = s;
  se.threshold = p.eps_star;
  double ad = alpha_dagger(n, TimeSplit{p.tau_star, 0.0, 1.0});
  std::vector<double> vals;
  for (int i = 0; i <= 200; ++i) {
    double alpha = std::min(1.0, ad + (1.0 - ad) * i / 200.0);
    vals.push_back(energy_efficiency(n, se, TimeSplit{p.tau_star, alpha, 1.0}).ee);
  }
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    if (vals[i] > vals[i - 1] && vals[i] > vals[i + 1]) ++maxima;
  CHECK(maxima == 1);
}

TEST_CASE("surface csv export") {
  std::vector<SurfaceCell> cells{{0.1, 0.2, 1.0, 3.5}, {0.2, 0.3, 1.0, 4.0}};
  std::string path = "oracle_surface_test.csv";
  write_surface_csv(path, cells);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "tau,alpha,mu,ee\n0.1,0.2,1,3.5\n0.2,0.3,1,4\n");
  std::remove(path.c_str());
}
