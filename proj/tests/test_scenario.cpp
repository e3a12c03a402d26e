#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spt/kernels.hpp"
#include "spt/rng.hpp"
#include "spt/scenario.hpp"
#include "test_util.hpp"

using namespace spt;

namespace {

using test::shipped_params;

double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

double median(std::vector<double> v) {
  std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  return v[m];
}

bool rows_equal(const SchemeRun& a, const SchemeRun& b) {
  return a.seed == b.seed && a.scheme == b.scheme && a.feasible == b.feasible &&
         a.ee == b.ee && a.rate == b.rate && a.power == b.power &&
         a.psi_size == b.psi_size && a.dinkelbach_iters == b.dinkelbach_iters;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("path loss: reference distance and clamping") {
  ChannelConfig cfg;
  CHECK(pathloss_db(1000.0, cfg) == doctest::Approx(128.1).epsilon(1e-15));
  // 1 km -> 128.1 dB -> 10^-12.81 linear.
  double db = pathloss_db(1000.0, cfg);
  double lin = 0.0;
  kernels::scalar().db_to_linear(&db, &lin, 1);
  CHECK(lin == doctest::Approx(std::pow(10.0, -12.81)).epsilon(1e-12));
  // Below the clamp the loss stops shrinking.
  CHECK(pathloss_db(0.05, cfg) == pathloss_db(cfg.min_distance_m, cfg));
  CHECK(pathloss_db(50.0, cfg) ==
        doctest::Approx(128.1 + 37.6 * std::log10(0.05)).epsilon(1e-12));
}

TEST_CASE("generate_scenario: deterministic and valid") {
  GeometryConfig geom;
  geom.seed = 77;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  ChannelState a = generate_scenario(geom, chcfg, sp);
  ChannelState b = generate_scenario(geom, chcfg, sp);
  CHECK(a.g_su_own == b.g_su_own);
  CHECK(a.h_mu == b.h_mu);
  CHECK(a.g_cross == b.g_cross);
  CHECK_NOTHROW(a.validate(sp));

  GeometryConfig other = geom;
  other.seed = 78;
  ChannelState c = generate_scenario(other, chcfg, sp);
  CHECK(a.g_su_own != c.g_su_own);
}

TEST_CASE("generate_scenario: draw order reproduces every gain bitwise") {
  GeometryConfig geom;
  geom.n_su = 3;
  geom.n_mu = 2;
  geom.seed = 424242;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  ChannelState ch = generate_scenario(geom, chcfg, sp);

  // Independent walk of the documented draw sequence: positions (radius +
  // angle per user), then per-link shadowing and fading in the order
  // SU own bands, MU links, cross matrix row-major.
  Rng rng(geom.seed);
  const int n = geom.n_su, k = geom.n_mu;
  std::vector<double> su_dist(n), mu_dist(k);
  for (int i = 0; i < n; ++i) {
    su_dist[i] = geom.sc_radius_m * std::sqrt(rng.uniform01());
    rng.uniform01();
  }
  double r2min = geom.mu_ring_min_m * geom.mu_ring_min_m;
  double r2max = geom.mu_ring_max_m * geom.mu_ring_max_m;
  for (int i = 0; i < k; ++i) {
    mu_dist[i] = std::sqrt(r2min + (r2max - r2min) * rng.uniform01());
    rng.uniform01();
  }
  std::vector<double> loss(n + k + std::size_t(k) * n), fade(loss.size());
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i, ++idx) {
    loss[idx] = pathloss_db(su_dist[i], chcfg) +
                rng.normal(chcfg.shadowing_sigma_db);
    fade[idx] = rng.exponential1();
  }
  for (int i = 0; i < k; ++i, ++idx) {
    loss[idx] = pathloss_db(mu_dist[i], chcfg) +
                rng.normal(chcfg.shadowing_sigma_db) +
                chcfg.penetration_loss_db;
    fade[idx] = rng.exponential1();
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j, ++idx) {
      loss[idx] = pathloss_db(su_dist[j], chcfg) +
                  rng.normal(chcfg.shadowing_sigma_db);
      fade[idx] = rng.exponential1();
    }
  std::vector<double> lin(loss.size());
  kernels::active().db_to_linear(loss.data(), lin.data(), loss.size());

  idx = 0;
  for (int i = 0; i < n; ++i, ++idx) CHECK(ch.g_su_own[i] == lin[idx] * fade[idx]);
  for (int i = 0; i < k; ++i, ++idx) CHECK(ch.h_mu[i] == lin[idx] * fade[idx]);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j, ++idx)
      CHECK(ch.g_cross[i][j] == lin[idx] * fade[idx]);
}

TEST_CASE("placement laws: disk and annulus radii pass a KS test") {
  // Radii from the documented drawing rule at n = 1e4.
  const int n = 10000;
  Rng rng(5);
  std::vector<double> su_r, mu_r;
  const double R = 50.0, rmin = 20.0, rmax = 200.0;
  for (int i = 0; i < n; ++i) su_r.push_back(R * std::sqrt(rng.uniform01()));
  for (int i = 0; i < n; ++i)
    mu_r.push_back(
        std::sqrt(rmin * rmin + (rmax * rmax - rmin * rmin) * rng.uniform01()));

  double d_su = ks_statistic(su_r, [&](double r) { return r * r / (R * R); });
  double d_mu = ks_statistic(mu_r, [&](double r) {
    return (r * r - rmin * rmin) / (rmax * rmax - rmin * rmin);
  });
  CHECK(d_su < 0.05);
  CHECK(d_mu < 0.05);
}

TEST_CASE("fading: unit-mean exponential power") {
  Rng rng(6);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += rng.exponential1();
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("MU links are stochastically weaker than SU own links") {
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(5, 5);
  std::vector<double> su, mu;
  for (int s = 0; s < 100; ++s) {
    GeometryConfig geom;
    geom.seed = 1000 + s;
    ChannelState ch = generate_scenario(geom, chcfg, sp);
    su.insert(su.end(), ch.g_su_own.begin(), ch.g_su_own.end());
    mu.insert(mu.end(), ch.h_mu.begin(), ch.h_mu.end());
  }
  CHECK(median(mu) < median(su));
}

TEST_CASE("scheme names round-trip") {
  for (Scheme s : {Scheme::kGreedy, Scheme::kExhaustive, Scheme::kNonSpt,
                   Scheme::kThroughput})
    CHECK(scheme_from_name(scheme_name(s)) == s);
  CHECK_THROWS_AS(scheme_from_name("maxrate"), std::invalid_argument);
}

TEST_CASE("monte carlo: batch variant equals explicit derived seeds") {
  GeometryConfig geom;
  geom.seed = 7;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  std::vector<Scheme> schemes = {Scheme::kGreedy, Scheme::kNonSpt};

  MonteCarloResult batch = monte_carlo(4, geom, chcfg, sp, schemes, 1);
  std::vector<std::uint64_t> seeds;
  for (int t = 0; t < 4; ++t) seeds.push_back(mix_seed(7, t));
  MonteCarloResult expl = monte_carlo(seeds, geom, chcfg, sp, schemes, 1);

  REQUIRE(batch.rows.size() == expl.rows.size());
  for (std::size_t i = 0; i < batch.rows.size(); ++i)
    CHECK(rows_equal(batch.rows[i], expl.rows[i]));
}

TEST_CASE("monte carlo: aggregates ignore seed order, rows stay sorted") {
  GeometryConfig geom;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  std::vector<Scheme> schemes = {Scheme::kGreedy, Scheme::kNonSpt,
                                 Scheme::kThroughput};
  std::vector<std::uint64_t> seeds = {11, 12, 13, 14, 15};
  std::vector<std::uint64_t> shuffled = {14, 11, 15, 13, 12};

  MonteCarloResult a = monte_carlo(seeds, geom, chcfg, sp, schemes, 1);
  MonteCarloResult b = monte_carlo(shuffled, geom, chcfg, sp, schemes, 1);

  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    bool ordered =
        a.rows[i - 1].seed < a.rows[i].seed ||
        (a.rows[i - 1].seed == a.rows[i].seed &&
         static_cast<int>(a.rows[i - 1].scheme) <
             static_cast<int>(a.rows[i].scheme));
    CHECK(ordered);
  }
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(rows_equal(a.rows[i], b.rows[i]));  // same sorted content
  REQUIRE(a.aggregates.size() == b.aggregates.size());
  for (std::size_t i = 0; i < a.aggregates.size(); ++i) {
    CHECK(a.aggregates[i].scheme == b.aggregates[i].scheme);
    CHECK(a.aggregates[i].mean_ee == b.aggregates[i].mean_ee);
    CHECK(a.aggregates[i].stderr_ee == b.aggregates[i].stderr_ee);
    CHECK(a.aggregates[i].n_feasible == b.aggregates[i].n_feasible);
    CHECK(a.aggregates[i].n_infeasible == b.aggregates[i].n_infeasible);
  }
}

TEST_CASE("monte carlo: thread count cannot change any result") {
  GeometryConfig geom;
  geom.seed = 99;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  std::vector<Scheme> schemes = {Scheme::kGreedy, Scheme::kExhaustive,
                                 Scheme::kNonSpt, Scheme::kThroughput};
  MonteCarloResult one = monte_carlo(6, geom, chcfg, sp, schemes, 1);
  MonteCarloResult three = monte_carlo(6, geom, chcfg, sp, schemes, 3);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i)
    CHECK(rows_equal(one.rows[i], three.rows[i]));
  for (std::size_t i = 0; i < one.aggregates.size(); ++i) {
    CHECK(one.aggregates[i].mean_ee == three.aggregates[i].mean_ee);
    CHECK(one.aggregates[i].stderr_ee == three.aggregates[i].stderr_ee);
  }
}

TEST_CASE("monte carlo: greedy tracks exhaustive closely at the defaults") {
  GeometryConfig geom;
  geom.seed = 3;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  std::vector<Scheme> schemes = {Scheme::kGreedy, Scheme::kExhaustive};
  MonteCarloResult res = monte_carlo(20, geom, chcfg, sp, schemes, 0);

  const SchemeAggregate& g = res.aggregates[0];
  const SchemeAggregate& x = res.aggregates[1];
  REQUIRE(g.scheme == Scheme::kGreedy);
  REQUIRE(x.scheme == Scheme::kExhaustive);
  CHECK(g.n_feasible + g.n_infeasible == 20);
  CHECK(g.n_feasible == x.n_feasible);  // same instances, same feasibility
  REQUIRE(x.n_feasible > 0);
  CHECK(g.mean_ee >= x.mean_ee * 0.99);
  for (std::size_t i = 0; i + 1 < res.rows.size(); i += 2) {
    const SchemeRun& gr = res.rows[i];
    const SchemeRun& xr = res.rows[i + 1];
    REQUIRE(gr.seed == xr.seed);
    if (gr.feasible)  // the subset optimum can only beat the greedy pick
      CHECK(xr.ee >= gr.ee * (1.0 - 1e-9));
  }
}

TEST_CASE("monte carlo and scenario input validation") {
  GeometryConfig geom;
  ChannelConfig chcfg;
  SystemParams sp = shipped_params(geom.n_su, geom.n_mu);
  CHECK_THROWS_AS(monte_carlo({}, geom, chcfg, sp, {Scheme::kGreedy}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo(3, geom, chcfg, sp, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo(0, geom, chcfg, sp, {Scheme::kGreedy}, 1),
                  std::invalid_argument);

  GeometryConfig bad = geom;
  bad.mu_ring_min_m = 300.0;  // above the outer radius
  CHECK_THROWS_AS(generate_scenario(bad, chcfg, sp), std::invalid_argument);
  SystemParams wrong = shipped_params(2, 2);
  CHECK_THROWS_AS(generate_scenario(geom, chcfg, wrong),
                  std::invalid_argument);
}

}  // TEST_SUITE("scenario")
