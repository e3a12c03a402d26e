#include "spt/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spt/kernels.hpp"
#include "spt/rng.hpp"
#include "spt/selection.hpp"

namespace spt {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void GeometryConfig::validate() const {
  require(sc_radius_m > 0.0, "sc_radius must be positive");
  require(mu_ring_min_m > 0.0 && mu_ring_min_m < mu_ring_max_m,
          "mu_ring must satisfy 0 < min < max");
  require(n_su >= 1 && n_mu >= 0, "user counts out of range");
}

void ChannelConfig::validate() const {
  require(shadowing_sigma_db >= 0.0, "shadowing sigma must be nonnegative");
  require(penetration_loss_db >= 0.0, "penetration loss must be nonnegative");
  require(min_distance_m > 0.0, "minimum distance must be positive");
}

double pathloss_db(double distance_m, const ChannelConfig& cfg) {
  double d = std::max(distance_m, cfg.min_distance_m);
  return cfg.pathloss_intercept_db +
         cfg.pathloss_slope_db * std::log10(d * 1e-3);
}

ChannelState generate_scenario(const GeometryConfig& geom,
                               const ChannelConfig& chcfg,
                               const SystemParams& sp) {
  geom.validate();
  chcfg.validate();
  require(sp.n_su() == geom.n_su && sp.n_mu() == geom.n_mu,
          "generate_scenario: params/geometry user-count mismatch");

  Rng rng(geom.seed);
  const int n = geom.n_su, k = geom.n_mu;

  // Positions first (area-uniform radii), then one shadowing and one fading
  // draw per link, in a fixed order.
  std::vector<double> su_dist(n), mu_dist(k);
  for (int i = 0; i < n; ++i) {
    su_dist[i] = geom.sc_radius_m * std::sqrt(rng.uniform01());
    rng.uniform01();  // angle: drawn for uniform placement, distance-only model
  }
  const double r2min = geom.mu_ring_min_m * geom.mu_ring_min_m;
  const double r2max = geom.mu_ring_max_m * geom.mu_ring_max_m;
  for (int i = 0; i < k; ++i) {
    mu_dist[i] = std::sqrt(r2min + (r2max - r2min) * rng.uniform01());
    rng.uniform01();  // angle
  }

  // Loss in dB per link: SU own bands, MU links, then the cross matrix.
  std::vector<double> loss_db(n + k + std::size_t(k) * n);
  std::vector<double> fading(loss_db.size());
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i, ++idx) {
    loss_db[idx] = pathloss_db(su_dist[i], chcfg) +
                   rng.normal(chcfg.shadowing_sigma_db);
    fading[idx] = rng.exponential1();
  }
  const double mu_pen = chcfg.penetration_loss_db;
  const double su_pen = chcfg.penetration_mu_links_only
                            ? 0.0
                            : chcfg.penetration_loss_db;
  for (int i = 0; i < k; ++i, ++idx) {
    loss_db[idx] = pathloss_db(mu_dist[i], chcfg) +
                   rng.normal(chcfg.shadowing_sigma_db) + mu_pen;
    fading[idx] = rng.exponential1();
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j, ++idx) {
      loss_db[idx] = pathloss_db(su_dist[j], chcfg) +
                     rng.normal(chcfg.shadowing_sigma_db) + su_pen;
      fading[idx] = rng.exponential1();
    }
  }

  std::vector<double> linear(loss_db.size());
  kernels::active().db_to_linear(loss_db.data(), linear.data(), loss_db.size());

  ChannelState ch;
  ch.g_su_own.resize(n);
  ch.h_mu.resize(k);
  ch.g_cross.assign(k, std::vector<double>(n));
  idx = 0;
  for (int i = 0; i < n; ++i, ++idx) ch.g_su_own[i] = linear[idx] * fading[idx];
  for (int i = 0; i < k; ++i, ++idx) ch.h_mu[i] = linear[idx] * fading[idx];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j, ++idx)
      ch.g_cross[i][j] = linear[idx] * fading[idx];
  return ch;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kGreedy: return "greedy";
    case Scheme::kExhaustive: return "exhaustive";
    case Scheme::kNonSpt: return "non-spt";
    case Scheme::kThroughput: return "tput";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "greedy") return Scheme::kGreedy;
  if (name == "exhaustive") return Scheme::kExhaustive;
  if (name == "non-spt") return Scheme::kNonSpt;
  if (name == "tput") return Scheme::kThroughput;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

namespace {

SchemeRun run_scheme(Scheme scheme, std::uint64_t seed,
                     const GeometryConfig& geom, const SystemParams& sp,
                     const ChannelState& ch) {
  SchemeRun row;
  row.seed = seed;
  row.scheme = scheme;
  (void)geom;
  switch (scheme) {
    case Scheme::kGreedy:
    case Scheme::kExhaustive: {
      SelectionResult r = scheme == Scheme::kGreedy
                              ? greedy_select(sp, ch)
                              : exhaustive_select(sp, ch);
      if (r.status == SolveStatus::kOk) {
        row.feasible = r.outcome.feasible;
        row.ee = r.outcome.ee;
        row.rate = r.outcome.rate_total;
        row.power = r.outcome.power_total;
        row.psi_size = static_cast<int>(r.psi.size());
        row.dinkelbach_iters = r.outcome.dinkelbach_iters;
      }
      break;
    }
    case Scheme::kNonSpt: {
      EEOutcome out = non_spt_solve(sp, ch);
      row.feasible = out.feasible;
      row.ee = out.ee;
      row.rate = out.rate_total;
      row.power = out.power_total;
      row.dinkelbach_iters = out.dinkelbach_iters;
      break;
    }
    case Scheme::kThroughput: {
      ThroughputResult r = throughput_max_solve(sp, ch);
      if (r.status == SolveStatus::kOk) {
        row.feasible = r.outcome.feasible;
        row.ee = r.outcome.ee;
        row.rate = r.outcome.rate_total;
        row.power = r.outcome.power_total;
        row.psi_size = static_cast<int>(r.psi.size());
      }
      break;
    }
  }
  return row;
}

}  // namespace

MonteCarloResult monte_carlo(const std::vector<std::uint64_t>& seeds,
                             const GeometryConfig& geom,
                             const ChannelConfig& chcfg,
                             const SystemParams& sp,
                             const std::vector<Scheme>& schemes,
                             int max_threads) {
  geom.validate();
  chcfg.validate();
  sp.validate();
  if (seeds.empty()) throw std::invalid_argument("monte_carlo: no seeds");
  if (schemes.empty()) throw std::invalid_argument("monte_carlo: no schemes");

  const int trials = static_cast<int>(seeds.size());
  int workers = max_threads > 0
                    ? max_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, trials);

  std::vector<std::vector<SchemeRun>> per_trial(trials);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;

  auto work = [&]() {
    for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      try {
        GeometryConfig g = geom;
        g.seed = seeds[t];
        ChannelState ch = generate_scenario(g, chcfg, sp);
        auto& rows = per_trial[t];
        rows.reserve(schemes.size());
        for (Scheme s : schemes)
          rows.push_back(run_scheme(s, seeds[t], g, sp, ch));
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  MonteCarloResult res;
  for (auto& rows : per_trial)
    res.rows.insert(res.rows.end(), rows.begin(), rows.end());
  std::sort(res.rows.begin(), res.rows.end(),
            [](const SchemeRun& a, const SchemeRun& b) {
              if (a.seed != b.seed) return a.seed < b.seed;
              return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
            });

  // Value-sorted accumulation makes the aggregates independent of both the
  // seed order and the worker schedule.
  for (Scheme s : schemes) {
    SchemeAggregate agg;
    agg.scheme = s;
    std::vector<double> values;
    for (const SchemeRun& row : res.rows) {
      if (row.scheme != s) continue;
      if (row.feasible) values.push_back(row.ee); else ++agg.n_infeasible;
    }
    agg.n_feasible = static_cast<int>(values.size());
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      agg.mean_ee = sum / values.size();
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - agg.mean_ee) * (v - agg.mean_ee);
        agg.stderr_ee = std::sqrt(ss / (values.size() * (values.size() - 1.0)));
      }
    }
    res.aggregates.push_back(agg);
  }
  std::sort(res.aggregates.begin(), res.aggregates.end(),
            [](const SchemeAggregate& a, const SchemeAggregate& b) {
              return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
            });
  return res;
}

MonteCarloResult monte_carlo(int batch, const GeometryConfig& geom,
                             const ChannelConfig& chcfg, const SystemParams& sp,
                             const std::vector<Scheme>& schemes,
                             int max_threads) {
  if (batch < 1) throw std::invalid_argument("monte_carlo: batch must be >= 1");
  std::vector<std::uint64_t> seeds(batch);
  for (int t = 0; t < batch; ++t) seeds[t] = mix_seed(geom.seed, t);
  return monte_carlo(seeds, geom, chcfg, sp, schemes, max_threads);
}

}  // namespace spt
