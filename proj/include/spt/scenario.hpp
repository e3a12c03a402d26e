#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spt/model.hpp"

// Random scenario generation (geometry, path loss, shadowing, Rayleigh
// fading) and Monte Carlo orchestration over the four compared schemes.

namespace spt {

struct GeometryConfig {
  double sc_radius_m = 50.0;    // SUs uniform in this disk
  double mu_ring_min_m = 20.0;  // MUs uniform in the annulus
  double mu_ring_max_m = 200.0;
  int n_su = 5;
  int n_mu = 5;
  std::uint64_t seed = 1;
  void validate() const;
};

struct ChannelConfig {
  double pathloss_intercept_db = 128.1;
  double pathloss_slope_db = 37.6;  // per log10 of km
  double shadowing_sigma_db = 8.0;
  double penetration_loss_db = 20.0;
  bool penetration_mu_links_only = true;  // SUs are indoor with the SC BS
  double min_distance_m = 1.0;            // clamp against PL underflow
  void validate() const;
};

// 128.1 + 37.6*log10(d/1km), distance clamped to min_distance_m.
double pathloss_db(double distance_m, const ChannelConfig&);

// Deterministic under a fixed geometry seed; the draw order (positions, then
// one shadowing + one fading draw per link) is part of the contract.
ChannelState generate_scenario(const GeometryConfig&, const ChannelConfig&,
                               const SystemParams&);

enum class Scheme { kGreedy = 0, kExhaustive, kNonSpt, kThroughput };
const char* scheme_name(Scheme);
Scheme scheme_from_name(const std::string&);  // throws std::invalid_argument

struct SchemeRun {
  std::uint64_t seed = 0;  // derived per-trial seed
  Scheme scheme{};
  bool feasible = false;
  double ee = 0;     // bit/J
  double rate = 0;   // bit/s
  double power = 0;  // W
  int psi_size = 0;
  int dinkelbach_iters = 0;
};

struct SchemeAggregate {
  Scheme scheme{};
  double mean_ee = 0;    // over feasible trials
  double stderr_ee = 0;  // standard error of the mean
  int n_feasible = 0;
  int n_infeasible = 0;
};

struct MonteCarloResult {
  std::vector<SchemeRun> rows;              // sorted by (seed, scheme)
  std::vector<SchemeAggregate> aggregates;  // sorted by scheme
};

// Explicit trial seeds; aggregates are invariant under seed-list permutation.
MonteCarloResult monte_carlo(const std::vector<std::uint64_t>& seeds,
                             const GeometryConfig&, const ChannelConfig&,
                             const SystemParams&,
                             const std::vector<Scheme>& schemes,
                             int max_threads = 0);

// Batch variant: trial seeds derived as mix_seed(geom.seed, 0..batch-1).
MonteCarloResult monte_carlo(int batch, const GeometryConfig&,
                             const ChannelConfig&, const SystemParams&,
                             const std::vector<Scheme>& schemes,
                             int max_threads = 0);

}  // namespace spt
