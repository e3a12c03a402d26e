#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spt/model.hpp"
#include "spt/scenario.hpp"

namespace spt {

// ---------- configuration ----------

// Configuration problem (bad key, malformed value, invalid combination).
// Messages carry a "<file>:<line>:" anchor when they come from a file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration at boundary units: dBm for powers, kHz for
// bandwidths, kbit/s for rates, meters and dB as labeled. Defaults are the
// shipped operating point.
struct RawConfig {
  double p_max_dbm = 30.0;          // SC transmit power budget
  double p_circuit_w = 2.0;         // static circuit power [W]
  double pa_efficiency = 0.38;      // power-amplifier efficiency in (0,1]
  double noise_dbm_per_hz = -174.0; // noise spectral density
  double r_sc_min_kbps = 1000.0;    // SC own-traffic rate floor
  double r_mc_kbps = 700.0;         // per-MU rate floor
  double w_mc_khz = 240.0;          // tradable bandwidth per MU band
  double b_sc_khz = 180.0;          // SC band per SU
  int n_su = 5;
  int n_mu = 5;
  double sc_radius_m = 50.0;
  double mu_ring_min_m = 20.0;
  double mu_ring_max_m = 200.0;
  double mc_distance_m = 500.0;     // informational only; no formula uses it
  double pathloss_intercept_db = 128.1;
  double pathloss_slope_db = 37.6;
  double shadowing_sigma_db = 8.0;
  double penetration_loss_db = 20.0;
  bool penetration_mu_links_only = true;
  double min_distance_m = 1.0;
};

// Parses a key=value file: '#' starts a comment, blank lines are skipped,
// whitespace around key and value is trimmed. Unknown keys or malformed
// values throw ConfigError anchored as "<path>:<line>: <message>".
RawConfig load_config(const std::string& path);

// Applies one "key=value" override (e.g. from the command line).
void apply_override(RawConfig& cfg, const std::string& assignment);

// Boundary-unit -> SI conversion.
SystemParams make_params(const RawConfig& cfg);
GeometryConfig make_geometry(const RawConfig& cfg, std::uint64_t seed);
ChannelConfig make_channel(const RawConfig& cfg);

// ---------- experiment runner ----------

enum class Mode { kSolve, kSweepPmax, kSweepPc, kConvergence };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);  // throws ConfigError

struct ExperimentSpec {
  Mode mode = Mode::kSolve;
  RawConfig config;
  std::vector<double> grid;  // dBm (sweep-pmax), W (sweep-pc), kbps (convergence)
  int seeds = 200;           // Monte Carlo batch size
  std::uint64_t seed = 1;    // base seed; trial t uses mix_seed(seed, t)
  std::vector<Scheme> schemes = {Scheme::kGreedy, Scheme::kExhaustive,
                                 Scheme::kNonSpt, Scheme::kThroughput};
  std::string out_dir = ".";
  int max_threads = 0;       // 0 = machine parallelism

  void validate() const;  // throws ConfigError
};

// Runs the experiment and writes CSV files into spec.out_dir:
//   solve / sweep-* : raw.csv + aggregate.csv
//   convergence     : convergence.csv
// Infeasible seeds become feasible=0 rows; the run still succeeds.
// Returns 0 on success; throws ConfigError on bad specs and
// std::runtime_error on I/O failure.
int run_experiment(const ExperimentSpec& spec);

}  // namespace spt
