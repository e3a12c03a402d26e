#include "spt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "spt/allocator.hpp"
#include "spt/rng.hpp"
#include "spt/units.hpp"

namespace spt {

namespace {

// ---------- key=value parsing ----------

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& anchor) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(anchor + "invalid number '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& anchor) {
  int v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(anchor + "invalid integer '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& anchor) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw ConfigError(anchor + "invalid boolean '" + text +
                    "' (use 0/1/true/false)");
}

void set_key(RawConfig& cfg, const std::string& key, const std::string& value,
             const std::string& anchor) {
  struct DoubleKey { const char* name; double RawConfig::*field; };
  static const DoubleKey doubles[] = {
      {"p_max_dbm", &RawConfig::p_max_dbm},
      {"p_circuit_w", &RawConfig::p_circuit_w},
      {"pa_efficiency", &RawConfig::pa_efficiency},
      {"noise_dbm_per_hz", &RawConfig::noise_dbm_per_hz},
      {"r_sc_min_kbps", &RawConfig::r_sc_min_kbps},
      {"r_mc_kbps", &RawConfig::r_mc_kbps},
      {"w_mc_khz", &RawConfig::w_mc_khz},
      {"b_sc_khz", &RawConfig::b_sc_khz},
      {"sc_radius_m", &RawConfig::sc_radius_m},
      {"mu_ring_min_m", &RawConfig::mu_ring_min_m},
      {"mu_ring_max_m", &RawConfig::mu_ring_max_m},
      {"mc_distance_m", &RawConfig::mc_distance_m},
      {"pathloss_intercept_db", &RawConfig::pathloss_intercept_db},
      {"pathloss_slope_db", &RawConfig::pathloss_slope_db},
      {"shadowing_sigma_db", &RawConfig::shadowing_sigma_db},
      {"penetration_loss_db", &RawConfig::penetration_loss_db},
      {"min_distance_m", &RawConfig::min_distance_m},
  };
  for (const auto& d : doubles) {
    if (key == d.name) {
      cfg.*(d.field) = parse_double(value, anchor);
      return;
    }
  }
  if (key == "n_su") { cfg.n_su = parse_int(value, anchor); return; }
  if (key == "n_mu") { cfg.n_mu = parse_int(value, anchor); return; }
  if (key == "penetration_mu_links_only") {
    cfg.penetration_mu_links_only = parse_bool(value, anchor);
    return;
  }
  throw ConfigError(anchor + "unknown key '" + key + "'");
}

void apply_line(RawConfig& cfg, const std::string& line,
                const std::string& anchor) {
  std::string body = line;
  if (std::size_t hash = body.find('#'); hash != std::string::npos)
    body.erase(hash);
  body = trim(body);
  if (body.empty()) return;
  std::size_t eq = body.find('=');
  if (eq == std::string::npos)
    throw ConfigError(anchor + "expected key=value, got '" + body + "'");
  std::string key = trim(body.substr(0, eq));
  std::string value = trim(body.substr(eq + 1));
  if (key.empty()) throw ConfigError(anchor + "empty key");
  set_key(cfg, key, value, anchor);
}

// ---------- CSV formatting ----------

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt(std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt(int v) {
  char buf[16];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------- sweep plumbing ----------

struct SweepRow {
  SchemeRun run;
  double param = 0.0;
};

void run_point(const ExperimentSpec& spec, const RawConfig& cfg, double param,
               const std::vector<std::uint64_t>& seeds,
               std::vector<SweepRow>& rows) {
  SystemParams sp = make_params(cfg);
  GeometryConfig geom = make_geometry(cfg, spec.seed);
  ChannelConfig chcfg = make_channel(cfg);
  MonteCarloResult mc = monte_carlo(seeds, geom, chcfg, sp, spec.schemes,
                                    spec.max_threads);
  for (const SchemeRun& r : mc.rows) rows.push_back({r, param});
}

int run_sweep(const ExperimentSpec& spec) {
  std::vector<double> grid;
  double RawConfig::*swept = nullptr;
  switch (spec.mode) {
    case Mode::kSolve:
      grid = {spec.config.p_max_dbm};  // param_value labels the fixed budget
      break;
    case Mode::kSweepPmax:
      grid = spec.grid;
      swept = &RawConfig::p_max_dbm;
      break;
    case Mode::kSweepPc:
      grid = spec.grid;
      swept = &RawConfig::p_circuit_w;
      break;
    case Mode::kConvergence:
      throw std::logic_error("run_sweep called in convergence mode");
  }

  std::vector<std::uint64_t> seeds(spec.seeds);
  for (int t = 0; t < spec.seeds; ++t) seeds[t] = mix_seed(spec.seed, t);

  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * seeds.size() * spec.schemes.size());
  for (double g : grid) {
    RawConfig cfg = spec.config;
    if (swept) cfg.*swept = g;
    run_point(spec, cfg, g, seeds, rows);
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.run.seed != b.run.seed) return a.run.seed < b.run.seed;
    if (a.run.scheme != b.run.scheme)
      return static_cast<int>(a.run.scheme) < static_cast<int>(b.run.scheme);
    return a.param < b.param;
  });

  std::string raw =
      "seed,scheme,param_value,ee_bits_per_joule,rate_bps,power_w,"
      "psi_size,dinkelbach_iters,feasible\n";
  for (const SweepRow& row : rows) {
    const SchemeRun& r = row.run;
    raw += fmt(r.seed);
    raw += ',';
    raw += scheme_name(r.scheme);
    raw += ',';
    raw += fmt(row.param);
    raw += ',';
    raw += fmt(r.ee);
    raw += ',';
    raw += fmt(r.rate);
    raw += ',';
    raw += fmt(r.power);
    raw += ',';
    raw += fmt(r.psi_size);
    raw += ',';
    raw += fmt(r.dinkelbach_iters);
    raw += ',';
    raw += r.feasible ? '1' : '0';
    raw += '\n';
  }

  // Aggregate per (scheme, param); value-sorted sums keep the result
  // independent of row order.
  struct Agg { std::vector<double> values; int infeasible = 0; };
  std::map<std::pair<int, double>, Agg> cells;
  for (Scheme s : spec.schemes)
    for (double g : grid) cells[{static_cast<int>(s), g}];
  for (const SweepRow& row : rows) {
    Agg& cell = cells[{static_cast<int>(row.run.scheme), row.param}];
    if (row.run.feasible) cell.values.push_back(row.run.ee);
    else ++cell.infeasible;
  }
  std::string agg =
      "scheme,param_value,mean_ee_bits_per_joule,stderr_ee_bits_per_joule,"
      "n_feasible,n_infeasible\n";
  for (auto& [key, cell] : cells) {
    double mean = 0.0, se = 0.0;
    const std::size_t n = cell.values.size();
    if (n > 0) {
      std::sort(cell.values.begin(), cell.values.end());
      double sum = 0.0;
      for (double v : cell.values) sum += v;
      mean = sum / static_cast<double>(n);
      if (n > 1) {
        double ss = 0.0;
        for (double v : cell.values) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (static_cast<double>(n) * (n - 1.0)));
      }
    }
    agg += scheme_name(static_cast<Scheme>(key.first));
    agg += ',';
    agg += fmt(key.second);
    agg += ',';
    agg += fmt(mean);
    agg += ',';
    agg += fmt(se);
    agg += ',';
    agg += fmt(static_cast<int>(n));
    agg += ',';
    agg += fmt(cell.infeasible);
    agg += '\n';
  }

  std::filesystem::path dir(spec.out_dir);
  write_file(dir / "raw.csv", raw);
  write_file(dir / "aggregate.csv", agg);
  return 0;
}

int run_convergence(const ExperimentSpec& spec) {
  std::vector<double> grid = spec.grid;
  if (grid.empty()) grid = {500.0, 700.0, 900.0};

  std::string csv = "r_mc_kbps,iter,q_bits_per_joule,t_value_bps\n";
  for (double r_kbps : grid) {
    RawConfig cfg = spec.config;
    cfg.r_mc_kbps = r_kbps;
    SystemParams sp = make_params(cfg);
    GeometryConfig geom = make_geometry(cfg, spec.seed);
    ChannelState ch = generate_scenario(geom, make_channel(cfg), sp);
    std::vector<int> psi(sp.n_mu());
    for (int k = 0; k < sp.n_mu(); ++k) psi[k] = k;
    DinkelbachResult res = dinkelbach_solve(psi, sp, ch);
    if (res.status != SolveStatus::kOk) continue;  // no trace to report
    for (std::size_t i = 0; i < res.outcome.t_trace.size(); ++i) {
      csv += fmt(r_kbps);
      csv += ',';
      csv += fmt(static_cast<int>(i + 1));
      csv += ',';
      csv += fmt(res.outcome.q_trace[i]);
      csv += ',';
      csv += fmt(res.outcome.t_trace[i]);
      csv += '\n';
    }
  }
  write_file(std::filesystem::path(spec.out_dir) / "convergence.csv", csv);
  return 0;
}

}  // namespace

// ---------- public API ----------

RawConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RawConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    apply_line(cfg, line, path + ":" + std::to_string(lineno) + ": ");
  }
  return cfg;
}

void apply_override(RawConfig& cfg, const std::string& assignment) {
  apply_line(cfg, assignment, "override '" + assignment + "': ");
}

SystemParams make_params(const RawConfig& cfg) {
  if (cfg.n_su < 1 || cfg.n_mu < 0)
    throw ConfigError("user counts out of range (n_su >= 1, n_mu >= 0)");
  SystemParams sp;
  sp.p_max_sc = dbm_to_watt(cfg.p_max_dbm);
  sp.p_circuit = cfg.p_circuit_w;
  sp.pa_efficiency = cfg.pa_efficiency;
  sp.noise_density = dbm_to_watt(cfg.noise_dbm_per_hz);
  sp.r_sc_min = cfg.r_sc_min_kbps * 1e3;
  sp.su_bandwidths.assign(cfg.n_su, cfg.b_sc_khz * 1e3);
  sp.mu_bandwidths.assign(cfg.n_mu, cfg.w_mc_khz * 1e3);
  sp.mu_rate_floors.assign(cfg.n_mu, cfg.r_mc_kbps * 1e3);
  try {
    sp.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return sp;
}

GeometryConfig make_geometry(const RawConfig& cfg, std::uint64_t seed) {
  GeometryConfig geom;
  geom.sc_radius_m = cfg.sc_radius_m;
  geom.mu_ring_min_m = cfg.mu_ring_min_m;
  geom.mu_ring_max_m = cfg.mu_ring_max_m;
  geom.n_su = cfg.n_su;
  geom.n_mu = cfg.n_mu;
  geom.seed = seed;
  try {
    geom.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return geom;
}

ChannelConfig make_channel(const RawConfig& cfg) {
  ChannelConfig chcfg;
  chcfg.pathloss_intercept_db = cfg.pathloss_intercept_db;
  chcfg.pathloss_slope_db = cfg.pathloss_slope_db;
  chcfg.shadowing_sigma_db = cfg.shadowing_sigma_db;
  chcfg.penetration_loss_db = cfg.penetration_loss_db;
  chcfg.penetration_mu_links_only = cfg.penetration_mu_links_only;
  chcfg.min_distance_m = cfg.min_distance_m;
  try {
    chcfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return chcfg;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kSolve: return "solve";
    case Mode::kSweepPmax: return "sweep-pmax";
    case Mode::kSweepPc: return "sweep-pc";
    case Mode::kConvergence: return "convergence";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "solve") return Mode::kSolve;
  if (name == "sweep-pmax") return Mode::kSweepPmax;
  if (name == "sweep-pc") return Mode::kSweepPc;
  if (name == "convergence") return Mode::kConvergence;
  throw ConfigError("unknown mode '" + name +
                    "' (expected solve|sweep-pmax|sweep-pc|convergence)");
}

void ExperimentSpec::validate() const {
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (schemes.empty()) throw ConfigError("at least one scheme is required");
  if ((mode == Mode::kSweepPmax || mode == Mode::kSweepPc) && grid.empty())
    throw ConfigError(std::string("mode ") + mode_name(mode) +
                      " requires a nonempty --grid");
  if (mode == Mode::kSweepPc)
    for (double g : grid)
      if (!(g > 0.0)) throw ConfigError("sweep-pc grid values must be > 0 W");
  std::vector<Scheme> sorted = schemes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("duplicate scheme in --schemes");
}

int run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  if (spec.mode == Mode::kConvergence) return run_convergence(spec);
  return run_sweep(spec);
}

}  // namespace spt
