// Experiment driver: single solves, parameter sweeps, and convergence
// traces over Monte Carlo scenario batches, emitting CSV files.

#include <charconv>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spt/experiment.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string::npos) end = text.size();
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return parts;
}

double parse_grid_value(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw spt::ConfigError("invalid --grid value '" + text + "'");
  return v;
}

int env_threads() {
  const char* raw = std::getenv("SPT_THREADS");
  if (!raw || !*raw) return 0;
  int v = 0;
  const char* last = raw + std::string(raw).size();
  auto [ptr, ec] = std::from_chars(raw, last, v);
  if (ec != std::errc() || ptr != last || v < 0)
    throw spt::ConfigError(std::string("invalid SPT_THREADS '") + raw + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-power trading experiment runner"};

  std::string mode = "solve";
  std::string config_path;
  std::string out_dir = ".";
  std::string schemes_text = "greedy,exhaustive,non-spt,tput";
  std::string grid_text;
  std::vector<std::string> overrides;
  int seeds = 200;
  std::uint64_t seed = 1;

  app.add_option("--mode", mode,
                 "solve | sweep-pmax | sweep-pc | convergence")
      ->capture_default_str();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_dir, "output directory for CSV files")
      ->capture_default_str();
  app.add_option("--seeds", seeds, "Monte Carlo batch size")
      ->capture_default_str();
  app.add_option("--seed", seed, "base seed (trial t derives from it)")
      ->capture_default_str();
  app.add_option("--schemes", schemes_text,
                 "comma list: greedy,exhaustive,non-spt,tput")
      ->capture_default_str();
  app.add_option("--grid", grid_text,
                 "comma list of sweep values (dBm / W / kbps by mode)");
  app.add_option("--set", overrides, "config override key=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    spt::ExperimentSpec spec;
    spec.mode = spt::mode_from_name(mode);
    if (!config_path.empty()) spec.config = spt::load_config(config_path);
    for (const std::string& assignment : overrides)
      spt::apply_override(spec.config, assignment);
    spec.out_dir = out_dir;
    spec.seeds = seeds;
    spec.seed = seed;
    spec.max_threads = env_threads();
    spec.schemes.clear();
    for (const std::string& name : split_commas(schemes_text)) {
      try {
        spec.schemes.push_back(spt::scheme_from_name(name));
      } catch (const std::exception& e) {
        throw spt::ConfigError(e.what());
      }
    }
    if (!grid_text.empty())
      for (const std::string& v : split_commas(grid_text))
        spec.grid.push_back(parse_grid_value(v));
    return spt::run_experiment(spec);
  } catch (const spt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
