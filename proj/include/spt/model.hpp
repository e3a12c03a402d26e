#pragma once

#include <vector>

// System model for a small cell (SC) that serves its own subscribers (SUs) on
// licensed bands and can acquire extra bandwidth from macro-cell users (MUs)
// by taking over their uplink service: for each selected MU k the SC spends
// power q_mu[k] to carry the MU's rate floor on bandwidth w_mu[k], and gets
// the remainder b_traded[k] of the MU band for the best-placed SU.

namespace spt {

struct SystemParams {
  double p_max_sc = 0;       // W, SC transmit power budget
  double p_circuit = 0;      // W, SC circuit power
  double pa_efficiency = 0;  // power-amplifier efficiency, in (0, 1]
  double noise_density = 0;  // W/Hz, one-sided noise PSD
  double r_sc_min = 0;       // bit/s, SC sum-rate floor (0 disables it)
  std::vector<double> su_bandwidths;   // Hz, size N
  std::vector<double> mu_bandwidths;   // Hz, size K
  std::vector<double> mu_rate_floors;  // bit/s, size K, strictly positive

  int n_su() const { return static_cast<int>(su_bandwidths.size()); }
  int n_mu() const { return static_cast<int>(mu_bandwidths.size()); }
  void validate() const;  // throws std::invalid_argument
};

struct ChannelState {
  std::vector<double> g_su_own;  // size N: SU n power gain on its own band
  std::vector<double> h_mu;      // size K: MU k power gain to the MC
  std::vector<std::vector<double>> g_cross;  // [k][n]: SU n gain on MU k's band

  int n_su() const { return static_cast<int>(g_su_own.size()); }
  int n_mu() const { return static_cast<int>(h_mu.size()); }
  void validate(const SystemParams& sp) const;
};

struct Allocation {
  std::vector<double> p_su_own;    // W, size N
  std::vector<double> p_su_traded; // W, size K (zero for unselected MUs)
  std::vector<double> q_mu;        // W, size K (zero for unselected MUs)
  std::vector<double> w_mu;        // Hz, size K: MU-serving bandwidth
  std::vector<double> b_traded;    // Hz, size K: bandwidth handed to the SU
  std::vector<int> selected;       // sorted MU indices (the set Psi)
  std::vector<int> best_su;        // size K: receiving SU on each MU band

  bool is_selected(int k) const;
  double transmit_power() const;   // W: sum of all SC transmit powers
};

struct EEOutcome {
  double ee = 0;           // bit/J
  double rate_total = 0;   // bit/s, SC sum rate
  double power_total = 0;  // W, transmit/efficiency + circuit
  double rate_slack = 0;   // bit/s, rate_total - r_sc_min
  double power_slack = 0;  // W, p_max_sc - transmit power
  int dinkelbach_iters = 0;
  bool feasible = false;
  std::vector<double> q_trace;  // energy-efficiency iterate per outer step
  std::vector<double> t_trace;  // subtractive objective per outer step
};

struct FeasibilityReport {
  bool feasible = false;
  double mu_power_w = 0;      // minimal power to carry all selected MU floors
  double power_margin_w = 0;  // p_max_sc - mu_power_w
  double own_rate_bps = 0;    // best own-band rate with the leftover budget
  double rate_margin_bps = 0; // own_rate_bps - r_sc_min
};

struct WaterfillResult {
  double level = 0;             // W/Hz
  double rate = 0;              // bit/s
  std::vector<double> powers;   // W
};

// Shannon rate of one band: bw * log2(1 + power*gain/(bw*noise)).
// bw = 0 is valid only with power = 0 (returns 0); negative inputs,
// non-positive gain/noise, or power on zero bandwidth throw std::domain_error.
double mu_rate(double bw_hz, double power_w, double gain, double noise_w_hz);
double su_rate_own(double power_w, double bw_hz, double gain, double noise_w_hz);

// Power needed to carry rate_bps on bw_hz: (2^(rate/bw) - 1) * bw * noise/gain.
double mu_power(double bw_hz, double rate_bps, double gain, double noise_w_hz);

// SC sum rate / total consumed power. Throw std::invalid_argument on
// dimension mismatch between the allocation, channel, and parameters.
double total_rate(const Allocation&, const ChannelState&, const SystemParams&);
double total_power(const Allocation&, const SystemParams&);

// Rate/power/slack summary of an allocation (traces and iters left empty).
EEOutcome summarize(const Allocation&, const ChannelState&, const SystemParams&);

// Per-MU index of the SU with the largest cross gain; ties -> lowest index.
std::vector<int> best_su_map(const ChannelState&);

// Exact rate-maximizing water-filling of `budget_w` over parallel bands.
WaterfillResult rate_max_waterfill(const std::vector<double>& gains,
                                   const std::vector<double>& bands,
                                   double noise_w_hz, double budget_w);

// Conservative screen: feasible=true guarantees the MU set can be served
// within budget while meeting the SC rate floor (it ignores traded-band rate,
// so a false verdict may still be solvable by the full optimizer).
FeasibilityReport check_feasible(const SystemParams&, const ChannelState&,
                                 const std::vector<int>& psi);

}  // namespace spt
