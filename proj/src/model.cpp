#include "spt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spt/kernels.hpp"

namespace spt {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool all_positive_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return x > 0.0 && std::isfinite(x); });
}

double band_rate(double bw, double power, double gain, double noise) {
  if (bw < 0.0 || power < 0.0 || gain <= 0.0 || noise <= 0.0)
    throw std::domain_error("band rate: negative or non-positive input");
  if (bw == 0.0) {
    if (power > 0.0)
      throw std::domain_error("band rate: positive power on zero bandwidth");
    return 0.0;
  }
  return bw * std::log2(1.0 + power * gain / (bw * noise));
}

}  // namespace

void SystemParams::validate() const {
  require(p_max_sc > 0.0, "p_max_sc must be positive");
  require(p_circuit > 0.0, "p_circuit must be positive");
  require(pa_efficiency > 0.0 && pa_efficiency <= 1.0,
          "pa_efficiency must be in (0, 1]");
  require(noise_density > 0.0, "noise_density must be positive");
  require(r_sc_min >= 0.0, "r_sc_min must be nonnegative");
  require(!su_bandwidths.empty(), "at least one SU required");
  require(all_positive_finite(su_bandwidths), "SU bandwidths must be positive");
  require(mu_bandwidths.size() == mu_rate_floors.size(),
          "MU bandwidth/rate-floor size mismatch");
  require(all_positive_finite(mu_bandwidths), "MU bandwidths must be positive");
  require(all_positive_finite(mu_rate_floors), "MU rate floors must be positive");
}

void ChannelState::validate(const SystemParams& sp) const {
  require(n_su() == sp.n_su(), "channel/params SU count mismatch");
  require(n_mu() == sp.n_mu(), "channel/params MU count mismatch");
  require(all_positive_finite(g_su_own), "SU own-band gains must be positive");
  require(all_positive_finite(h_mu), "MU gains must be positive");
  require(static_cast<int>(g_cross.size()) == sp.n_mu(),
          "cross-gain row count mismatch");
  for (const auto& row : g_cross) {
    require(static_cast<int>(row.size()) == sp.n_su(),
            "cross-gain column count mismatch");
    require(all_positive_finite(row), "cross gains must be positive");
  }
}

bool Allocation::is_selected(int k) const {
  return std::find(selected.begin(), selected.end(), k) != selected.end();
}

double Allocation::transmit_power() const {
  double total =
      kernels::active().sum(p_su_own.data(), p_su_own.size());
  for (int k : selected) total += p_su_traded[k] + q_mu[k];
  return total;
}

double mu_rate(double bw_hz, double power_w, double gain, double noise_w_hz) {
  return band_rate(bw_hz, power_w, gain, noise_w_hz);
}

double su_rate_own(double power_w, double bw_hz, double gain,
                   double noise_w_hz) {
  return band_rate(bw_hz, power_w, gain, noise_w_hz);
}

double mu_power(double bw_hz, double rate_bps, double gain, double noise_w_hz) {
  if (bw_hz <= 0.0 || rate_bps < 0.0 || gain <= 0.0 || noise_w_hz <= 0.0)
    throw std::domain_error("mu_power: invalid input");
  return (std::exp2(rate_bps / bw_hz) - 1.0) * bw_hz * noise_w_hz / gain;
}

double total_rate(const Allocation& a, const ChannelState& ch,
                  const SystemParams& sp) {
  require(a.p_su_own.size() == sp.su_bandwidths.size() &&
              ch.n_su() == sp.n_su() && ch.n_mu() == sp.n_mu() &&
              a.q_mu.size() == sp.mu_bandwidths.size() &&
              a.w_mu.size() == a.q_mu.size() &&
              a.b_traded.size() == a.q_mu.size() &&
              a.p_su_traded.size() == a.q_mu.size() &&
              a.best_su.size() == a.q_mu.size(),
          "total_rate: dimension mismatch");
  double rate = kernels::active().rate_sum(
      a.p_su_own.data(), ch.g_su_own.data(), sp.su_bandwidths.data(),
      sp.noise_density, a.p_su_own.size());
  for (int k : a.selected) {
    if (a.b_traded[k] <= 0.0) continue;
    rate += band_rate(a.b_traded[k], a.p_su_traded[k],
                      ch.g_cross[k][a.best_su[k]], sp.noise_density);
  }
  return rate;
}

double total_power(const Allocation& a, const SystemParams& sp) {
  require(a.p_su_own.size() == sp.su_bandwidths.size() &&
              a.q_mu.size() == sp.mu_bandwidths.size(),
          "total_power: dimension mismatch");
  return a.transmit_power() / sp.pa_efficiency + sp.p_circuit;
}

EEOutcome summarize(const Allocation& a, const ChannelState& ch,
                    const SystemParams& sp) {
  EEOutcome out;
  out.rate_total = total_rate(a, ch, sp);
  out.power_total = total_power(a, sp);
  out.ee = out.rate_total / out.power_total;
  out.rate_slack = out.rate_total - sp.r_sc_min;
  out.power_slack = sp.p_max_sc - a.transmit_power();
  out.feasible = out.power_slack >= -1e-6 * sp.p_max_sc &&
                 out.rate_slack >= -1e-6 * std::max(sp.r_sc_min, 1.0);
  return out;
}

std::vector<int> best_su_map(const ChannelState& ch) {
  std::vector<int> map(ch.n_mu());
  for (int k = 0; k < ch.n_mu(); ++k) {
    const auto& row = ch.g_cross[k];
    map[k] = static_cast<int>(std::max_element(row.begin(), row.end()) -
                              row.begin());  // first max wins ties
  }
  return map;
}

WaterfillResult rate_max_waterfill(const std::vector<double>& gains,
                                   const std::vector<double>& bands,
                                   double noise_w_hz, double budget_w) {
  require(gains.size() == bands.size(), "waterfill: size mismatch");
  require(budget_w >= 0.0 && noise_w_hz > 0.0, "waterfill: invalid input");
  const std::size_t n = gains.size();
  WaterfillResult res;
  res.powers.assign(n, 0.0);
  if (n == 0) return res;

  // Activate bands in order of increasing noise floor n0/g until the common
  // level drops below the next floor; the level then follows in closed form.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return noise_w_hz / gains[i] < noise_w_hz / gains[j];
  });
  double cum_b = 0.0, cum_ba = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t i = order[m];
    cum_b += bands[i];
    cum_ba += bands[i] * (noise_w_hz / gains[i]);
    double level = (budget_w + cum_ba) / cum_b;
    if (m + 1 == n || level <= noise_w_hz / gains[order[m + 1]]) {
      res.level = level;
      break;
    }
  }
  const auto& ops = kernels::active();
  ops.waterfill(gains.data(), bands.data(), res.level, noise_w_hz,
                res.powers.data(), n);
  res.rate = ops.rate_sum(res.powers.data(), gains.data(), bands.data(),
                          noise_w_hz, n);
  return res;
}

FeasibilityReport check_feasible(const SystemParams& sp, const ChannelState& ch,
                                 const std::vector<int>& psi) {
  FeasibilityReport rep;
  for (int k : psi) {
    if (k < 0 || k >= sp.n_mu())
      throw std::invalid_argument("check_feasible: MU index out of range");
    // Full bandwidth minimizes the power needed for the MU's rate floor.
    rep.mu_power_w += mu_power(sp.mu_bandwidths[k], sp.mu_rate_floors[k],
                               ch.h_mu[k], sp.noise_density);
  }
  rep.power_margin_w = sp.p_max_sc - rep.mu_power_w;
  if (rep.power_margin_w < 0.0) {
    rep.rate_margin_bps = -sp.r_sc_min;
    return rep;
  }
  rep.own_rate_bps = rate_max_waterfill(ch.g_su_own, sp.su_bandwidths,
                                        sp.noise_density, rep.power_margin_w)
                         .rate;
  rep.rate_margin_bps = rep.own_rate_bps - sp.r_sc_min;
  rep.feasible = rep.rate_margin_bps >= 0.0;
  return rep;
}

}  // namespace spt
