#pragma once

#include <cmath>

#include "spt/model.hpp"
#include "spt/rng.hpp"

// Shared random-instance builders for unit and acceptance tests.

namespace spt::test {

// Shipped operating point: 30 dBm budget, 2 W circuit power, 1 Mbit/s SC
// floor, 700 kbit/s MU floors on 240 kHz bands, 180 kHz SU bands.
inline SystemParams shipped_params(int n_su, int n_mu) {
  SystemParams sp;
  sp.p_max_sc = 1.0;
  sp.p_circuit = 2.0;
  sp.pa_efficiency = 0.38;
  sp.noise_density = 1e-3 * std::pow(10.0, -17.4);
  sp.r_sc_min = 1e6;
  sp.su_bandwidths.assign(n_su, 180e3);
  sp.mu_bandwidths.assign(n_mu, 240e3);
  sp.mu_rate_floors.assign(n_mu, 700e3);
  return sp;
}

// Small synthetic instance with log-uniform gains around realistic indoor
// magnitudes; bandwidths/powers at the shipped operating point's scale.
inline void random_instance(Rng& rng, int n_su, int n_mu, SystemParams& sp,
                            ChannelState& ch, double r_sc_min = 0.0) {
  sp = SystemParams{};
  sp.p_max_sc = 1.0;
  sp.p_circuit = 2.0;
  sp.pa_efficiency = 0.38;
  sp.noise_density = 1e-3 * std::pow(10.0, -17.4);
  sp.r_sc_min = r_sc_min;
  sp.su_bandwidths.assign(n_su, 180e3);
  sp.mu_bandwidths.assign(n_mu, 240e3);
  sp.mu_rate_floors.clear();
  for (int k = 0; k < n_mu; ++k)
    sp.mu_rate_floors.push_back(rng.uniform(100e3, 1.2e6));

  auto gain = [&](double lo_exp, double hi_exp) {
    return std::pow(10.0, rng.uniform(lo_exp, hi_exp));
  };
  ch = ChannelState{};
  for (int n = 0; n < n_su; ++n) ch.g_su_own.push_back(gain(-12.0, -8.0));
  for (int k = 0; k < n_mu; ++k) ch.h_mu.push_back(gain(-13.0, -9.0));
  ch.g_cross.assign(n_mu, {});
  for (int k = 0; k < n_mu; ++k)
    for (int n = 0; n < n_su; ++n) ch.g_cross[k].push_back(gain(-12.0, -8.0));
}

}  // namespace spt::test
