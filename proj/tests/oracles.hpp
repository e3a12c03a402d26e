#pragma once

#include <functional>
#include <vector>

#include "spt/model.hpp"

// Test-side reference implementations, deliberately independent of the
// library's closed forms: bisection instead of progressive fills, grid
// refinement instead of Lambert/KKT solutions.

namespace spt::test {

// 1-D maximizer of a unimodal function by golden-section search.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int iters = 200);

struct BisectFill {
  double level = 0;
  double rate = 0;
  std::vector<double> powers;
};

// Rate-maximizing water-fill of `budget` over parallel bands, found by
// bisection on the water level.
BisectFill bisect_waterfill(const std::vector<double>& gains,
                            const std::vector<double>& bands, double n0,
                            double budget);

// Best system EE of a K=1, N=1 instance by refining grid search over
// (w, p_own, p_traded), including the no-trade alternative.
double grid_ee_k1n1(const SystemParams& sp, const ChannelState& ch);

// Best system EE of a K=1, N=2 instance when the traded band may be SPLIT
// between both SUs (share theta to the first): grid over (w, theta) with a
// golden-section search over total transmit power and an inner water-fill.
double split_ee_k1n2(const SystemParams& sp, const ChannelState& ch);

// Best trading efficiency of MU k by refining 2-D grid over (w, p_traded).
double grid_trading_ee(int k, const SystemParams& sp, const ChannelState& ch);

}  // namespace spt::test
