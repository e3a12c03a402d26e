#include "spt/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spt/lambert.hpp"

namespace spt {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kE = 2.718281828459045;
constexpr double kNegInvE = -0.36787944117144233;
constexpr double kRelaxedBudget = 1e12;  // W, stands in for "no C1"

// Candidate order for the greedy loops: descending trading EE, index asc.
std::vector<TradingEEResult> ranked_trades(const SystemParams& sp,
                                           const ChannelState& ch) {
  std::vector<TradingEEResult> trades(sp.n_mu());
  for (int k = 0; k < sp.n_mu(); ++k) trades[k] = trading_ee(k, sp, ch);
  std::sort(trades.begin(), trades.end(),
            [](const TradingEEResult& a, const TradingEEResult& b) {
              if (a.trading_ee != b.trading_ee)
                return a.trading_ee > b.trading_ee;
              return a.mu_index < b.mu_index;
            });
  return trades;
}

void adopt(SelectionResult& res, std::vector<int> psi, DinkelbachResult&& d) {
  res.psi = std::move(psi);
  res.ee = d.outcome.ee;
  res.alloc = std::move(d.alloc);
  res.outcome = std::move(d.outcome);
  res.duals = d.duals;
}

}  // namespace

TradingEEResult trading_ee(int k, const SystemParams& sp,
                           const ChannelState& ch) {
  if (k < 0 || k >= sp.n_mu())
    throw std::invalid_argument("trading_ee: MU index out of range");
  const double n0 = sp.noise_density;
  const double xi = sp.pa_efficiency;
  const double w_cap = sp.mu_bandwidths[k];
  const double r_k = sp.mu_rate_floors[k];
  const double h = ch.h_mu[k];
  const auto& row = ch.g_cross[k];
  const double g = *std::max_element(row.begin(), row.end());

  TradingEEResult res;
  res.mu_index = k;

  // Dinkelbach on the single-band ratio; each argmax is closed-form.
  // T(ee) = max_{w,p} [ b*log2(1+p*g/(b*n0)) - (ee/xi)*(p + q_k(w)) ].
  struct Candidate {
    double w, p, q, rate, cost, t;
  };
  auto argmax = [&](double ee) -> Candidate {
    double beta = ee / xi;
    double level = 1.0 / (beta * kLn2);
    double ptil = std::max(level - n0 / g, 0.0);
    double cgain = std::log2(1.0 + ptil * g / n0) - beta * ptil;
    double w = w_cap;
    if (cgain > 0.0) {
      double arg = (cgain * h / (beta * n0) - 1.0) / kE;
      if (arg < kNegInvE) arg = kNegInvE;
      double denom = lambert_w0(arg) + 1.0;
      if (denom > 0.0) w = std::min(r_k * kLn2 / denom, w_cap);
    }
    Candidate c;
    c.w = w;
    c.q = mu_power(w, r_k, h, n0);
    double b = w_cap - w;
    c.p = b * ptil;
    c.rate = b > 0.0 ? mu_rate(b, c.p, g, n0) : 0.0;
    c.cost = (c.p + c.q) / xi;
    c.t = c.rate - ee * c.cost;
    return c;
  };

  double ee = 1.0;
  Candidate cur = argmax(ee);
  for (int it = 0; it < 200; ++it) {
    double tol = 1e-9 * ee * std::max(cur.cost, 1e-300);
    if (cur.t < -tol) {
      // Overshoot guard: only reachable when the optimal ratio is below the
      // current iterate; shrink toward it from above. At convergence t can
      // round to a hair below zero, so only a t beyond tolerance counts.
      ee *= 0.25;
      cur = argmax(ee);
      continue;
    }
    if (cur.t <= tol) {
      if (cur.rate <= 0.0 || w_cap - cur.w <= 0.0) break;  // degenerate
      res.trading_ee = cur.rate / cur.cost;
      res.optimal_w = cur.w;
      res.optimal_p = cur.p;
      res.optimal_q = cur.q;
      return res;
    }
    ee = cur.rate / cur.cost;
    cur = argmax(ee);
  }
  // No profitable trade: report the all-serving split with zero EE.
  res.trading_ee = 0.0;
  res.optimal_w = w_cap;
  res.optimal_p = 0.0;
  res.optimal_q = mu_power(w_cap, r_k, h, n0);
  return res;
}

SelectionResult greedy_select(const SystemParams& sp, const ChannelState& ch,
                              const SolveOptions& opts) {
  sp.validate();
  ch.validate(sp);
  SelectionResult res;

  DinkelbachResult base = dinkelbach_solve({}, sp, ch, opts);
  res.dinkelbach_calls = 1;
  if (base.status != SolveStatus::kOk) return res;  // base infeasibility
  res.status = SolveStatus::kOk;
  adopt(res, {}, std::move(base));

  for (const TradingEEResult& trade : ranked_trades(sp, ch)) {
    std::vector<int> candidate = res.psi;
    candidate.insert(
        std::upper_bound(candidate.begin(), candidate.end(), trade.mu_index),
        trade.mu_index);
    DinkelbachResult d = dinkelbach_solve(candidate, sp, ch, opts);
    ++res.dinkelbach_calls;

    SelectionTraceEntry entry;
    entry.candidate = trade.mu_index;
    entry.trading_ee = trade.trading_ee;
    entry.feasible = d.status == SolveStatus::kOk;
    entry.ee_after = entry.feasible ? d.outcome.ee : 0.0;
    entry.accepted = entry.feasible && d.outcome.ee > res.ee;
    if (entry.accepted) adopt(res, std::move(candidate), std::move(d));
    res.trace.push_back(entry);
  }
  return res;
}

SelectionResult exhaustive_select(const SystemParams& sp,
                                  const ChannelState& ch,
                                  const SolveOptions& opts) {
  sp.validate();
  ch.validate(sp);
  const int k = sp.n_mu();
  if (k > 20)
    throw std::invalid_argument("exhaustive_select: more than 20 MUs");

  // Preference order realizes the tie-break: strictly-better EE only.
  std::vector<std::vector<int>> subsets;
  subsets.reserve(std::size_t{1} << k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> psi;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) psi.push_back(i);
    subsets.push_back(std::move(psi));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  SelectionResult res;
  for (auto& psi : subsets) {
    DinkelbachResult d = dinkelbach_solve(psi, sp, ch, opts);
    ++res.dinkelbach_calls;
    if (d.status != SolveStatus::kOk) continue;
    if (res.status != SolveStatus::kOk || d.outcome.ee > res.ee) {
      res.status = SolveStatus::kOk;
      adopt(res, std::move(psi), std::move(d));
    }
  }
  return res;
}

EEOutcome non_spt_solve(const SystemParams& sp, const ChannelState& ch,
                        const SolveOptions& opts) {
  DinkelbachResult d = dinkelbach_solve({}, sp, ch, opts);
  if (d.status != SolveStatus::kOk) {
    EEOutcome out;
    out.feasible = false;
    out.dinkelbach_iters = d.outcome.dinkelbach_iters;
    return out;
  }
  return d.outcome;
}

namespace {

struct RateMaxResult {
  bool feasible = false;
  Allocation alloc;
  double rate = 0;
};

// Budget-tight rate maximization for a fixed MU set: the q=0 closed forms
// with lambda bisected until transmit equals the budget.
RateMaxResult rate_max_for(const std::vector<int>& psi, const SystemParams& sp,
                           const ChannelState& ch) {
  RateMaxResult res;
  double floor_power = 0.0;
  for (int k : psi)
    floor_power += mu_power(sp.mu_bandwidths[k], sp.mu_rate_floors[k],
                            ch.h_mu[k], sp.noise_density);
  if (floor_power > sp.p_max_sc) return res;

  auto transmit_at = [&](double lambda) {
    return closed_form_primal(0.0, lambda, 0.0, psi, sp, ch).transmit_power();
  };
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (transmit_at(hi) > sp.p_max_sc) {
    if (++guard > 200)
      throw ConvergenceError("rate-max bisection found no bracket",
                             "bisection", guard, {hi, sp.p_max_sc, 0.0});
    hi *= 4.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (transmit_at(mid) > sp.p_max_sc) lo = mid; else hi = mid;
  }
  res.alloc = closed_form_primal(0.0, hi, 0.0, psi, sp, ch);
  res.rate = total_rate(res.alloc, ch, sp);
  res.feasible = res.rate >= sp.r_sc_min;
  return res;
}

}  // namespace

ThroughputResult throughput_max_solve(const SystemParams& sp,
                                      const ChannelState& ch,
                                      const SolveOptions& opts) {
  (void)opts;
  sp.validate();
  ch.validate(sp);
  ThroughputResult res;

  RateMaxResult cur = rate_max_for({}, sp, ch);
  if (!cur.feasible) return res;
  std::vector<int> psi;

  for (const TradingEEResult& trade : ranked_trades(sp, ch)) {
    std::vector<int> candidate = psi;
    candidate.insert(
        std::upper_bound(candidate.begin(), candidate.end(), trade.mu_index),
        trade.mu_index);
    RateMaxResult next = rate_max_for(candidate, sp, ch);
    if (next.feasible && next.rate > cur.rate) {
      cur = std::move(next);
      psi = std::move(candidate);
    }
  }
  res.status = SolveStatus::kOk;
  res.psi = std::move(psi);
  res.outcome = summarize(cur.alloc, ch, sp);
  res.alloc = std::move(cur.alloc);
  return res;
}

bool theorem3_predicate(int m, const std::vector<int>& psi,
                        const SystemParams& sp, const ChannelState& ch,
                        Theorem3Variant variant, const SolveOptions& opts) {
  SystemParams relaxed = sp;
  if (variant == Theorem3Variant::kNoC1NoC4 || variant == Theorem3Variant::kNoC1)
    relaxed.p_max_sc = kRelaxedBudget;
  if (variant == Theorem3Variant::kNoC1NoC4 || variant == Theorem3Variant::kNoC4)
    relaxed.r_sc_min = 0.0;

  DinkelbachResult base = dinkelbach_solve(psi, relaxed, ch, opts);
  if (base.status != SolveStatus::kOk) return false;
  return trading_ee(m, sp, ch).trading_ee > base.outcome.ee;
}

}  // namespace spt
