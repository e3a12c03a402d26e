#pragma once

#include <vector>

#include "spt/allocator.hpp"
#include "spt/model.hpp"

// MU selection: per-MU trading efficiency, the greedy accept loop in
// descending trading-EE order, exhaustive-search / no-trading / throughput
// baselines, and the sufficiency/necessity predicates used to validate the
// selection conditions empirically.

namespace spt {

struct TradingEEResult {
  int mu_index = -1;
  double trading_ee = 0;  // bit/J earned by serving this MU in isolation
  double optimal_w = 0;   // Hz kept for the MU's rate floor
  double optimal_p = 0;   // W spent on the traded remainder
  double optimal_q = 0;   // W spent carrying the MU's floor
};

struct SelectionTraceEntry {
  int candidate = -1;
  double trading_ee = 0;
  bool accepted = false;
  bool feasible = false;  // augmented problem solvable
  double ee_after = 0;    // EE of the augmented solve (0 when infeasible)
};

struct SelectionResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<int> psi;   // sorted accepted MU indices
  double ee = 0;          // bit/J of the final solve
  Allocation alloc;
  EEOutcome outcome;
  DualState duals;
  std::vector<SelectionTraceEntry> trace;  // descending trading-EE order
  int dinkelbach_calls = 0;
};

struct ThroughputResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<int> psi;
  Allocation alloc;
  EEOutcome outcome;
};

enum class Theorem3Variant { kNoC1NoC4, kNoC1, kNoC4 };

// Best trade the SC can strike with MU k alone: maximize the traded-band rate
// over the power spent on it plus the power carrying the MU's floor
// (no budget, no SC rate floor, no circuit power). Returns trading_ee = 0
// only in the degenerate no-gain case.
TradingEEResult trading_ee(int k, const SystemParams&, const ChannelState&);

// Accept MUs in descending trading-EE order while the solved system EE
// strictly improves. status=kInfeasible when even psi={} cannot be served.
SelectionResult greedy_select(const SystemParams&, const ChannelState&,
                              const SolveOptions& = {});

// Solve every subset (K <= 20); ties broken by smaller cardinality, then
// lexicographic index order.
SelectionResult exhaustive_select(const SystemParams&, const ChannelState&,
                                  const SolveOptions& = {});

// EE maximization without trading (psi = {}); feasible=false on infeasibility.
EEOutcome non_spt_solve(const SystemParams&, const ChannelState&,
                        const SolveOptions& = {});

// Rate-maximizing baseline: budget-tight allocation (EE ignored), MU
// acceptance in trading-EE order iff throughput strictly increases.
ThroughputResult throughput_max_solve(const SystemParams&, const ChannelState&,
                                      const SolveOptions& = {});

// trading_ee(m) > EE*(psi) with the named constraints relaxed
// (p_max_sc -> huge and/or r_sc_min -> 0). Validation-only predicate; the
// greedy accept step always compares actually solved EE values.
bool theorem3_predicate(int m, const std::vector<int>& psi,
                        const SystemParams&, const ChannelState&,
                        Theorem3Variant, const SolveOptions& = {});

}  // namespace spt
