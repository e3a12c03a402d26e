#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "spt/model.hpp"

// Energy-efficiency maximization for a fixed MU set Psi: an outer Dinkelbach
// iteration on the rate/power ratio, an inner dual solve of the subtractive
// problem via a 2-D ellipsoid method on the (lambda, mu) multipliers of the
// power budget and rate floor, and a closed-form primal recovery
// (water-filling over SU bands, Lambert-W bandwidth split on MU bands).

namespace spt {

enum class SolveStatus { kOk, kInfeasible };

struct DualState {
  double lambda = 0;  // price on the transmit budget, final (real units)
  double mu = 0;      // price on the SC rate floor, final
  // Ellipsoid geometry in scaled coordinates (lambda/lambda_scale, mu):
  // the natural lambda magnitude tracks q/xi, so the search runs normalized.
  double lambda_scale = 1.0;
  std::array<double, 2> center{1.0, 1.0};
  std::array<double, 4> shape{1e6, 0.0, 0.0, 1e6};  // row-major 2x2
  int iters = 0;  // ellipsoid iterations spent
};

struct Subgradient {
  double g_lambda = 0;  // W: p_max_sc - transmit power (C1 slack)
  double g_mu = 0;      // bit/s: SC rate - r_sc_min (C4 slack)
};

struct SolveOptions {
  double dinkelbach_tol = 1e-6;   // on |R - q P| relative to q*P
  int dinkelbach_cap = 60;
  int ellipsoid_cap = 500;
  double comp_slack_tol = 1e-6;   // multiplier * slack, relative
  double feas_tol = 1e-6;         // constraint slack, relative
  double init_radius = 1e3;       // per-axis extent of the initial ellipsoid
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::string stage_, int iters_,
                   std::array<double, 3> state_)
      : std::runtime_error(what),
        stage(std::move(stage_)),
        iters(iters_),
        state(state_) {}
  std::string stage;             // "ellipsoid" | "dinkelbach" | "bisection"
  int iters;
  std::array<double, 3> state;   // stage-specific diagnostics
};

struct InnerResult {
  SolveStatus status = SolveStatus::kInfeasible;
  DualState duals;
  Allocation alloc;
};

struct DinkelbachResult {
  SolveStatus status = SolveStatus::kInfeasible;
  Allocation alloc;
  EEOutcome outcome;
  DualState duals;  // from the final inner solve
};

// Argmax of the Lagrangian at fixed (q, lambda, mu): water-fill SU own bands
// to the common level (1+mu)/((q/xi+lambda)*ln2), split each selected MU band
// by the Lambert-W rule, and set the MU power for rate-floor equality.
Allocation closed_form_primal(double q, double lambda, double mu,
                              const std::vector<int>& psi,
                              const SystemParams&, const ChannelState&);

// Constraint slacks of an allocation = subgradient of the dual objective.
Subgradient dual_subgradient(const Allocation&, const ChannelState&,
                             const SystemParams&);

// Inner solve at fixed q: ellipsoid on (lambda, mu) >= 0, then an active-set
// polish that bisects the binding constraints to KKT precision.
InnerResult solve_duals(double q, const std::vector<int>& psi,
                        const SystemParams&, const ChannelState&,
                        const SolveOptions& = {});

// Full EE maximization for a fixed MU set.
DinkelbachResult dinkelbach_solve(const std::vector<int>& psi,
                                  const SystemParams&, const ChannelState&,
                                  const SolveOptions& = {});

}  // namespace spt
