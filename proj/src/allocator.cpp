#include "spt/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "spt/kernels.hpp"
#include "spt/lambert.hpp"

namespace spt {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kE = 2.718281828459045;
constexpr double kNegInvE = -0.36787944117144233;
constexpr double kBetaMin = 1e-30;  // keeps closed forms finite as q,lambda -> 0
constexpr double kLevelCap = 1e12;  // W/Hz

std::vector<int> normalize_psi(const std::vector<int>& psi, int n_mu) {
  std::vector<int> out(psi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && (out.front() < 0 || out.back() >= n_mu))
    throw std::invalid_argument("MU index out of range");
  return out;
}

struct PrimalEval {
  Allocation alloc;
  double transmit = 0;  // W
  double rate = 0;      // bit/s
};

PrimalEval eval_primal(double q, double lambda, double mu,
                       const std::vector<int>& psi, const SystemParams& sp,
                       const ChannelState& ch) {
  PrimalEval e;
  e.alloc = closed_form_primal(q, lambda, mu, psi, sp, ch);
  e.transmit = e.alloc.transmit_power();
  e.rate = total_rate(e.alloc, ch, sp);
  return e;
}

// ---------- ellipsoid geometry ----------

struct Ellipsoid {
  std::array<double, 2> c;
  std::array<double, 4> P;  // row-major 2x2, SPD

  // Keep {x : a.(x - c) <= -alpha*sqrt(a^T P a)}; alpha = 0 is a central cut.
  bool cut(const std::array<double, 2>& a, double alpha) {
    double pa0 = P[0] * a[0] + P[1] * a[1];
    double pa1 = P[2] * a[0] + P[3] * a[1];
    double apa = a[0] * pa0 + a[1] * pa1;
    if (!(apa > 0.0) || !std::isfinite(apa)) return false;
    double s = std::sqrt(apa);
    double g0 = pa0 / s, g1 = pa1 / s;
    const double n = 2.0;
    double tau = (1.0 + n * alpha) / (n + 1.0);
    double delta = (n * n / (n * n - 1.0)) * (1.0 - alpha * alpha);
    double sigma = 2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha));
    c[0] -= tau * g0;
    c[1] -= tau * g1;
    P[0] = delta * (P[0] - sigma * g0 * g0);
    P[1] = delta * (P[1] - sigma * g0 * g1);
    P[2] = delta * (P[2] - sigma * g1 * g0);
    P[3] = delta * (P[3] - sigma * g1 * g1);
    return true;
  }

  double sqrt_det() const {
    return std::sqrt(std::max(P[0] * P[3] - P[1] * P[2], 0.0));
  }
};

// ---------- exact active-set polish ----------
// The ellipsoid localizes the multipliers; these bisections then solve the
// binding-constraint pattern to KKT precision. transmit is strictly
// decreasing in lambda and rate strictly increasing in mu, so each 1-D root
// is bracketable; the nested case needs only continuity.

struct RootResult {
  double x = 0;
  PrimalEval eval;
};

// Smallest lambda with transmit(q, lambda, mu) <= target (feasible side).
RootResult bisect_lambda(double q, double mu, double target,
                         const std::vector<int>& psi, const SystemParams& sp,
                         const ChannelState& ch) {
  double lo = 0.0;
  double hi = std::max(q / sp.pa_efficiency, 1.0);
  PrimalEval ehi = eval_primal(q, hi, mu, psi, sp, ch);
  int guard = 0;
  while (ehi.transmit > target) {
    if (++guard > 200)
      throw ConvergenceError("budget bisection found no bracket", "bisection",
                             guard, {q, mu, target});
    hi *= 4.0;
    ehi = eval_primal(q, hi, mu, psi, sp, ch);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    PrimalEval em = eval_primal(q, mid, mu, psi, sp, ch);
    if (em.transmit > target) {
      lo = mid;
    } else {
      hi = mid;
      ehi = std::move(em);
    }
  }
  return {hi, std::move(ehi)};
}

// Smallest mu with rate(q, lambda, mu) >= target (feasible side).
RootResult bisect_mu(double q, double lambda, double target,
                     const std::vector<int>& psi, const SystemParams& sp,
                     const ChannelState& ch) {
  double lo = 0.0;
  double hi = 1.0;
  PrimalEval ehi = eval_primal(q, lambda, hi, psi, sp, ch);
  int guard = 0;
  while (ehi.rate < target) {
    if (++guard > 200)
      throw ConvergenceError("rate bisection found no bracket", "bisection",
                             guard, {q, lambda, target});
    hi *= 4.0;
    ehi = eval_primal(q, lambda, hi, psi, sp, ch);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    PrimalEval em = eval_primal(q, lambda, mid, psi, sp, ch);
    if (em.rate < target) {
      lo = mid;
    } else {
      hi = mid;
      ehi = std::move(em);
    }
  }
  return {hi, std::move(ehi)};
}

InnerResult pack_ok(double q, double lambda, double mu, PrimalEval eval,
                    const Ellipsoid& e, int iters, double lambda_scale) {
  InnerResult res;
  res.status = SolveStatus::kOk;
  res.alloc = std::move(eval.alloc);
  res.duals.lambda = lambda;
  res.duals.mu = mu;
  res.duals.lambda_scale = lambda_scale;
  res.duals.center = {lambda / lambda_scale, mu};
  res.duals.shape = e.P;
  res.duals.iters = iters;
  (void)q;
  return res;
}

// Resolve the binding pattern at fixed q given that (0,0) is primal-infeasible.
InnerResult polish_to_kkt(double q, const std::vector<int>& psi,
                          const SystemParams& sp, const ChannelState& ch,
                          const PrimalEval& e00, const Ellipsoid& egeom,
                          int ell_iters, double lambda_scale) {
  const double pmax = sp.p_max_sc;
  const double rmin = sp.r_sc_min;

  if (e00.transmit > pmax) {
    // C1 binds alone?
    RootResult rb = bisect_lambda(q, 0.0, pmax, psi, sp, ch);
    if (rb.eval.rate >= rmin * (1.0 - 1e-9))
      return pack_ok(q, rb.x, 0.0, std::move(rb.eval), egeom, ell_iters,
                     lambda_scale);
  } else {
    // C4 binds alone?
    RootResult rc = bisect_mu(q, 0.0, rmin, psi, sp, ch);
    if (rc.eval.transmit <= pmax * (1.0 + 1e-9))
      return pack_ok(q, 0.0, rc.x, std::move(rc.eval), egeom, ell_iters,
                     lambda_scale);
  }

  // Both bind: raise mu until the budget-tight allocation meets the floor.
  auto lambda_for_budget = [&](double mu) -> RootResult {
    PrimalEval e = eval_primal(q, 0.0, mu, psi, sp, ch);
    if (e.transmit <= pmax) return {0.0, std::move(e)};
    return bisect_lambda(q, mu, pmax, psi, sp, ch);
  };

  double lo = 0.0, hi = 1.0;
  RootResult rhi = lambda_for_budget(hi);
  int guard = 0;
  while (rhi.eval.rate < rmin) {
    if (++guard > 60) {
      // Rate saturates below the floor even with the EE term drowned out:
      // the budget cannot carry the SC floor on top of the MU floors.
      InnerResult res;
      res.status = SolveStatus::kInfeasible;
      res.alloc = rhi.eval.alloc;
      res.duals.lambda = rhi.x;
      res.duals.mu = hi;
      res.duals.lambda_scale = lambda_scale;
      res.duals.iters = ell_iters;
      return res;
    }
    lo = hi;
    hi *= 4.0;
    rhi = lambda_for_budget(hi);
  }
  double lam_hi = rhi.x;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    RootResult rm = lambda_for_budget(mid);
    if (rm.eval.rate < rmin) {
      lo = mid;
    } else {
      hi = mid;
      lam_hi = rm.x;
      rhi = std::move(rm);
    }
  }
  return pack_ok(q, lam_hi, hi, std::move(rhi.eval), egeom, ell_iters,
                 lambda_scale);
}

}  // namespace

Allocation closed_form_primal(double q, double lambda, double mu,
                              const std::vector<int>& psi,
                              const SystemParams& sp, const ChannelState& ch) {
  if (q < 0.0 || lambda < 0.0 || mu < 0.0)
    throw std::domain_error("closed_form_primal: negative q or multiplier");
  const int n = sp.n_su();
  const int kk = sp.n_mu();
  const double n0 = sp.noise_density;
  const double xi = sp.pa_efficiency;
  const double beta = std::max(q / xi + lambda, kBetaMin);
  const double level = std::min((1.0 + mu) / (beta * kLn2), kLevelCap);

  Allocation a;
  a.p_su_own.assign(n, 0.0);
  a.p_su_traded.assign(kk, 0.0);
  a.q_mu.assign(kk, 0.0);
  a.w_mu.assign(kk, 0.0);
  a.b_traded.assign(kk, 0.0);
  a.best_su = best_su_map(ch);
  a.selected = normalize_psi(psi, kk);

  kernels::active().waterfill(ch.g_su_own.data(), sp.su_bandwidths.data(),
                              level, n0, a.p_su_own.data(), n);

  for (int k : a.selected) {
    const double w_cap = sp.mu_bandwidths[k];
    const double r_k = sp.mu_rate_floors[k];
    const double h = ch.h_mu[k];
    const double g = ch.g_cross[k][a.best_su[k]];
    double ptil = level - n0 / g;
    if (ptil < 0.0) ptil = 0.0;
    // Per-hertz value of the traded band at this water level.
    double cgain = (1.0 + mu) * std::log2(1.0 + ptil * g / n0) - beta * ptil;
    double w = w_cap;
    if (cgain > 0.0) {
      double arg = (cgain * h / (beta * n0) - 1.0) / kE;
      if (arg < kNegInvE) arg = kNegInvE;
      double denom = lambert_w0(arg) + 1.0;
      if (denom > 0.0) w = std::min(r_k * kLn2 / denom, w_cap);
    }
    a.w_mu[k] = w;
    a.b_traded[k] = w_cap - w;
    a.p_su_traded[k] = a.b_traded[k] * ptil;
    a.q_mu[k] = mu_power(w, r_k, h, n0);  // rate floor met with equality
  }
  return a;
}

Subgradient dual_subgradient(const Allocation& a, const ChannelState& ch,
                             const SystemParams& sp) {
  Subgradient g;
  g.g_lambda = sp.p_max_sc - a.transmit_power();
  g.g_mu = total_rate(a, ch, sp) - sp.r_sc_min;
  return g;
}

InnerResult solve_duals(double q, const std::vector<int>& psi_in,
                        const SystemParams& sp, const ChannelState& ch,
                        const SolveOptions& opts) {
  const auto psi = normalize_psi(psi_in, sp.n_mu());
  // The budget multiplier's natural magnitude is the larger of the energy
  // price q/xi and the marginal rate per watt when the whole budget spreads
  // over every band (waterfilling slope 1/(L*ln2) at L ~ P_max/B_total).
  double b_total = 0.0;
  for (double b : sp.su_bandwidths) b_total += b;
  for (double b : sp.mu_bandwidths) b_total += b;
  const double lambda_scale =
      std::max({q / sp.pa_efficiency, b_total / (sp.p_max_sc * kLn2), 1e-9});

  // Exact necessity screen: full-band service minimizes each MU's power, so
  // no multiplier setting can fit these floors into a smaller budget.
  double mu_power_min = 0.0;
  for (int k : psi)
    mu_power_min += mu_power(sp.mu_bandwidths[k], sp.mu_rate_floors[k],
                             ch.h_mu[k], sp.noise_density);
  if (mu_power_min > sp.p_max_sc) {
    InnerResult res;
    res.alloc = closed_form_primal(q, 0.0, 0.0, psi, sp, ch);
    res.duals.lambda_scale = lambda_scale;
    return res;
  }

  // Fast path: if (0,0) is primal-feasible it is KKT-optimal outright.
  Ellipsoid e{{1.0, 1.0},
              {opts.init_radius * opts.init_radius, 0.0, 0.0,
               opts.init_radius * opts.init_radius}};
  PrimalEval e00 = eval_primal(q, 0.0, 0.0, psi, sp, ch);
  if (e00.transmit <= sp.p_max_sc && e00.rate >= sp.r_sc_min)
    return pack_ok(q, 0.0, 0.0, std::move(e00), e, 0, lambda_scale);

  // Ellipsoid method on scaled multipliers (lambda/lambda_scale, mu).
  int it = 0;
  bool converged = false;
  for (; it < opts.ellipsoid_cap; ++it) {
    if (!(e.sqrt_det() >= 1e-12)) break;  // localized (NaN-safe)
    if (e.c[0] < 0.0 || e.c[1] < 0.0) {
      // Deep feasibility cut on the more violated sign constraint.
      double d0 = e.c[0] < 0.0 && e.P[0] > 0.0 ? -e.c[0] / std::sqrt(e.P[0])
                                               : -1.0;
      double d1 = e.c[1] < 0.0 && e.P[3] > 0.0 ? -e.c[1] / std::sqrt(e.P[3])
                                               : -1.0;
      int i = d0 >= d1 ? 0 : 1;
      double depth = i == 0 ? d0 : d1;
      if (!(depth < 1.0)) break;  // quadrant lost to roundoff: refine directly
      std::array<double, 2> a{0.0, 0.0};
      a[i] = -1.0;
      if (!e.cut(a, std::max(depth, 0.0))) break;
      continue;
    }
    double lam = lambda_scale * e.c[0];
    double mu = e.c[1];
    PrimalEval ev = eval_primal(q, lam, mu, psi, sp, ch);
    Subgradient s{sp.p_max_sc - ev.transmit, ev.rate - sp.r_sc_min};
    double rate_scale = std::max({ev.rate, sp.r_sc_min, 1.0});
    bool feas = s.g_lambda >= -opts.feas_tol * sp.p_max_sc &&
                s.g_mu >= -opts.feas_tol * rate_scale;
    bool comp = std::fabs(lam * s.g_lambda) <= opts.comp_slack_tol * rate_scale &&
                std::fabs(mu * s.g_mu) <= opts.comp_slack_tol * rate_scale;
    if (feas && comp) {
      converged = true;
      break;
    }
    if (!e.cut({lambda_scale * s.g_lambda, s.g_mu}, 0.0)) break;
  }
  if (!converged && it >= opts.ellipsoid_cap)
    throw ConvergenceError("ellipsoid iteration cap exceeded", "ellipsoid", it,
                           {lambda_scale * e.c[0], e.c[1], e.sqrt_det()});

  return polish_to_kkt(q, psi, sp, ch, e00, e, it, lambda_scale);
}

DinkelbachResult dinkelbach_solve(const std::vector<int>& psi_in,
                                  const SystemParams& sp,
                                  const ChannelState& ch,
                                  const SolveOptions& opts) {
  sp.validate();
  ch.validate(sp);
  const auto psi = normalize_psi(psi_in, sp.n_mu());

  DinkelbachResult res;
  double q = 1.0;
  for (int it = 1; it <= opts.dinkelbach_cap; ++it) {
    InnerResult inner = solve_duals(q, psi, sp, ch, opts);
    if (inner.status == SolveStatus::kInfeasible) {
      res.status = SolveStatus::kInfeasible;
      res.alloc = std::move(inner.alloc);
      res.duals = inner.duals;
      res.outcome = EEOutcome{};
      res.outcome.dinkelbach_iters = it;
      return res;
    }
    double rate = total_rate(inner.alloc, ch, sp);
    double power = total_power(inner.alloc, sp);
    double t_value = rate - q * power;
    res.outcome.q_trace.push_back(q);
    res.outcome.t_trace.push_back(t_value);
    if (t_value <= opts.dinkelbach_tol * q * sp.p_circuit) {
      EEOutcome summary = summarize(inner.alloc, ch, sp);
      summary.q_trace = std::move(res.outcome.q_trace);
      summary.t_trace = std::move(res.outcome.t_trace);
      summary.dinkelbach_iters = it;
      res.status = SolveStatus::kOk;
      res.alloc = std::move(inner.alloc);
      res.duals = inner.duals;
      res.outcome = std::move(summary);
      return res;
    }
    q = rate / power;
  }
  throw ConvergenceError("dinkelbach iteration cap exceeded", "dinkelbach",
                         opts.dinkelbach_cap,
                         {q, res.outcome.t_trace.empty() ? 0.0 : res.outcome.t_trace.back(), 0.0});
}

}  // namespace spt
