#include "spt/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace spt {

namespace {

constexpr double kNegInvE = -0.36787944117144233;  // -1/e
constexpr double kResidualTol = 1e-13;             // on |w e^w - x| / max(1,|x|)
constexpr int kMaxIter = 100;

// Series about the branch point: w = -1 + p - p^2/3 + 11p^3/72 - 43p^4/540
// + 769p^5/17280, with p = sqrt(2(1 + e*x)).
double branch_series(double p) {
  return -1.0 +
         p * (1.0 +
              p * (-1.0 / 3.0 +
                   p * (11.0 / 72.0 +
                        p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < kNegInvE) {
    if (x < kNegInvE - 1e-12)
      throw std::domain_error("lambert_w0: argument below -1/e");
    x = kNegInvE;  // rounding slack
  }
  if (x == 0.0) return 0.0;

  const double d = x - kNegInvE;  // distance to the branch point, >= 0
  if (d < 1e-6) {
    // Quadratic root tangency: the series alone is accurate to ~1e-17 here
    // and Halley would divide by a vanishing derivative.
    return branch_series(std::sqrt(2.0 * std::exp(1.0) * d));
  }

  // Initial guess per region.
  double w;
  if (x < -0.35) {
    w = branch_series(std::sqrt(2.0 * std::exp(1.0) * d));
  } else if (x < 0.5) {
    // Maclaurin: x - x^2 + (3/2)x^3 - (8/3)x^4
    w = x * (1.0 + x * (-1.0 + x * (1.5 + x * (-8.0 / 3.0))));
  } else if (x < 3.0) {
    w = 0.7 * std::log1p(x);
  } else {
    double l1 = std::log(x), l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Bracket [lo, hi] with f(lo) <= 0 <= f(hi); f is increasing on w >= -1.
  double lo, hi;
  if (x > 0.0) {
    lo = 0.0;
    hi = std::log1p(x);  // w*e^w at ln(1+x) is >= x for x >= 0
  } else {
    lo = -1.0;
    hi = 0.0;
  }
  if (w < lo || w > hi) w = 0.5 * (lo + hi);

  const double tol = kResidualTol * std::fmax(1.0, std::fabs(x));
  for (int it = 0; it < kMaxIter; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    if (std::fabs(f) <= tol) return w;
    if (f < 0.0) lo = w; else hi = w;

    // Halley: w' = w - 2 f f' / (2 f'^2 - f f'')
    double fp = ew * (w + 1.0);
    double fpp = ew * (w + 2.0);
    double denom = 2.0 * fp * fp - f * fpp;
    double next = w - 2.0 * f * fp / denom;
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = 0.5 * (lo + hi);  // bisection safeguard
    if (next == w) {
      // Step underflow: accept if the residual is as small as doubles allow.
      if (std::fabs(f) <= 16.0 * tol) return w;
      next = 0.5 * (lo + hi);
      if (next == w) return w;
    }
    w = next;
  }
  throw std::runtime_error("lambert_w0: iteration cap exceeded");
}

}  // namespace spt
