#pragma once

namespace spt {

// Principal branch W0 of w*e^w = x, defined on [-1/e, inf).
// Guarantees |W*e^W - x| <= 1e-12 * max(1, |x|).
// Throws std::domain_error for x < -1/e (beyond rounding slack) and
// std::runtime_error if the iteration fails to converge (never observed).
double lambert_w0(double x);

}  // namespace spt
