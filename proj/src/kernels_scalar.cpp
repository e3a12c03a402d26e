#include "spt/kernels.hpp"

#include <cmath>

namespace spt::kernels {

namespace {

double waterfill_scalar(const double* gains, const double* bands, double level,
                        double n0, double* powers, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double head = level - n0 / gains[i];
    double p = bands[i] * (head > 0.0 ? head : 0.0);
    powers[i] = p;
    total += p;
  }
  return total;
}

double rate_sum_scalar(const double* powers, const double* gains,
                       const double* bands, double n0, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += bands[i] * std::log2(1.0 + powers[i] * gains[i] / (bands[i] * n0));
  }
  return total;
}

double sum_scalar(const double* x, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += x[i];
  return total;
}

void db_to_linear_scalar(const double* db, double* lin, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) lin[i] = std::pow(10.0, -0.1 * db[i]);
}

}  // namespace

const Ops& scalar() {
  static const Ops ops{"scalar", waterfill_scalar, rate_sum_scalar, sum_scalar,
                       db_to_linear_scalar};
  return ops;
}

}  // namespace spt::kernels
