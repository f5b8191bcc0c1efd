#include "fplab/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fplab {

double falling_factorial(double s, int m) {
  if (m < 0) throw std::invalid_argument("falling_factorial: m must be non-negative");
  double out = 1.0;
  for (int j = 0; j < m; ++j) out *= (s - j);
  return out;
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("log_beta: arguments must be positive (a=" + std::to_string(a) +
                            ", b=" + std::to_string(b) + ")");
  }
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

double sphere_measure(int n) {
  if (n < 1) throw std::invalid_argument("sphere_measure: n must be positive");
  // 2 pi^{n/2} / Gamma(n/2)
  const double half = 0.5 * n;
  return 2.0 * std::exp(half * std::log(M_PI) - std::lgamma(half));
}

}  // namespace fplab
