#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "fplab/special_functions.hpp"

using namespace fplab;

namespace {

// Independent high-precision gamma (Spouge's approximation, long double),
// used only to pin expected Beta values; never touches the library path.
long double spouge_gamma(long double z) {
  constexpr int a = 24;
  static long double c[a];
  static bool init = false;
  if (!init) {
    c[0] = sqrtl(2.0L * static_cast<long double>(M_PI));
    long double fact = 1.0L;
    for (int k = 1; k < a; ++k) {
      if (k > 1) fact *= -(k - 1);
      c[k] = powl(static_cast<long double>(a - k), k - 0.5L) *
             expl(static_cast<long double>(a - k)) / fact;
    }
    init = true;
  }
  const long double zz = z - 1.0L;
  long double acc = c[0];
  for (int k = 1; k < a; ++k) acc += c[k] / (zz + k);
  return powl(zz + a, zz + 0.5L) * expl(-(zz + a)) * acc;
}

long double beta_oracle(long double x, long double y) {
  return spouge_gamma(x) * spouge_gamma(y) / spouge_gamma(x + y);
}

}  // namespace

TEST_CASE("falling factorial basics") {
  CHECK(falling_factorial(0.5, 0) == 1.0);
  CHECK(falling_factorial(0.5, 1) == 0.5);
  CHECK(falling_factorial(0.5, 2) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK_THROWS_AS(falling_factorial(0.5, -1), std::invalid_argument);
}

TEST_CASE("falling factorial recurrence") {
  for (double s : {0.25, 0.5, 0.9, 1.7, -0.3}) {
    for (int m = 1; m <= 8; ++m) {
      CHECK(falling_factorial(s, m) ==
            doctest::Approx(falling_factorial(s, m - 1) * (s - m + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("beta special values against the independent oracle") {
  CHECK(beta(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Frozen via the oracle: B(0.5, 1) = 2, B(0.5, 0.5) = pi.
  CHECK(static_cast<double>(beta_oracle(0.5L, 1.0L)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(static_cast<double>(beta_oracle(0.5L, 0.5L)) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(beta(0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(beta(0.5, 0.5) == doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("beta agrees with the oracle on a grid") {
  for (double a = 0.25; a <= 3.0; a += 0.47) {
    for (double b = 0.3; b <= 4.0; b += 0.73) {
      const double expected = static_cast<double>(beta_oracle(a, b));
      CHECK(beta(a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("beta symmetry and recurrence") {
  for (double a = 0.2; a < 3.0; a += 0.33) {
    for (double b = 0.15; b < 3.0; b += 0.41) {
      CHECK(beta(a, b) == doctest::Approx(beta(b, a)).epsilon(1e-13));
      CHECK(beta(a + 1.0, b) == doctest::Approx(beta(a, b) * a / (a + b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("beta domain errors") {
  CHECK_THROWS_AS(beta(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(beta(1.0, -2.0), std::domain_error);
}

TEST_CASE("sphere measures") {
  CHECK(sphere_measure(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere_measure(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_measure(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_measure(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
  CHECK_THROWS_AS(sphere_measure(0), std::invalid_argument);
}
