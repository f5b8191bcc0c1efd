#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fplab/grid.hpp"

using namespace fplab;

namespace {

DerivativeTable table_for_x1(const EvalGrid& g) {
  DerivativeTable t;
  std::vector<double> v0(g.size()), v10(g.size()), v01(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v0[i] = g.points[i][0];
    v10[i] = 1.0;
    v01[i] = 0.0;
  }
  t[MultiIndex({0, 0})] = v0;
  t[MultiIndex({1, 0})] = v10;
  t[MultiIndex({0, 1})] = v01;
  return t;
}

}  // namespace

TEST_CASE("ball grid points stay strictly inside and are deterministic") {
  for (int d = 1; d <= 3; ++d) {
    const EvalGrid g = make_ball_grid(d, d == 3 ? 8 : 16, 1.0);
    CHECK(g.size() > 0);
    for (const auto& x : g.points) CHECK(vector_norm(x) < 1.0);
    const EvalGrid h = make_ball_grid(d, d == 3 ? 8 : 16, 1.0);
    REQUIRE(h.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(h.points[i] == g.points[i]);
  }
}

TEST_CASE("ck_grid_norm of x1 on the ball approaches 2 from below") {
  const EvalGrid g = make_ball_grid(2, 48, 1.0);
  const double norm = ck_grid_norm(table_for_x1(g), 1);
  CHECK(norm <= 2.0 + 1e-12);
  CHECK(norm > 1.95);
}

TEST_CASE("ck_grid_norm of the zero table is zero") {
  const EvalGrid g = make_ball_grid(2, 8, 1.0);
  DerivativeTable t;
  for (const auto& a : enumerate_multiindices(2, 2)) {
    t[a] = std::vector<double>(g.size(), 0.0);
  }
  CHECK(ck_grid_norm(t, 2) == 0.0);
}

TEST_CASE("ck_grid_norm of x^2 with k=2 approaches 5 from below") {
  const EvalGrid g = make_ball_grid(1, 512, 1.0);
  DerivativeTable t;
  std::vector<double> v0(g.size()), v1(g.size()), v2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.points[i][0];
    v0[i] = x * x;
    v1[i] = 2.0 * x;
    v2[i] = 2.0;
  }
  t[MultiIndex({0})] = v0;
  t[MultiIndex({1})] = v1;
  t[MultiIndex({2})] = v2;
  const double norm = ck_grid_norm(t, 2);
  CHECK(norm <= 5.0 + 1e-12);
  CHECK(norm > 4.97);
}

TEST_CASE("ck_grid_norm grows with k and with point supersets") {
  const EvalGrid g = make_ball_grid(1, 64, 1.0);
  DerivativeTable t;
  std::vector<double> v0(g.size()), v1(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.points[i][0];
    v0[i] = std::sin(3.0 * x);
    v1[i] = 3.0 * std::cos(3.0 * x);
  }
  t[MultiIndex({0})] = v0;
  t[MultiIndex({1})] = v1;
  CHECK(ck_grid_norm(t, 1) >= ck_grid_norm(t, 0));

  // Superset of grid values never decreases the estimate.
  DerivativeTable bigger = t;
  bigger[MultiIndex({0})].push_back(0.999);  // |sin(3*0.999...)| < max already? append value anyway
  bigger[MultiIndex({1})].push_back(3.0);
  CHECK(ck_grid_norm(bigger, 1) >= ck_grid_norm(t, 1));
}

TEST_CASE("missing derivatives are rejected") {
  const EvalGrid g = make_ball_grid(2, 8, 1.0);
  DerivativeTable t;
  t[MultiIndex({0, 0})] = std::vector<double>(g.size(), 1.0);
  CHECK_THROWS_AS(ck_grid_norm(t, 1), std::invalid_argument);
}
