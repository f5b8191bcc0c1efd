#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "fplab/atoms.hpp"
#include "fplab/grid.hpp"
#include "fplab/rng.hpp"

using namespace fplab;

namespace {

// Tensor central-difference oracle for atom derivatives; orders >= 3 use a
// wider spacing plus one Richardson step so roundoff stays below the gate.
double fd_atom_derivative(const Atom& a, const MultiIndex& alpha, const std::vector<double>& x,
                          double h) {
  auto stencil = [&](double step) {
    std::vector<int> idx(alpha.dim(), 0);
    double acc = 0.0;
    while (true) {
      double coeff = 1.0;
      int flips = 0;
      std::vector<double> pt(x);
      for (int i = 0; i < alpha.dim(); ++i) {
        coeff *= binomial(alpha.e[i], idx[i]);
        flips += idx[i];
        pt[i] += (0.5 * alpha.e[i] - idx[i]) * step;
      }
      acc += ((flips % 2 == 0) ? coeff : -coeff) * atom_eval(a, pt);
      int i = 0;
      for (; i < alpha.dim(); ++i) {
        if (++idx[i] <= alpha.e[i]) break;
        idx[i] = 0;
      }
      if (i == alpha.dim()) break;
    }
    return acc / std::pow(step, alpha.order());
  };
  if (alpha.order() <= 2) return stencil(h);
  const double wide = 50.0 * h;
  return (4.0 * stencil(0.5 * wide) - stencil(wide)) / 3.0;
}

std::vector<double> random_point_in_ball(SplitMix64& rng, int d, double radius) {
  std::vector<double> x(d);
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-radius, radius);
    if (vector_norm(x) < radius) return x;
  }
}

}  // namespace

TEST_CASE("ramp power basics") {
  CHECK(ramp_pow(-3.0, 0.5) == 0.0);
  CHECK(ramp_pow(1.0, 0.5) == 1.0);
  CHECK(ramp_pow(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ramp_pow_last({1.0, -2.0}, 0.5) == 0.0);
  CHECK(ramp_pow_last({0.0, 1.0}, 0.5) == 1.0);
  CHECK(ramp_pow_last({7.0, 9.0}, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("ramp power homogeneity") {
  SplitMix64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(-4.0, 4.0);
    const double lam = std::exp(rng.uniform(-2.0, 2.0));
    const double s = rng.uniform(0.05, 0.95);
    CHECK(ramp_pow(lam * t, s) ==
          doctest::Approx(std::pow(lam, s) * ramp_pow(t, s)).epsilon(1e-13));
  }
}

TEST_CASE("stable ramp difference matches the naive form away from cancellation") {
  SplitMix64 rng(55);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(-2.0, 2.0);
    const double delta = rng.uniform(-1.0, 1.0);
    const double s = rng.uniform(0.1, 0.9);
    const double naive = ramp_pow(t, s) - ramp_pow(t + delta, s);
    CHECK(ramp_pow_difference(t, delta, s) == doctest::Approx(naive).epsilon(1e-10));
  }
  // Near-cancellation regime: the stable form keeps relative accuracy.
  const double t = 1.0, s = 0.5;
  const double delta = 1e-12;
  const double exact = -0.5 * delta;  // d/dt t^s at 1 times delta, to leading order
  CHECK(ramp_pow_difference(t, delta, s) == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("sign convention at zero") {
  CHECK(sign_plus(0.0) == 1.0);
  CHECK(sign_plus(2.5) == 1.0);
  CHECK(sign_plus(-0.1) == -1.0);
}

TEST_CASE("reflection examples") {
  const Direction e2({0.0, 1.0});
  const Direction me2({0.0, -1.0});
  const Direction e1({1.0, 0.0});

  const auto r1 = reflect({1.0, 0.0}, e1);
  CHECK(r1[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r1[1] == doctest::Approx(1.0).epsilon(1e-15));

  // At xi = |xi| e_d the closed-form map mirrors across the e_d axis (it fixes
  // the last coordinate, which is all the downstream identities use).
  const auto r2 = reflect({3.0, 4.0}, e2);
  CHECK(r2[0] == doctest::Approx(-3.0));
  CHECK(r2[1] == doctest::Approx(4.0));

  const auto r3 = reflect({3.0, 4.0}, me2);
  CHECK(r3[0] == doctest::Approx(3.0));
  CHECK(r3[1] == doctest::Approx(-4.0));

  CHECK_THROWS_AS(reflect({1.0, 0.0}, Direction({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("reflection properties: involution, inner products, mapping") {
  SplitMix64 rng(7);
  for (int d : {2, 3}) {
    for (int i = 0; i < 100; ++i) {
      std::vector<double> xi_v(d), x(d), y(d);
      for (int j = 0; j < d; ++j) {
        xi_v[j] = rng.uniform(-2.0, 2.0);
        x[j] = rng.uniform(-3.0, 3.0);
        y[j] = rng.uniform(-3.0, 3.0);
      }
      Direction xi(xi_v);
      if (xi.norm() < 1e-3) continue;

      const auto rx = reflect(x, xi);
      const auto rrx = reflect(rx, xi);
      for (int j = 0; j < d; ++j) CHECK(rrx[j] == doctest::Approx(x[j]).epsilon(1e-12));

      const auto ry = reflect(y, xi);
      CHECK(dot(rx, ry) == doctest::Approx(dot(x, y)).epsilon(1e-11));

      const auto rxi = reflect(xi.xi, xi);
      for (int j = 0; j < d - 1; ++j) CHECK(rxi[j] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(rxi[d - 1] == doctest::Approx(xi.norm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("atom evaluation examples") {
  CHECK(atom_eval(Atom{1.0, Direction({0.3, 0.4}), 0.5}, {0.0, 0.0}) == 1.0);
  CHECK(atom_eval(Atom{1.0, Direction({1.0, 0.0}), 0.5}, {-2.0, 0.0}) == 0.0);
  CHECK(atom_eval(Atom{2.0, Direction({3.0, 0.0}), 0.5}, {1.0, 0.0}) ==
        doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("atom representation through the reflection of the axis profile") {
  SplitMix64 rng(31);
  for (int d : {2, 3}) {
    for (int i = 0; i < 60; ++i) {
      std::vector<double> xi_v(d), x(d);
      for (int j = 0; j < d; ++j) {
        xi_v[j] = rng.uniform(-1.5, 1.5);
        x[j] = rng.uniform(-1.5, 1.5);
      }
      Direction xi(xi_v);
      const double nrm = xi.norm();
      if (nrm < 1e-2) continue;
      std::vector<double> shifted(d);
      for (int j = 0; j < d; ++j) shifted[j] = xi.xi[j] / (nrm * nrm) + x[j];
      const double via_reflection =
          std::pow(nrm, 0.5) * ramp_pow_last(reflect(shifted, xi), 0.5);
      CHECK(atom_eval(Atom{1.0, xi, 0.5}, x) ==
            doctest::Approx(via_reflection).epsilon(1e-11));
    }
  }
}

TEST_CASE("atom derivative closed form") {
  const Atom a{1.0, Direction({0.5, 0.0}), 0.5};
  CHECK(atom_derivative(a, MultiIndex({0, 0}), {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(atom_derivative(a, MultiIndex({1, 0}), {0.0, 0.0}) == doctest::Approx(0.25));
  CHECK(atom_derivative(a, MultiIndex({2, 0}), {0.0, 0.0}) ==
        doctest::Approx(-0.0625).epsilon(1e-13));
  CHECK_THROWS_AS(atom_derivative(Atom{1.0, Direction({1.0, 0.0}), 0.5}, MultiIndex({1, 0}),
                                  {-1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("atom derivatives match finite differences") {
  SplitMix64 rng(91);
  int checked = 0;
  while (checked < 120) {
    const int d = 2;
    std::vector<double> xi_v(d);
    for (int j = 0; j < d; ++j) xi_v[j] = rng.uniform(-0.9, 0.9);
    Direction xi(xi_v);
    if (xi.norm() > 0.9 || xi.norm() < 0.05) continue;
    const auto x = random_point_in_ball(rng, d, 0.95);
    const Atom a{rng.uniform(-2.0, 2.0), xi, rng.uniform(0.15, 0.85)};
    if (1.0 + dot(x, xi.xi) < 0.1) continue;
    for (const auto& alpha : enumerate_multiindices(d, 3)) {
      const double exact = atom_derivative(a, alpha, x);
      const double fd = fd_atom_derivative(a, alpha, x, 1e-4);
      CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
    }
    ++checked;
  }
}

TEST_CASE("sup bound examples, domination, and tightness") {
  const Atom a{1.0, Direction({0.5, 0.0}), 0.5};
  CHECK(atom_sup_derivative_bound(a, MultiIndex({0, 0}), 1.0) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(atom_sup_derivative_bound(a, MultiIndex({1, 0}), 1.0) ==
        doctest::Approx(0.25 / std::sqrt(0.5)).epsilon(1e-12));
  CHECK(atom_sup_derivative_bound(a, MultiIndex({0, 1}), 1.0) == 0.0);
  CHECK_THROWS_AS(atom_sup_derivative_bound(Atom{1.0, Direction({1.0, 0.0}), 0.5},
                                            MultiIndex({0, 0}), 1.0),
                  std::domain_error);

  // Dense maximization never exceeds the bound and approaches it within 1e-3:
  // a fine ring just inside the boundary plus a coarse interior fill.
  std::vector<std::vector<double>> dense;
  for (int j = 0; j < 4096; ++j) {
    const double th = 2.0 * M_PI * j / 4096.0;
    dense.push_back({0.9999 * std::cos(th), 0.9999 * std::sin(th)});
  }
  const EvalGrid coarse = make_ball_grid(2, 40, 1.0);
  dense.insert(dense.end(), coarse.points.begin(), coarse.points.end());
  for (const auto& alpha : enumerate_multiindices(2, 2)) {
    const double bound = atom_sup_derivative_bound(a, alpha, 1.0);
    double grid_max = 0.0;
    for (const auto& x : dense) {
      grid_max = std::max(grid_max, std::abs(atom_derivative(a, alpha, x)));
    }
    CHECK(grid_max <= bound * (1.0 + 1e-12));
    if (bound > 0.0) CHECK(grid_max >= bound * (1.0 - 1e-3));
  }
}

TEST_CASE("atom rescale identities") {
  const Atom a{2.0, Direction({2.0, 0.0}), 0.5};
  const Atom r1 = atom_rescale(a, 1.0);
  CHECK(r1.dir.xi == a.dir.xi);
  CHECK(r1.coeff == a.coeff);

  const Atom q = atom_rescale(a, 0.25);
  CHECK(q.dir.xi[0] == doctest::Approx(0.5));
  const std::vector<double> x = {1.0, 0.0};
  const std::vector<double> qx = {0.25, 0.0};
  CHECK(atom_eval(q, x) == doctest::Approx(atom_eval(a, qx)).epsilon(1e-15));

  const Atom b{1.0, Direction({1.0, 1.0}), 0.5};
  const Atom bh = atom_rescale(b, 0.5);
  CHECK(atom_eval(bh, {1.0, 0.0}) ==
        doctest::Approx(atom_eval(b, {0.5, 0.0})).epsilon(1e-15));

  CHECK_THROWS_AS(atom_rescale(a, 0.0), std::invalid_argument);
}

TEST_CASE("atom sums evaluate as sums with huge-coefficient cancellation") {
  AtomSum u;
  u.atoms.push_back(Atom{3.0e12, Direction({0.3, 0.1}), 0.5});
  u.atoms.push_back(Atom{-3.0e12, Direction({0.3, 0.1}), 0.5});
  u.atoms.push_back(Atom{1.0, Direction({0.2, 0.0}), 0.5});
  const std::vector<double> x = {0.4, -0.3};
  CHECK(atom_sum_eval(u, x) ==
        doctest::Approx(atom_eval(u.atoms[2], x)).epsilon(1e-12));
}
