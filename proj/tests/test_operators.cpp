#include <doctest.h>

#include <cmath>
#include <vector>

#include "fplab/operators.hpp"
#include "fplab/rng.hpp"
#include "fplab/special_functions.hpp"

using namespace fplab;

TEST_CASE("p-power convention") {
  CHECK(p_power(0.0, 1.5) == 0.0);
  CHECK(p_power(1e-301, 1.5) == 0.0);  // spec guard for p < 2
  CHECK(p_power(4.0, 3.0) == doctest::Approx(16.0));
  CHECK(p_power(-4.0, 3.0) == doctest::Approx(-16.0));
  CHECK(p_power(-9.0, 1.5) == doctest::Approx(-3.0));
}

TEST_CASE("constant fields have exactly zero operator value") {
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  const PVResult r = fractional_p_laplacian_1d(constant_field(5.0), 0.7, prm, spec);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}

TEST_CASE("ramp profile vanishes at its positive boundary point") {
  const QuadratureSpec spec;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const Params prm{s, p, 1};
      const PVResult r = fractional_p_laplacian_1d(ramp_field(s), 1.0, prm, spec);
      CHECK(r.converged);
      CHECK(std::abs(r.value) < 1e-6 / (s * p));
    }
  }
}

TEST_CASE("ramp profile vanishes at every positive point by scaling") {
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  const PVResult r = fractional_p_laplacian_1d(ramp_field(0.5), 2.0, prm, spec);
  CHECK(r.converged);
  CHECK(std::abs(r.value) < 1e-6);

  // Independent brute-force oracle: paired trapezoid sums on a log grid over
  // [1e-6, 1e6]; crude but unrelated to the adaptive machinery.
  const double s = 0.5, p = 2.0, x = 2.0;
  auto w1 = [s](double t) { return t > 0.0 ? std::pow(t, s) : 0.0; };
  auto pair = [&](double y) {
    const double d1 = w1(x) - w1(x + y);
    const double d2 = w1(x) - w1(x - y);
    return (p_power(d1, p) + p_power(d2, p)) / std::pow(y, 1.0 + s * p);
  };
  const int per_decade = 4000;
  const double lo = 1e-6, hi = 1e6;
  const int n = static_cast<int>(per_decade * std::log10(hi / lo));
  double trapz = 0.0;
  double prev_y = lo, prev_f = pair(lo);
  for (int i = 1; i <= n; ++i) {
    const double y = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    const double f = pair(y);
    trapz += 0.5 * (prev_f + f) * (y - prev_y);
    prev_y = y;
    prev_f = f;
  }
  // The truncated oracle carries its own tail of order 2 R^{-s} ~ 2e-3; it
  // confirms the vanishing value at that resolution.
  const double oracle_tail = 2.0 * std::pow(hi, -s) + 2.0 * w1(x) * std::pow(hi, -s * p) / (s * p);
  CHECK(std::abs(trapz) < 2.0 * oracle_tail);
  CHECK(std::abs(r.value - trapz) < 2.0 * oracle_tail);
}

TEST_CASE("ramp profile at -1 hits the closed Beta form") {
  const QuadratureSpec spec;
  {
    const Params prm{0.5, 2.0, 1};
    const PVResult r = fractional_p_laplacian_1d(ramp_field(0.5), -1.0, prm, spec);
    CHECK(r.value == doctest::Approx(-M_PI / 2.0).epsilon(1e-10));
    CHECK(std::abs(r.value + M_PI / 2.0) <= std::max(r.error_estimate, 1e-11));
  }
  {
    const Params prm{0.5, 3.0, 1};
    const PVResult r = fractional_p_laplacian_1d(ramp_field(0.5), -1.0, prm, spec);
    CHECK(r.value == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
  }
  // General (s, p): value = -B(s, s(p-1)+1), derived by the y -> 1/w map.
  for (double s : {0.25, 0.6}) {
    for (double p : {1.5, 2.5}) {
      const Params prm{s, p, 1};
      const PVResult r = fractional_p_laplacian_1d(ramp_field(s), -1.0, prm, spec);
      CHECK(r.value == doctest::Approx(-beta(s, s * (p - 1.0) + 1.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("evaluation at a declared kink is rejected") {
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  CHECK_THROWS_AS(fractional_p_laplacian_1d(ramp_field(0.5), 0.0, prm, spec), std::domain_error);
}

TEST_CASE("lying growth declarations are caught by tail sampling") {
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  ScalarField1D liar;
  liar.f = [](double t) { return 0.05 * t * t; };
  liar.growth_coeff = 1.0;
  liar.growth_exponent = 0.3;
  CHECK_THROWS_AS(fractional_p_laplacian_1d(liar, 0.5, prm, spec), std::invalid_argument);
}

TEST_CASE("growth exponents at or beyond the integrability line are rejected") {
  const Params prm{0.25, 2.0, 1};  // sp = 0.5, so g(p-1) >= sp at g = 0.5
  const QuadratureSpec spec;
  ScalarField1D u;
  u.f = [](double t) { return std::abs(t); };
  u.growth_coeff = 2.0;
  u.growth_exponent = 0.75;
  CHECK_THROWS_AS(fractional_p_laplacian_1d(u, 0.5, prm, spec), std::invalid_argument);
}

TEST_CASE("undeclared non-integrable behavior is flagged, not silently returned") {
  // |t|^{0.3} at its (undeclared) kink: the principal value diverges and the
  // cutoff increments keep growing.
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  ScalarField1D u;
  u.f = [](double t) { return std::pow(std::abs(t), 0.3); };
  u.growth_coeff = 2.0;
  u.growth_exponent = 0.3;
  const PVResult r = fractional_p_laplacian_1d(u, 0.0, prm, spec);
  CHECK_FALSE(r.converged);
}

TEST_CASE("tail bound dominates a tail-radius doubling") {
  const Params prm{0.3, 2.0, 1};
  QuadratureSpec spec;
  const PVResult a = fractional_p_laplacian_1d(ramp_field(prm.s), 1.0, prm, spec);
  QuadratureSpec wide = spec;
  wide.tail_radius = 2.0 * spec.tail_radius;
  const PVResult b = fractional_p_laplacian_1d(ramp_field(prm.s), 1.0, prm, wide);
  CHECK(std::abs(a.value - b.value) < a.tail_bound);
  CHECK(a.tail_bound > 0.0);
}

TEST_CASE("operator invariants: shift, odd sign, scaling") {
  const Params prm{0.5, 2.0, 1};
  const QuadratureSpec spec;
  const auto u = ramp_field(prm.s);
  const double x = 0.8;
  const PVResult base = fractional_p_laplacian_1d(u, x, prm, spec);

  ScalarField1D shifted = u;
  shifted.f = [&u](double t) { return u.f(t) + 2.75; };
  shifted.growth_coeff = u.growth_coeff + 2.75;
  const PVResult sh = fractional_p_laplacian_1d(shifted, x, prm, spec);
  CHECK(std::abs(sh.value - base.value) <= std::max(1e-11, sh.error_estimate + base.error_estimate));

  ScalarField1D neg = u;
  neg.f = [&u](double t) { return -u.f(t); };
  neg.difference = [&u](double t, double d) { return -u.difference(t, d); };
  const PVResult nv = fractional_p_laplacian_1d(neg, x, prm, spec);
  CHECK(nv.value == doctest::Approx(-base.value).epsilon(1e-13));

  // u_lam(t) = u(lam t): value at x/lam equals lam^{sp} value(u at x).
  const double lam = 3.0;
  ScalarField1D scaled = u;
  scaled.f = [&u, lam](double t) { return u.f(lam * t); };
  scaled.difference = [&u, lam](double t, double d) { return u.difference(lam * t, lam * d); };
  const PVResult left = fractional_p_laplacian_1d(scaled, x / lam, prm, spec);
  const double expected = std::pow(lam, prm.s * prm.p) * base.value;
  CHECK(std::abs(left.value - expected) <=
        std::max(1e-9, left.error_estimate + std::pow(lam, prm.s * prm.p) * base.error_estimate));
}

TEST_CASE("limit quotient values and regimes") {
  CHECK(limit_quotient(0.5, 0.5, 1.0) == 0.0);
  CHECK(limit_quotient_target(0.5, 2.0) == doctest::Approx(0.25));
  CHECK(limit_quotient_target(0.5, 3.0) == doctest::Approx(0.25));
  CHECK(limit_quotient_target(0.25, 1.5) == doctest::Approx(0.1875));
  CHECK(limit_quotient_target(0.75, 1.0) == 0.0);

  // The three evaluation regimes agree where they border.
  for (double s : {0.25, 0.6}) {
    for (double p : {1.5, 2.0, 3.5}) {
      const double direct = limit_quotient(1.0001e-4, s, p);
      const double stable = limit_quotient(0.9999e-4, s, p);
      CHECK(direct == doctest::Approx(stable).epsilon(1e-7));
      const double series = limit_quotient(0.9e-8, s, p);
      const double stable2 = limit_quotient(1.1e-8, s, p);
      CHECK(series == doctest::Approx(stable2).epsilon(1e-5));
    }
  }
  CHECK_THROWS_AS(limit_quotient(0.0, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(limit_quotient(1.5, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("limit quotient converges along the schedule") {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const auto rep = limit_quotient_check(s, p);
      CHECK(rep.converged);
      CHECK(rep.abs_errors.back() <= 1e-4 * std::max(1.0, std::abs(rep.target)));
    }
  }
  const auto trivial = limit_quotient_check(0.75, 1.0);
  CHECK(trivial.target == 0.0);
  for (double q : trivial.quotients) CHECK(q == 0.0);
}

TEST_CASE("split integrals reproduce the vanishing identity") {
  const QuadratureSpec spec;
  {
    const auto t = ramp_split_integrals(0.5, 2.0, spec);
    CHECK(t.i1 == doctest::Approx(1.0));
    CHECK(std::abs(t.sum) < 1e-6);
    // Frozen closed form: i2 = sqrt(2) - 1 + asinh(1).
    CHECK(t.i2 == doctest::Approx(std::sqrt(2.0) - 1.0 + std::asinh(1.0)).epsilon(1e-11));
    CHECK(t.i3 == doctest::Approx(t.i2 - 1.0).epsilon(1e-9));
  }
  {
    const auto t = ramp_split_integrals(0.25, 4.0, spec);
    CHECK(t.i1 == doctest::Approx(1.0));
    CHECK(std::abs(t.sum) < 1e-6);
  }
}

TEST_CASE("far-side integral matches its integration-by-parts form") {
  const QuadratureSpec spec;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const auto t = ramp_split_integrals(s, p, spec);
      const double ibp = ramp_i2_by_parts(s, p);
      CHECK(std::abs(t.i2 - ibp) < 1e-8 * std::max(1.0, std::abs(t.i2)));
    }
  }
}

TEST_CASE("reduction right-hand side: frozen prefactors and the sign split") {
  const QuadratureSpec spec;
  {
    const Params prm{0.5, 2.0, 2};
    CHECK(reduction_rhs({0.3, -1.0}, prm, spec) == doctest::Approx(-M_PI).epsilon(1e-9));
    CHECK(std::abs(reduction_rhs({0.3, 0.7}, prm, spec)) < 1e-8);
  }
  {
    const Params prm{0.5, 2.0, 3};
    CHECK(reduction_rhs({0.0, 0.0, -1.0}, prm, spec) ==
          doctest::Approx(-M_PI * M_PI / 2.0).epsilon(1e-9));
  }
  const Params prm{0.5, 2.0, 2};
  CHECK_THROWS_AS(reduction_rhs({0.3, 0.0}, prm, spec), std::domain_error);
  CHECK_THROWS_AS(reduction_rhs({0.3, -1.0}, Params{0.5, 2.0, 1}, spec), std::invalid_argument);
}

TEST_CASE("planar evaluation matches the factorized form") {
  QuadratureSpec nd_spec;
  nd_spec.pv_epsilons = {1e-2, 1e-3, 1e-4, 1e-5};
  nd_spec.panel_tol = 1e-9;
  const QuadratureSpec rhs_spec;
  const Params prm{0.5, 2.0, 2};
  const std::vector<double> x = {0.3, -0.5};
  const PVResult lhs = fractional_p_laplacian_nd(ramp_field_nd(2, prm.s), x, prm, nd_spec);
  const double rhs = reduction_rhs(x, prm, rhs_spec);
  CHECK(lhs.converged);
  CHECK(std::abs(lhs.value - rhs) < 1e-3 * std::abs(rhs));
}

TEST_CASE("three-dimensional evaluation matches the factorized form") {
  QuadratureSpec spec;
  spec.pv_epsilons = {1e-2, 1e-3, 1e-4};
  spec.panel_tol = 1e-8;
  const Params prm{0.5, 2.0, 3};
  const PVResult pos = fractional_p_laplacian_nd(ramp_field_nd(3, 0.5), {0.2, 0.1, 0.6}, prm, spec);
  CHECK(std::abs(pos.value) < 1e-5);
  const PVResult neg =
      fractional_p_laplacian_nd(ramp_field_nd(3, 0.5), {0.2, 0.1, -0.5}, prm, spec);
  const double rhs = reduction_rhs({0.2, 0.1, -0.5}, prm, QuadratureSpec{});
  CHECK(neg.converged);
  CHECK(std::abs(neg.value - rhs) < 1e-3 * std::abs(rhs));
}

TEST_CASE("planar evaluation of the zero field and dimension guards") {
  QuadratureSpec spec;
  spec.pv_epsilons = {1e-2, 1e-3, 1e-4};
  const Params prm{0.5, 2.0, 2};
  ScalarFieldND zero;
  zero.dim = 2;
  zero.f = [](const std::vector<double>&) { return 0.0; };
  zero.growth_coeff = 1.0;
  const PVResult r = fractional_p_laplacian_nd(zero, {0.1, 0.2}, prm, spec);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(fractional_p_laplacian_nd(zero, {0.1, 0.2}, Params{0.5, 2.0, 4}, spec),
                  std::invalid_argument);
}

TEST_CASE("harmonicity residuals of generators inside the unit ball") {
  const QuadratureSpec spec;
  const Params prm{0.5, 2.0, 2};
  AtomSum u;
  u.atoms.push_back(Atom{1.0, Direction({0.5, 0.0}), 0.5});
  SplitMix64 rng(17);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> x(2);
    do {
      x[0] = rng.uniform(-1.0, 1.0);
      x[1] = rng.uniform(-1.0, 1.0);
    } while (x[0] * x[0] + x[1] * x[1] >= 0.9);
    pts.push_back(x);
  }
  const auto rep = harmonicity_residual(u, pts, prm, spec);
  REQUIRE(rep.per_atom_max.size() == 1);
  CHECK(rep.overall_max < 1e-5);

  // Zero-coefficient atoms contribute exactly zero.
  u.atoms.push_back(Atom{0.0, Direction({3.0, 0.0}), 0.5});
  const auto rep2 = harmonicity_residual(u, pts, prm, spec);
  CHECK(rep2.per_atom_max[1] == 0.0);

  // Atoms violating |xi| <= 1 or points outside the support half space fail.
  AtomSum bad;
  bad.atoms.push_back(Atom{1.0, Direction({2.0, 0.0}), 0.5});
  CHECK_THROWS(harmonicity_residual(bad, {{-0.9, 0.0}}, prm, spec));
}

TEST_CASE("error estimates cover the truth on the frozen oracle cases") {
  const QuadratureSpec spec;
  {
    const Params prm{0.5, 2.0, 1};
    const PVResult r = fractional_p_laplacian_1d(ramp_field(0.5), 1.0, prm, spec);
    CHECK(std::abs(r.value - 0.0) <= std::max(r.error_estimate, 1e-12));
  }
  {
    const Params prm{0.75, 1.5, 1};
    const PVResult r = fractional_p_laplacian_1d(ramp_field(0.75), 1.0, prm, spec);
    CHECK(std::abs(r.value - 0.0) <= std::max(r.error_estimate, 1e-12));
  }
  {
    const Params prm{0.25, 3.0, 1};
    const PVResult r = fractional_p_laplacian_1d(ramp_field(0.25), -1.0, prm, spec);
    const double truth = -beta(0.25, 0.25 * 2.0 + 1.0);
    CHECK(std::abs(r.value - truth) <= std::max(r.error_estimate, 1e-10));
  }
}

TEST_CASE("generator residuals reduce to one 1D value in any dimension") {
  const QuadratureSpec spec;
  const Params prm{0.5, 3.0, 3};
  AtomSum u;
  u.atoms.push_back(Atom{0.7, Direction({0.3, -0.2, 0.4}), 0.5});
  const std::vector<std::vector<double>> pts = {{0.1, 0.2, -0.3}, {-0.4, 0.0, 0.5}};
  const auto rep = harmonicity_residual(u, pts, prm, spec);
  CHECK(rep.overall_max < 1e-5);
}

TEST_CASE("harmonicity residual: reduction agrees with direct quadrature") {
  QuadratureSpec spec;
  spec.pv_epsilons = {1e-2, 1e-3, 1e-4, 1e-5};
  spec.panel_tol = 1e-9;
  const Params prm{0.5, 2.0, 2};
  AtomSum u;
  u.atoms.push_back(Atom{1.0, Direction({0.4, 0.2}), 0.5});
  const std::vector<std::vector<double>> pts = {{0.2, -0.3}};
  const auto reduced = harmonicity_residual(u, pts, prm, spec, false);
  const auto direct = harmonicity_residual(u, pts, prm, spec, true);
  CHECK(reduced.overall_max < 1e-6);
  CHECK(direct.overall_max < 1e-6);
}
