#include "fplab/acceptance.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fplab/approximate.hpp"
#include "fplab/jets.hpp"
#include "fplab/operators.hpp"
#include "fplab/rng.hpp"
#include "fplab/targets.hpp"

namespace fplab {

namespace {

const std::vector<double> kSGrid = {0.25, 0.5, 0.75};
const std::vector<double> kPGrid = {1.5, 2.0, 3.0, 4.0};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

CriterionResult criterion1() {
  CriterionResult r;
  r.id = 1;
  r.name = "ramp boundary value: |pv(W1)(1)| < 1e-6/(sp) and |i1-i2+i3| < 1e-6";
  QuadratureSpec spec;
  double worst_pv = 0.0;
  double worst_sum = 0.0;
  bool ok = true;
  for (double s : kSGrid) {
    for (double p : kPGrid) {
      Params prm{s, p, 1};
      const PVResult pv = fractional_p_laplacian_1d(ramp_field(s), 1.0, prm, spec);
      const SplitIntegrals terms = ramp_split_integrals(s, p, spec);
      const double pv_scaled = std::abs(pv.value) * s * p;  // relative to i1 = 1/(sp)
      worst_pv = std::max(worst_pv, pv_scaled);
      worst_sum = std::max(worst_sum, std::abs(terms.sum));
      ok = ok && pv.converged && pv_scaled < 1e-6 && std::abs(terms.sum) < 1e-6;
    }
  }
  r.passed = ok;
  r.detail = "12 (s,p) pairs, max |pv|*sp = " + fmt(worst_pv) + ", max |sum| = " + fmt(worst_sum);
  return r;
}

CriterionResult criterion2() {
  CriterionResult r;
  r.id = 2;
  r.name = "limit quotient: 1e-2 relative at eps=1e-4, errors decreasing";
  double worst_rel = 0.0;
  bool ok = true;
  for (double s : kSGrid) {
    for (double p : kPGrid) {
      const double target = limit_quotient_target(s, p);
      const double q = limit_quotient(1e-4, s, p);
      const double rel = std::abs(q - target) / std::abs(target);
      worst_rel = std::max(worst_rel, rel);
      const LimitCheckReport rep = limit_quotient_check(s, p);
      bool monotone = true;
      for (std::size_t i = 2; i < rep.abs_errors.size(); ++i) {
        monotone = monotone && rep.abs_errors[i] <= rep.abs_errors[i - 1] * (1.0 + 1e-9) + 1e-15;
      }
      ok = ok && rel < 1e-2 && monotone;
    }
  }
  r.passed = ok;
  r.detail = "12 (s,p) pairs, max relative error at 1e-4 = " + fmt(worst_rel);
  return r;
}

CriterionResult criterion3() {
  CriterionResult r;
  r.id = 3;
  r.name = "dimensional reduction at d=2: direct pv matches the factorized form";
  // Looser schedule for the many radial principal values inside the 2D sweep;
  // the factorized side keeps the tight default.
  QuadratureSpec nd_spec;
  nd_spec.pv_epsilons = {1e-2, 1e-3, 1e-4, 1e-5};
  nd_spec.panel_tol = 1e-9;
  QuadratureSpec rhs_spec;

  double worst_rel = 0.0;
  double worst_pos = 0.0;
  bool ok = true;
  const std::vector<std::vector<double>> negative_pts = {{0.3, -0.5}, {0.7, -1.2}};
  for (double s : {0.25, 0.5}) {
    for (double p : {2.0, 3.0}) {
      Params prm{s, p, 2};
      for (const auto& x : negative_pts) {
        const PVResult lhs = fractional_p_laplacian_nd(ramp_field_nd(2, s), x, prm, nd_spec);
        const double rhs = reduction_rhs(x, prm, rhs_spec);
        const double rel = std::abs(lhs.value - rhs) / std::abs(rhs);
        worst_rel = std::max(worst_rel, rel);
        ok = ok && lhs.converged && rel < 1e-3;
      }
      const std::vector<double> xp = {0.3, 0.7};
      const PVResult lhs = fractional_p_laplacian_nd(ramp_field_nd(2, s), xp, prm, nd_spec);
      const double rhs = reduction_rhs(xp, prm, rhs_spec);
      worst_pos = std::max({worst_pos, std::abs(lhs.value), std::abs(rhs)});
      ok = ok && std::abs(lhs.value) < 1e-5 && std::abs(rhs) < 1e-5;
    }
  }
  r.passed = ok;
  r.detail = "max rel mismatch = " + fmt(worst_rel) + ", max |value| at x_d>0 = " + fmt(worst_pos);
  return r;
}

CriterionResult criterion4() {
  CriterionResult r;
  r.id = 4;
  r.name = "spanning certificate: full-rank jet systems, exact canonical solves";
  const double s = 0.5;
  bool ok = true;
  double worst_res = 0.0;
  double worst_fd = 0.0;
  int systems = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int m = 0; m <= 4; ++m) {
      const int n = static_cast<int>(multiindex_count(d, m));
      const auto dirs = default_directions(d, m, 2 * n, /*seed=*/7);
      const JetSystem sys = build_jet_system(dirs, s, m);
      ++systems;
      if (sys.rank != n) {
        ok = false;
        r.detail = "rank " + std::to_string(sys.rank) + " < " + std::to_string(n) + " at d=" +
                   std::to_string(d) + ", m=" + std::to_string(m);
        continue;
      }
      for (const auto& gamma : enumerate_multiindices(d, std::min(m, 3))) {
        const Jet target = Jet::monomial(gamma, m);
        const JetMatch match = solve_jet(sys, target, 1e-8);
        worst_res = std::max(worst_res, match.residual);
        const double fd = verify_jet_fd(match, target, 1e-4);
        worst_fd = std::max(worst_fd, fd);
        ok = ok && match.residual < 1e-8 && fd < 1e-4;
      }
    }
  }
  r.passed = ok;
  if (r.detail.empty()) {
    r.detail = std::to_string(systems) + " systems, max residual = " + fmt(worst_res) +
               ", max fd error = " + fmt(worst_fd);
  }
  return r;
}

CriterionResult criterion5() {
  CriterionResult r;
  r.id = 5;
  r.name = "remainder-bound soundness: measured ||g||_Ck <= c(gamma)*r on >=1e3 points";
  bool ok = true;
  double worst_ratio = 0.0;
  std::size_t min_points = static_cast<std::size_t>(-1);
  const Tolerances tol;
  for (int d = 1; d <= 2; ++d) {
    Params prm{0.5, 2.0, d};
    const EvalGrid grid = make_ball_grid(d, d == 1 ? 1200 : 40, 1.0);
    min_points = std::min(min_points, grid.size());
    for (int k = 0; k <= 1; ++k) {
      for (const auto& gamma : enumerate_multiindices(d, 2)) {
        const int m = k + gamma.order();
        const int budget = 2 * static_cast<int>(multiindex_count(d, m)) + 4;
        MonomialSurrogate s = monomial_surrogate(gamma, k, prm, budget, /*seed=*/11);
        s.c_bound = surrogate_remainder_bound(s, k);
        PolynomialTarget single;
        single.terms.push_back({1.0, gamma});
        const double scale = choose_scale(0.1, single, {s.c_bound}).front();
        s = rescale_surrogate(s, scale);
        const TargetFunction mono = target_monomial(gamma, d);
        const double measured = measure_ck_error(mono, s.atoms, k, grid, tol);
        const double bound = s.g_norm_bound > 0.0 ? s.g_norm_bound : 1e-300;
        worst_ratio = std::max(worst_ratio, measured / bound);
        ok = ok && measured <= s.g_norm_bound * (1.0 + 1e-9);
      }
    }
  }
  r.passed = ok;
  r.detail = "max measured/bound = " + fmt(worst_ratio) + ", min grid size = " +
             std::to_string(min_points);
  return r;
}

CriterionResult criterion6() {
  CriterionResult r;
  r.id = 6;
  r.name = "end-to-end approximation: measured error < eps, generators p-harmonic";
  struct Case {
    std::string target;
    int d;
  };
  const std::vector<Case> cases = {{"1", 2}, {"x1", 2}, {"x1^2", 2}, {"x1^2+x2", 2}, {"exp(x1)", 1}};
  const std::vector<std::pair<double, double>> sp_grid = {{0.5, 2.0}, {0.5, 3.0}, {0.25, 1.5}};
  QuadratureSpec quad;
  bool ok = true;
  double worst_err_ratio = 0.0;
  double worst_harm = 0.0;
  int runs = 0;
  for (const auto& c : cases) {
    for (int k = 0; k <= 1; ++k) {
      for (double eps : {0.5, 0.1}) {
        for (const auto& [s, p] : sp_grid) {
          Params prm{s, p, c.d};
          ApproxConfig ac;
          ac.seed = 42;
          const TargetFunction f = builtin_target(c.target, c.d, s);
          const ApproximationReport rep = approximate(f, k, eps, prm, ac, quad);
          ++runs;
          bool xi_ok = true;
          for (const auto& a : rep.atoms.atoms) xi_ok = xi_ok && a.dir.norm() < 1.0;
          worst_err_ratio = std::max(worst_err_ratio, rep.measured_ck_error / eps);
          worst_harm = std::max(worst_harm, rep.harmonicity_max);
          const bool pass = rep.eps_satisfied && xi_ok && rep.harmonicity_max < 1e-4;
          if (!pass && ok) {
            r.detail = c.target + " k=" + std::to_string(k) + " eps=" + fmt(eps) + " s=" + fmt(s) +
                       " p=" + fmt(p) + ": measured=" + fmt(rep.measured_ck_error) +
                       " harm=" + fmt(rep.harmonicity_max);
          }
          ok = ok && pass;
        }
      }
    }
  }
  r.passed = ok;
  if (r.detail.empty()) {
    r.detail = std::to_string(runs) + " runs, max measured/eps = " + fmt(worst_err_ratio) +
               ", max generator residual = " + fmt(worst_harm);
  }
  return r;
}

CriterionResult criterion7() {
  CriterionResult r;
  r.id = 7;
  r.name = "operator invariants: shift, odd symmetry, scaling, p=2 additivity";
  QuadratureSpec spec;
  bool ok = true;
  double worst = 0.0;

  // Three declared test profiles: the ramp, an affine ramp composite, and a
  // smooth bounded bump.
  auto make_fields = [](double s) {
    std::vector<ScalarField1D> fields;
    fields.push_back(ramp_field(s));
    ScalarField1D affine;
    affine.f = [s](double t) { return ramp_pow(1.0 + 0.5 * t, s); };
    affine.kinks = {-2.0};
    affine.growth_coeff = 2.0;
    affine.growth_exponent = s;
    affine.difference = [s](double t, double delta) {
      return ramp_pow_difference(1.0 + 0.5 * t, 0.5 * delta, s);
    };
    fields.push_back(affine);
    ScalarField1D bump;
    bump.f = [](double t) { return 1.0 / (1.0 + t * t); };
    bump.growth_coeff = 1.0;
    bump.growth_exponent = 0.0;
    fields.push_back(bump);
    return fields;
  };

  const Params prm{0.5, 2.0, 1};
  const std::vector<double> xs = {0.8, 1.7, -0.4};
  auto fields = make_fields(prm.s);
  SplitMix64 rng(123);

  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const double x = xs[fi % xs.size()];
    const ScalarField1D& u = fields[fi];
    const PVResult base = fractional_p_laplacian_1d(u, x, prm, spec);
    ok = ok && base.converged;

    // Constant shift leaves the integrand untouched.
    const double c = rng.uniform(-3.0, 3.0);
    ScalarField1D shifted = u;
    shifted.f = [&u, c](double t) { return u.f(t) + c; };
    shifted.growth_coeff = u.growth_coeff + std::abs(c);
    const PVResult sh = fractional_p_laplacian_1d(shifted, x, prm, spec);
    const double shift_err = std::abs(sh.value - base.value);
    worst = std::max(worst, shift_err);
    ok = ok && shift_err <= std::max(1e-10, sh.error_estimate + base.error_estimate);

    // Odd symmetry of the p-difference.
    ScalarField1D neg = u;
    neg.f = [&u](double t) { return -u.f(t); };
    if (u.difference) {
      neg.difference = [&u](double t, double delta) { return -u.difference(t, delta); };
    }
    const PVResult nv = fractional_p_laplacian_1d(neg, x, prm, spec);
    const double odd_err = std::abs(nv.value + base.value);
    worst = std::max(worst, odd_err);
    ok = ok && odd_err <= 1e-12 * std::max(1.0, std::abs(base.value));

    // Scaling law: u_lam(t) = u(lam t) has value lam^{sp} * base(lam x).
    const double lam = 2.0;
    ScalarField1D scaled = u;
    scaled.f = [&u, lam](double t) { return u.f(lam * t); };
    scaled.kinks.clear();
    for (double t : u.kinks) scaled.kinks.push_back(t / lam);
    if (u.difference) {
      scaled.difference = [&u, lam](double t, double delta) {
        return u.difference(lam * t, lam * delta);
      };
    }
    const PVResult left = fractional_p_laplacian_1d(scaled, x / lam, prm, spec);
    const PVResult right = fractional_p_laplacian_1d(u, x, prm, spec);
    const double scaling_err = std::abs(left.value - std::pow(lam, prm.s * prm.p) * right.value);
    worst = std::max(worst, scaling_err);
    ok = ok && scaling_err <=
                   std::max(1e-9, left.error_estimate +
                                      std::pow(lam, prm.s * prm.p) * right.error_estimate + 1e-10);
  }

  // p = 2 additivity across two of the profiles.
  {
    const ScalarField1D& a = fields[0];
    const ScalarField1D& b = fields[2];
    ScalarField1D sum;
    sum.f = [&a, &b](double t) { return a.f(t) + b.f(t); };
    sum.kinks = a.kinks;
    sum.growth_coeff = a.growth_coeff + b.growth_coeff;
    sum.growth_exponent = std::max(a.growth_exponent, b.growth_exponent);
    sum.difference = [&a, &b](double t, double delta) {
      const double da = a.difference ? a.difference(t, delta) : a.f(t) - a.f(t + delta);
      const double db = b.difference ? b.difference(t, delta) : b.f(t) - b.f(t + delta);
      return da + db;
    };
    const double x = 0.6;
    const PVResult vs = fractional_p_laplacian_1d(sum, x, prm, spec);
    const PVResult va = fractional_p_laplacian_1d(a, x, prm, spec);
    const PVResult vb = fractional_p_laplacian_1d(b, x, prm, spec);
    const double add_err = std::abs(vs.value - va.value - vb.value);
    worst = std::max(worst, add_err);
    ok = ok && add_err <= std::max(1e-9, vs.error_estimate + va.error_estimate + vb.error_estimate);
  }

  r.passed = ok;
  r.detail = "max invariant violation = " + fmt(worst);
  return r;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  std::vector<CriterionResult> results;
  auto add = [&](CriterionResult r) {
    out << "criterion " << r.id << " [" << (r.passed ? "PASS" : "FAIL") << "] " << r.name << " -- "
        << r.detail << "\n" << std::flush;
    results.push_back(std::move(r));
  };
  add(criterion1());
  add(criterion2());
  add(criterion3());
  add(criterion4());
  add(criterion5());
  add(criterion6());
  add(criterion7());
  return results;
}

}  // namespace fplab
