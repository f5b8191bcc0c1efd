#include "fplab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "fplab/integrate.hpp"
#include "fplab/special_functions.hpp"

namespace fplab {

void QuadratureSpec::validate() const {
  if (pv_epsilons.empty()) throw std::invalid_argument("QuadratureSpec: empty cutoff schedule");
  double prev = std::numeric_limits<double>::infinity();
  for (double e : pv_epsilons) {
    if (!(e > 0.0) || !(e < prev)) {
      throw std::invalid_argument("QuadratureSpec: pv_epsilons must be strictly decreasing and positive");
    }
    prev = e;
  }
  if (!(tail_radius > pv_epsilons.front())) {
    throw std::invalid_argument("QuadratureSpec: tail_radius must exceed the largest cutoff");
  }
  for (double t : kink_points) {
    if (!std::isfinite(t)) {
      throw std::invalid_argument("QuadratureSpec: kink_points must be finite");
    }
  }
  if (!(panel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: panel_tol must be positive");
  if (max_subdivisions < 8) throw std::invalid_argument("QuadratureSpec: max_subdivisions too small");
}

double p_power(double t, double p) {
  // |t|^{p-2} t = sign(t) |t|^{p-1}; values below 1e-300 collapse to 0 so the
  // |t|^{p-2} factor cannot manufacture infinities for p < 2.
  const double a = std::abs(t);
  if (a < 1e-300) return 0.0;
  return std::copysign(std::pow(a, p - 1.0), t);
}

ScalarField1D ramp_field(double s) {
  ScalarField1D u;
  u.f = [s](double t) { return ramp_pow(t, s); };
  u.kinks = {0.0};
  u.growth_coeff = 1.0;
  u.growth_exponent = s;
  u.difference = [s](double t, double delta) { return ramp_pow_difference(t, delta, s); };
  return u;
}

ScalarField1D constant_field(double c) {
  ScalarField1D u;
  u.f = [c](double) { return c; };
  u.growth_coeff = std::abs(c) + 1.0;
  u.growth_exponent = 0.0;
  u.difference = [](double, double) { return 0.0; };
  return u;
}

ScalarFieldND ramp_field_nd(int d, double s) {
  ScalarFieldND u;
  u.dim = d;
  u.f = [s](const std::vector<double>& x) { return ramp_pow_last(x, s); };
  Hyperplane h;
  h.normal = std::vector<double>(d, 0.0);
  h.normal[d - 1] = 1.0;
  h.offset = 0.0;
  u.kinks = {h};
  u.growth_coeff = 1.0;
  u.growth_exponent = s;
  u.difference = [s](const std::vector<double>& x, const std::vector<double>& y) {
    return ramp_pow_difference(x.back(), y.back(), s);
  };
  return u;
}

ScalarFieldND atom_field(const Atom& a) {
  a.dir.validate();
  ScalarFieldND u;
  u.dim = a.dir.dim();
  const Atom atom = a;
  u.f = [atom](const std::vector<double>& x) { return atom_eval(atom, x); };
  Hyperplane h;
  h.normal = a.dir.xi;
  h.offset = -1.0;
  u.kinks = {h};
  u.growth_coeff = std::abs(a.coeff) * std::max(1.0, std::pow(a.dir.norm(), a.s));
  u.growth_exponent = a.s;
  u.difference = [atom](const std::vector<double>& x, const std::vector<double>& y) {
    const double base = 1.0 + dot(x, atom.dir.xi);
    return atom.coeff * ramp_pow_difference(base, dot(y, atom.dir.xi), atom.s);
  };
  return u;
}

namespace {

struct PairIntegrand {
  // F(y) = [phi_p(u(x)-u(x+y)) + phi_p(u(x)-u(x-y))] / y^{1+sp}, y > 0.
  std::function<double(double)> diff_fwd;  // u(x) - u(x+y)
  std::function<double(double)> diff_bwd;  // u(x) - u(x-y)
  double p = 2.0;
  double one_plus_sp = 1.5;

  double operator()(double y) const {
    const double num = p_power(diff_fwd(y), p) + p_power(diff_bwd(y), p);
    if (num == 0.0) return 0.0;
    return num * std::pow(y, -one_plus_sp);
  }
};

// Locate sign changes of g on [lo, hi] by a log-spaced scan plus bisection.
void append_zero_crossings(const std::function<double(double)>& g, double lo, double hi,
                           std::vector<double>& out) {
  if (!(hi > lo) || !(lo > 0.0)) return;
  const int per_decade = 24;
  const double decades = std::log10(hi / lo);
  const int n = std::max(8, static_cast<int>(per_decade * decades));
  double prev_y = lo;
  double prev_v = g(lo);
  for (int i = 1; i <= n; ++i) {
    const double y = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    const double v = g(y);
    if (prev_v != 0.0 && v != 0.0 && std::signbit(prev_v) != std::signbit(v)) {
      double a = prev_y, b = y, va = prev_v;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        const double vm = g(m);
        if (vm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(vm) == std::signbit(va)) {
          a = m;
          va = vm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    prev_y = y;
    prev_v = v;
  }
}

struct TailPiece {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

}  // namespace

PVResult fractional_p_laplacian_1d(const ScalarField1D& u, double x, const Params& params,
                                   const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (!u.f) throw std::invalid_argument("fractional_p_laplacian_1d: field has no callable");
  const double s = params.s;
  const double p = params.p;
  const double sp = s * p;
  const double g = u.growth_exponent;
  const double C = u.growth_coeff;
  if (!(g >= 0.0) || !(C >= 0.0)) {
    throw std::invalid_argument("fractional_p_laplacian_1d: invalid growth declaration");
  }
  if (g * (p - 1.0) >= sp) {
    throw std::invalid_argument(
        "fractional_p_laplacian_1d: growth exponent too large, tail integral may diverge");
  }

  std::vector<double> kinks(u.kinks);
  kinks.insert(kinks.end(), spec.kink_points.begin(), spec.kink_points.end());
  for (double t : kinks) {
    if (std::abs(t - x) < 1e-12 * std::max(1.0, std::abs(x))) {
      throw std::domain_error("fractional_p_laplacian_1d: x coincides with a declared kink");
    }
  }

  const double ux = u.f(x);
  auto diff = [&](double delta) -> double {
    return u.difference ? u.difference(x, delta) : (ux - u.f(x + delta));
  };

  const double eps_min = spec.pv_epsilons.back();
  // Keep every folded kink inside the adaptive region: the compactified tail
  // rule only tolerates endpoint singularities, not interior kinks.
  double R = spec.tail_radius;
  for (double t : kinks) {
    const double y = std::abs(t - x);
    if (y >= 0.5 * R) R = std::min(4.0 * y, 1e30);
  }

  // Growth declaration check by tail sampling.
  for (double t = R; t <= 64.0 * R; t *= 4.0) {
    const double env = 8.0 * C * (1.0 + std::pow(t, g));
    if (std::abs(u.f(x + t)) > env || std::abs(u.f(x - t)) > env) {
      throw std::invalid_argument("fractional_p_laplacian_1d: declared growth envelope violated");
    }
  }

  PairIntegrand pair;
  pair.diff_fwd = [&](double y) { return diff(y); };
  pair.diff_bwd = [&](double y) { return diff(-y); };
  pair.p = p;
  pair.one_plus_sp = 1.0 + sp;

  // Breakpoints in the pair coordinate: folded kinks plus difference-zero
  // crossings of either branch (phi_p is not smooth at 0).
  std::vector<double> breaks;
  for (double t : kinks) {
    const double y = std::abs(t - x);
    if (y > eps_min && y < R) breaks.push_back(y);
  }
  append_zero_crossings(pair.diff_fwd, eps_min, R, breaks);
  append_zero_crossings(pair.diff_bwd, eps_min, R, breaks);
  std::sort(breaks.begin(), breaks.end());

  PVResult out;
  std::size_t evals = 0;
  auto pair_fn = [&](double y) {
    ++evals;
    return pair(y);
  };

  // Cutoff schedule: base integral from the largest cutoff, then decade increments.
  const auto& eps = spec.pv_epsilons;
  const int K = static_cast<int>(eps.size());
  double quad_err = 0.0;
  IntegralResult base =
      integrate_adaptive(pair_fn, eps.front(), R, spec.panel_tol, 1e-12, spec.max_subdivisions, breaks);
  quad_err += base.error;
  double S = base.value;
  std::vector<double> increments;  // k-th entry: integral over [eps[k+1], eps[k]]
  for (int k = 1; k < K; ++k) {
    IntegralResult inc = integrate_adaptive(pair_fn, eps[k], eps[k - 1], spec.panel_tol, 1e-12,
                                            spec.max_subdivisions, breaks);
    quad_err += inc.error;
    S += inc.value;
    increments.push_back(inc.value);
  }

  // Tail beyond R, computed on the compactified variable y = R / w. The
  // integrand decays like w^{s'-1} near w = 0, which tanh-sinh resolves; far
  // beyond any double-safe y the growth envelope bounds the leftover mass.
  double cap_log = std::min(std::log(1e40), std::log(1e290) / (1.0 + sp));
  if (g > 0.0) {
    cap_log = std::min(cap_log, (std::log(1e290) / (p - 1.0) - std::log(std::max(C, 1.0))) / g);
  }
  const double y_cap = std::exp(cap_log);

  const double A_env = std::abs(ux) + C * (1.0 + std::pow(std::abs(x), g));
  const double cfac = std::pow(2.0, std::max(p - 2.0, 0.0));
  auto envelope = [&](double Y) {
    const double t1 = std::pow(A_env, p - 1.0) * std::pow(Y, -sp) / sp;
    const double t2 =
        std::pow(C, p - 1.0) * std::pow(Y, g * (p - 1.0) - sp) / (sp - g * (p - 1.0));
    return 2.0 * cfac * (t1 + t2);
  };

  double tail_truncation = 0.0;
  auto tail_fn = [&](double /*w*/, double dist0, double /*dist1*/) -> double {
    const double ww = dist0;  // distance to 0 is w itself, computed exactly
    const double y = R / ww;
    if (y > y_cap) {
      tail_truncation = envelope(y_cap);
      return 0.0;
    }
    ++evals;
    return pair(y) * R / (ww * ww);
  };
  IntegralResult tail = integrate_tanh_sinh(tail_fn, 0.0, 1.0, spec.panel_tol, 1e-12);

  // Extrapolate the singular mass below the smallest cutoff. The increments of
  // a power-type integrand shrink geometrically decade over decade; estimate
  // the ratio from the data and sum the remaining series.
  double remainder = 0.0;
  double extrap_err = 0.0;
  bool converged = false;
  const double scale = std::max({std::abs(S), std::abs(tail.value), 1.0 / sp});
  const double noise_floor = std::max(10.0 * quad_err, 1e-14 * scale);
  const int n_inc = static_cast<int>(increments.size());
  if (n_inc == 0) {
    converged = true;
  } else if (std::abs(increments.back()) <= noise_floor) {
    converged = true;
    extrap_err = std::abs(increments.back());
  } else if (n_inc >= 2) {
    const double rho1 = increments[n_inc - 1] / increments[n_inc - 2];
    double rho2 = rho1;
    if (n_inc >= 3) rho2 = increments[n_inc - 2] / increments[n_inc - 3];
    if (rho1 > 0.0 && rho1 < 0.95 && rho2 > 0.0 && rho2 < 0.95) {
      const double rem1 = increments.back() * rho1 / (1.0 - rho1);
      const double rem2 = increments.back() * rho2 / (1.0 - rho2);
      remainder = rem1;
      extrap_err = std::abs(rem1 - rem2) + 0.05 * std::abs(rem1);
      converged = true;
    } else {
      extrap_err = 10.0 * std::abs(increments.back());
    }
  } else {
    extrap_err = 10.0 * std::abs(increments.back());
  }

  out.value = S + remainder + tail.value;
  out.error_estimate = quad_err + tail.error + extrap_err + tail_truncation;
  out.tail_bound = envelope(R);
  out.converged = converged && tail.converged;
  return out;
}

namespace {

ScalarField1D restrict_to_ray(const ScalarFieldND& u, const std::vector<double>& x,
                              const std::vector<double>& omega) {
  ScalarField1D line;
  line.f = [&u, x, omega](double t) {
    std::vector<double> pt(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pt[i] = x[i] + t * omega[i];
    return u.f(pt);
  };
  for (const auto& h : u.kinks) {
    const double den = dot(h.normal, omega);
    if (std::abs(den) > 1e-13 * vector_norm(h.normal)) {
      line.kinks.push_back((h.offset - dot(h.normal, x)) / den);
    }
  }
  line.growth_exponent = u.growth_exponent;
  line.growth_coeff = u.growth_coeff * (1.0 + std::pow(vector_norm(x), u.growth_exponent));
  if (u.difference) {
    line.difference = [&u, x, omega](double t, double delta) {
      std::vector<double> base(x.size()), step(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        base[i] = x[i] + t * omega[i];
        step[i] = delta * omega[i];
      }
      return u.difference(base, step);
    };
  }
  return line;
}

}  // namespace

PVResult fractional_p_laplacian_nd(const ScalarFieldND& u, const std::vector<double>& x,
                                   const Params& params, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  const int d = params.d;
  if (d != 2 && d != 3) {
    throw std::invalid_argument("fractional_p_laplacian_nd: only d in {2,3} is supported");
  }
  if (static_cast<int>(x.size()) != d || u.dim != d) {
    throw std::invalid_argument("fractional_p_laplacian_nd: dimension mismatch");
  }
  for (const auto& h : u.kinks) {
    if (std::abs(dot(h.normal, x) - h.offset) < 1e-12 * std::max(1.0, vector_norm(x))) {
      throw std::domain_error("fractional_p_laplacian_nd: x lies on a declared kink hyperplane");
    }
  }

  Params line_params = params;
  line_params.d = 1;

  double max_radial_err = 0.0;
  bool all_converged = true;
  std::size_t radial_calls = 0;

  auto radial_value = [&](const std::vector<double>& omega) -> double {
    ScalarField1D line = restrict_to_ray(u, x, omega);
    PVResult r = fractional_p_laplacian_1d(line, 0.0, line_params, spec);
    max_radial_err = std::max(max_radial_err, r.error_estimate);
    all_converged = all_converged && r.converged;
    ++radial_calls;
    return r.value;
  };

  PVResult out;
  if (d == 2) {
    // Half-turn integral of the paired radial values; split where a kink
    // hyperplane runs parallel to the ray.
    std::vector<double> theta_breaks;
    for (const auto& h : u.kinks) {
      const double n1 = h.normal[0];
      const double n2 = h.normal[1];
      double th = (std::abs(n2) > 1e-300) ? std::atan(-n1 / n2) : M_PI_2;
      while (th < 0.0) th += M_PI;
      while (th >= M_PI) th -= M_PI;
      if (th > 1e-12 && th < M_PI - 1e-12) theta_breaks.push_back(th);
    }
    auto integrand = [&](double th) {
      return radial_value({std::cos(th), std::sin(th)});
    };
    IntegralResult ang =
        integrate_adaptive(integrand, 0.0, M_PI, 1e-9, 1e-6, 512, theta_breaks);
    out.value = ang.value;
    out.error_estimate = ang.error + M_PI * max_radial_err;
    out.converged = ang.converged && all_converged;
  } else {
    // Upper hemisphere: adaptive in c = cos(theta), fixed periodic rule in phi.
    const int n_phi = 24;
    auto integrand = [&](double c) {
      const double r = std::sqrt(std::max(0.0, 1.0 - c * c));
      double acc = 0.0;
      for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
        acc += radial_value({r * std::cos(phi), r * std::sin(phi), c});
      }
      return acc * (2.0 * M_PI / n_phi);
    };
    IntegralResult ang = integrate_adaptive(integrand, 0.0, 1.0, 1e-7, 1e-4, 64);
    out.value = ang.value;
    out.error_estimate = ang.error + 2.0 * M_PI * max_radial_err;
    out.converged = ang.converged && all_converged;
  }
  (void)radial_calls;
  return out;
}

double reduction_rhs(const std::vector<double>& x, const Params& params,
                     const QuadratureSpec& spec) {
  params.validate();
  if (params.d < 2) throw std::invalid_argument("reduction_rhs: requires d > 1");
  if (static_cast<int>(x.size()) != params.d) {
    throw std::invalid_argument("reduction_rhs: dimension mismatch");
  }
  const double xd = x.back();
  if (std::abs(xd) < 1e-300) throw std::domain_error("reduction_rhs: requires x_d != 0");

  const double sp = params.s * params.p;
  const double prefactor =
      0.5 * sphere_measure(params.d - 1) * beta(0.5 * (params.d - 1), 0.5 * (sp + 1.0));

  Params one = params;
  one.d = 1;
  PVResult v = fractional_p_laplacian_1d(ramp_field(params.s), sign_plus(xd), one, spec);
  if (!v.converged) throw NonConvergenceError("reduction_rhs: 1D principal value did not stabilize");
  return prefactor * std::pow(std::abs(xd), -params.s) * v.value;
}

double limit_quotient_target(double s, double p) {
  if (p == 1.0) return 0.0;
  return std::pow(s, p - 1.0) * (p - 1.0) * (1.0 - s);
}

double limit_quotient(double eps, double s, double p) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("limit_quotient: eps must lie in (0, 1)");
  }
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("limit_quotient: s must lie in (0, 1)");
  if (p == 1.0) return 0.0;  // both numerator terms equal 1
  if (eps >= 1e-4) {
    const double a = 1.0 - std::pow(1.0 - eps, s);
    const double b = std::pow(1.0 + eps, s) - 1.0;
    return (std::pow(a, p - 1.0) - std::pow(b, p - 1.0)) / std::pow(eps, p);
  }
  if (eps >= 1e-8) {
    // (1 +- eps)^s - 1 via expm1/log1p keeps the digits the plain powers lose.
    const double a = -std::expm1(s * std::log1p(-eps));
    const double b = std::expm1(s * std::log1p(eps));
    return (std::pow(a, p - 1.0) - std::pow(b, p - 1.0)) / std::pow(eps, p);
  }
  // Below 1e-8 the quotient equals its limit to O(eps^2); the series value is
  // the only finite-precision-representable answer (both powers underflow).
  return limit_quotient_target(s, p);
}

LimitCheckReport limit_quotient_check(double s, double p, const std::vector<double>& schedule,
                                      double tolerance) {
  LimitCheckReport rep;
  rep.target = limit_quotient_target(s, p);
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double e = schedule[i];
    if (!(e > 0.0) || !(e < prev)) {
      throw std::invalid_argument("limit_quotient_check: schedule must be strictly decreasing");
    }
    prev = e;
    const double q = limit_quotient(e, s, p);
    rep.epsilons.push_back(e);
    rep.quotients.push_back(q);
    rep.abs_errors.push_back(std::abs(q - rep.target));
  }
  for (std::size_t i = 2; i < rep.abs_errors.size(); ++i) {
    if (rep.abs_errors[i] > rep.abs_errors[i - 1] * (1.0 + 1e-9) + 1e-15) {
      monotone = false;
    }
  }
  const double scale = std::max(1.0, std::abs(rep.target));
  rep.converged = monotone && rep.abs_errors.back() <= tolerance * scale;
  return rep;
}

SplitIntegrals ramp_split_integrals(double s, double p, const QuadratureSpec& spec) {
  Params check{s, p, 1};
  check.validate();
  spec.validate();
  const double sp = s * p;

  SplitIntegrals out;
  out.i1 = 1.0 / sp;

  // Far-side integral mapped to a finite interval (r = t/(1-t), then u = 1-t):
  // i2 = int_0^{1/2} u^{s-1} (1 - u^s)^{p-1} (1 - u)^{-1-sp} du.
  auto i2_fn = [&](double /*x*/, double da, double /*db*/) {
    const double uu = da;
    return std::pow(uu, s - 1.0) * std::pow(1.0 - std::pow(uu, s), p - 1.0) *
           std::pow(1.0 - uu, -1.0 - sp);
  };
  IntegralResult i2 = integrate_tanh_sinh(i2_fn, 0.0, 0.5, 1e-14, 1e-13);
  out.i2 = i2.value;
  out.i2_error = i2.error;

  // Symmetric principal-value core in its combined even-reflection form: the
  // integrand is the small-cutoff quotient times r^{p-1-sp}, integrable at 0.
  auto i3_fn = [&](double /*x*/, double da, double /*db*/) {
    const double r = std::min(da, 1.0 - 1e-16);
    return limit_quotient(r, s, p) * std::pow(r, p - 1.0 - sp);
  };
  IntegralResult i3 = integrate_tanh_sinh(i3_fn, 0.0, 1.0, 1e-14, 1e-13);
  out.i3 = i3.value;
  out.i3_error = i3.error;

  out.sum = out.i1 - out.i2 + out.i3;
  return out;
}

double ramp_i2_by_parts(double s, double p) {
  const double sp = s * p;
  // J = int_0^1 w^{s-1} (1+w)^{s-1} ((1+w)^s - w^s)^{p-2} dw  (w = 1/r).
  auto j_fn = [&](double /*x*/, double da, double /*db*/) {
    const double w = da;
    const double base = std::pow(1.0 + w, s) - std::pow(w, s);
    return std::pow(w, s - 1.0) * std::pow(1.0 + w, s - 1.0) * std::pow(base, p - 2.0);
  };
  IntegralResult j = integrate_tanh_sinh(j_fn, 0.0, 1.0, 1e-14, 1e-13);
  const double head = std::pow(std::pow(2.0, s) - 1.0, p - 1.0);
  return (head + s * (p - 1.0) * j.value) / sp;
}

HarmonicityReport harmonicity_residual(const AtomSum& u, const std::vector<std::vector<double>>& points,
                                       const Params& params, const QuadratureSpec& spec,
                                       bool direct) {
  params.validate();
  spec.validate();
  HarmonicityReport rep;
  rep.per_atom_max.assign(u.atoms.size(), 0.0);

  const double sp = params.s * params.p;
  const double prefactor =
      (params.d == 1)
          ? 1.0
          : 0.5 * sphere_measure(params.d - 1) * beta(0.5 * (params.d - 1), 0.5 * (sp + 1.0));

  // One canonical 1D value per parameter set serves every atom/point via the
  // reduction factorization.
  double v_plus = 0.0;
  bool v_cached = false;
  Params one = params;
  one.d = 1;

  for (std::size_t ai = 0; ai < u.atoms.size(); ++ai) {
    const Atom& a = u.atoms[ai];
    rep.max_abs_coeff = std::max(rep.max_abs_coeff, std::abs(a.coeff));
    if (a.coeff == 0.0) continue;  // absent generator contributes exactly 0
    a.dir.validate();
    const double nrm = a.dir.norm();
    if (nrm > 1.0 + 1e-12) {
      throw std::invalid_argument("harmonicity_residual: atom with |xi| > 1 is outside the contract");
    }
    for (const auto& x : points) {
      const double w = (1.0 + dot(x, a.dir.xi)) / nrm;
      if (!(w > 0.0)) {
        throw std::domain_error("harmonicity_residual: point outside the atom's support half space");
      }
      double resid;
      if (direct) {
        Atom unit = a;
        unit.coeff = 1.0;
        if (params.d == 1) {
          ScalarFieldND f = atom_field(unit);
          ScalarField1D line;
          line.f = [f](double t) { return f.f({t}); };
          line.kinks = {-1.0 / unit.dir.xi[0]};
          line.growth_coeff = f.growth_coeff;
          line.growth_exponent = f.growth_exponent;
          line.difference = [f](double t, double delta) { return f.difference({t}, {delta}); };
          PVResult r = fractional_p_laplacian_1d(line, x[0], one, spec);
          if (!r.converged) throw NonConvergenceError("harmonicity_residual: 1D PV did not stabilize");
          resid = std::abs(r.value);
        } else {
          PVResult r = fractional_p_laplacian_nd(atom_field(unit), x, params, spec);
          if (!r.converged) throw NonConvergenceError("harmonicity_residual: nd PV did not stabilize");
          resid = std::abs(r.value);
        }
      } else {
        if (!v_cached) {
          PVResult r = fractional_p_laplacian_1d(ramp_field(params.s), 1.0, one, spec);
          if (!r.converged) {
            throw NonConvergenceError("harmonicity_residual: canonical 1D PV did not stabilize");
          }
          v_plus = r.value;
          v_cached = true;
        }
        resid = prefactor * std::pow(nrm, params.s * (params.p - 1.0)) *
                std::pow(w, -params.s) * std::abs(v_plus);
      }
      rep.per_atom_max[ai] = std::max(rep.per_atom_max[ai], resid);
    }
    rep.overall_max = std::max(rep.overall_max, rep.per_atom_max[ai]);
  }
  return rep;
}

}  // namespace fplab
