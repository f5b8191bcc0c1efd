#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "fplab/atoms.hpp"
#include "fplab/grid.hpp"
#include "fplab/params.hpp"

namespace fplab {

/// Raised when a principal-value computation exhausts its cutoff schedule
/// without stabilizing.
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Controls for the principal-value quadrature.
struct QuadratureSpec {
  std::vector<double> pv_epsilons = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  double tail_radius = 1e4;
  std::vector<double> kink_points;  // extra non-smoothness locations of u
  double panel_tol = 1e-11;
  int max_subdivisions = 2000;

  void validate() const;  // schedule strictly decreasing and positive, etc.
};

struct PVResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;  // closed-form growth bound for |tail beyond tail_radius|
  bool converged = false;
};

/// A scalar function on the line with the structure the singular quadrature
/// needs declared up front: kink locations, a growth envelope
/// |u(t)| <= growth_coeff * (1 + |t|^growth_exponent), and (optionally) a
/// cancellation-free difference u(t) - u(t + delta).
struct ScalarField1D {
  std::function<double(double)> f;
  std::vector<double> kinks;
  double growth_coeff = 1.0;
  double growth_exponent = 0.0;
  /// Optional: stable difference u(t) - u(t+delta); nullptr falls back to
  /// naive subtraction (fine for p >= 2, noisy for p < 2 at tight tolerances).
  std::function<double(double t, double delta)> difference;
};

/// max{0,t}^s with kink and growth declared, difference via expm1/log1p.
ScalarField1D ramp_field(double s);
ScalarField1D constant_field(double c);

/// Hyperplane {x : <normal, x> = offset}.
struct Hyperplane {
  std::vector<double> normal;
  double offset = 0.0;
};

struct ScalarFieldND {
  int dim = 2;
  std::function<double(const std::vector<double>&)> f;
  std::vector<Hyperplane> kinks;
  double growth_coeff = 1.0;
  double growth_exponent = 0.0;
  std::function<double(const std::vector<double>& x, const std::vector<double>& y)> difference;
};

ScalarFieldND ramp_field_nd(int d, double s);
ScalarFieldND atom_field(const Atom& a);

/// |t|^{p-2} t, with the limit value 0 at t = 0 (p > 1).
double p_power(double t, double p);

/// Principal-value evaluation of the operator on the line at x:
/// matched-pair integration over the cutoff schedule, Richardson-style
/// extrapolation of the remaining singular mass, and a compactified tail.
PVResult fractional_p_laplacian_1d(const ScalarField1D& u, double x, const Params& params,
                                   const QuadratureSpec& spec);

/// Polar-decomposed evaluation for d in {2, 3}: adaptive (d=2) or fixed (d=3)
/// angular rule over per-direction 1D principal values.
PVResult fractional_p_laplacian_nd(const ScalarFieldND& u, const std::vector<double>& x,
                                   const Params& params, const QuadratureSpec& spec);

/// Right-hand side of the dimensional-reduction identity for the ramp profile:
/// (a_{d-1}/2) B((d-1)/2, (sp+1)/2) |x_d|^{-s} * (1D ramp value at sign(x_d)).
/// Requires d > 1 and x_d != 0.
double reduction_rhs(const std::vector<double>& x, const Params& params,
                     const QuadratureSpec& spec);

/// The small-cutoff quotient
///   [(1-(1-eps)^s)^{p-1} - ((1+eps)^s-1)^{p-1}] / eps^p,
/// evaluated in a cancellation-safe way; its limit as eps -> 0 is
/// s^{p-1}(p-1)(1-s).
double limit_quotient(double eps, double s, double p);

double limit_quotient_target(double s, double p);

struct LimitCheckReport {
  std::vector<double> epsilons;
  std::vector<double> quotients;
  std::vector<double> abs_errors;
  double target = 0.0;
  bool converged = false;
};

/// Evaluates the quotient along a decreasing schedule and checks that the
/// error against the limit shrinks and ends below tolerance.
LimitCheckReport limit_quotient_check(double s, double p,
                                      const std::vector<double>& schedule = {1e-1, 1e-2, 1e-3,
                                                                             1e-4, 1e-5},
                                      double tolerance = 1e-4);

/// The three-piece split of the operator value of the ramp profile at 1:
/// i1 = 1/(sp) exactly, i2 the far-side integral (computed after mapping to a
/// finite interval), i3 the symmetric principal-value core. The sum vanishes
/// analytically.
struct SplitIntegrals {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double sum = 0.0;
  double i2_error = 0.0;
  double i3_error = 0.0;
};

SplitIntegrals ramp_split_integrals(double s, double p, const QuadratureSpec& spec);

/// Integration-by-parts closed form of i2 (independent cross-check route):
/// (1/sp) { (2^s-1)^{p-1} + s(p-1) * J } with J computed by its own quadrature.
double ramp_i2_by_parts(double s, double p);

struct HarmonicityReport {
  std::vector<double> per_atom_max;  // unit-generator residual, max over points
  double overall_max = 0.0;
  double max_abs_coeff = 0.0;
};

/// Residual |operator of the unit generator H_xi| per atom, max over the given
/// points. Evaluated through the dimensional-reduction factorization (one 1D
/// principal value per parameter set); set direct = true to force full
/// d-dimensional quadrature (d <= 3). Requires |xi| <= 1 per atom and every
/// point strictly inside every atom's support half space.
HarmonicityReport harmonicity_residual(const AtomSum& u, const std::vector<std::vector<double>>& points,
                                       const Params& params, const QuadratureSpec& spec,
                                       bool direct = false);

}  // namespace fplab
