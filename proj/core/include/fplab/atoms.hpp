#pragma once

#include <vector>

#include "fplab/multiindex.hpp"

namespace fplab {

/// Sign convention with sign_plus(0) = +1.
double sign_plus(double t);

/// (max{0, t})^s.
double ramp_pow(double t, double s);

/// ramp_pow of the last coordinate of x.
double ramp_pow_last(const std::vector<double>& x, double s);

/// Nonzero direction vector in R^d.
struct Direction {
  std::vector<double> xi;

  Direction() = default;
  explicit Direction(std::vector<double> v) : xi(std::move(v)) {}

  int dim() const { return static_cast<int>(xi.size()); }
  double norm() const;
  void validate() const;  // throws on zero vector
};

/// Reflection mapping xi to |xi| e_d. Uses the dedicated formula when xi is
/// (numerically) antipodal to |xi| e_d, where the generic one degenerates.
std::vector<double> reflect(const std::vector<double>& x, const Direction& xi);

/// coeff * (max{0, 1 + <x, xi>})^s -- one generator of the approximation family.
/// Its operator vanishes on the half space {<xi, x> > -1}; for |xi| <= 1 that
/// region contains the closed unit ball.
struct Atom {
  double coeff = 1.0;
  Direction dir;
  double s = 0.5;
};

struct AtomSum {
  std::vector<Atom> atoms;

  int dim() const { return atoms.empty() ? 0 : atoms.front().dir.dim(); }
};

double atom_eval(const Atom& a, const std::vector<double>& x);

/// Exact derivative from the closed form
///   coeff * s(s-1)...(s-|alpha|+1) * (1 + <x,xi>)^{s-|alpha|} * xi^alpha.
/// Valid only strictly inside the support half space; throws std::domain_error
/// when 1 + <x, xi> <= 0.
double atom_derivative(const Atom& a, const MultiIndex& alpha, const std::vector<double>& x);

/// Exact sup over the closed ball of radius r of |D^alpha (coeff H_xi)|,
/// from monotonicity of the power factor. Requires r * |xi| < 1.
double atom_sup_derivative_bound(const Atom& a, const MultiIndex& alpha, double r);

/// Direction scaled by r (coefficient unchanged), so that
/// atom_eval(out, x) == atom_eval(a, r*x) exactly. Requires r > 0.
Atom atom_rescale(const Atom& a, double r);

double atom_sum_eval(const AtomSum& u, const std::vector<double>& x);
double atom_sum_derivative(const AtomSum& u, const MultiIndex& alpha, const std::vector<double>& x);

/// ramp_pow(t, s) - ramp_pow(t + delta, s) evaluated without the catastrophic
/// cancellation of the naive subtraction (expm1/log1p on the smooth branch).
/// The principal-value quadrature leans on this near the singularity.
double ramp_pow_difference(double t, double delta, double s);

}  // namespace fplab
