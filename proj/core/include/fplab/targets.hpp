#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fplab/multiindex.hpp"

namespace fplab {

/// A target function on the closed unit ball: callable value, optional
/// analytic derivatives (finite differences are used where absent).
struct TargetFunction {
  std::string name;
  int dim = 1;
  std::function<double(const std::vector<double>&)> value;
  std::function<double(const MultiIndex&, const std::vector<double>&)> derivative;  // may be null

  bool has_derivatives() const { return static_cast<bool>(derivative); }
};

struct PolynomialTerm {
  double coeff = 0.0;
  MultiIndex gamma;
};

/// Finitely many monomial terms; duplicates merged on construction.
struct PolynomialTarget {
  std::vector<PolynomialTerm> terms;

  void merge_duplicates();
  double eval(const std::vector<double>& x) const;
  double derivative(const MultiIndex& alpha, const std::vector<double>& x) const;
  int degree() const;
};

/// x^gamma and its derivatives: D^alpha x^gamma = (gamma!/(gamma-alpha)!) x^{gamma-alpha}.
double monomial_eval(const MultiIndex& gamma, const std::vector<double>& x);
double monomial_derivative(const MultiIndex& gamma, const MultiIndex& alpha,
                           const std::vector<double>& x);

TargetFunction target_polynomial(const PolynomialTarget& poly, int d, const std::string& name);
TargetFunction target_constant(double c, int d);
TargetFunction target_monomial(const MultiIndex& gamma, int d);
TargetFunction target_exp_x1(int d);
/// (1 + <x, eta>)^s -- same closed form as the atoms, |eta| < 1 required.
TargetFunction target_ridge(const std::vector<double>& eta, double s);

/// Lookup of the builtin names understood by the CLI:
/// "1"/"one", "x1", "x2", "x1^2", "x1^2+x2", "exp(x1)", "ridge".
/// Throws std::invalid_argument for anything else.
TargetFunction builtin_target(const std::string& name, int d, double s);

}  // namespace fplab
