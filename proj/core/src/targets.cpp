#include "fplab/targets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fplab/atoms.hpp"
#include "fplab/grid.hpp"

namespace fplab {

double monomial_eval(const MultiIndex& gamma, const std::vector<double>& x) {
  double out = 1.0;
  for (int i = 0; i < gamma.dim(); ++i) {
    for (int j = 0; j < gamma.e[i]; ++j) out *= x[i];
  }
  return out;
}

double monomial_derivative(const MultiIndex& gamma, const MultiIndex& alpha,
                           const std::vector<double>& x) {
  double coeff = 1.0;
  double mono = 1.0;
  for (int i = 0; i < gamma.dim(); ++i) {
    const int g = gamma.e[i];
    const int a = alpha.e[i];
    if (a > g) return 0.0;
    for (int j = 0; j < a; ++j) coeff *= (g - j);
    for (int j = 0; j < g - a; ++j) mono *= x[i];
  }
  return coeff * mono;
}

void PolynomialTarget::merge_duplicates() {
  std::vector<PolynomialTerm> merged;
  for (const auto& t : terms) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const PolynomialTerm& m) { return m.gamma == t.gamma; });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->coeff += t.coeff;
    }
  }
  terms = std::move(merged);
}

double PolynomialTarget::eval(const std::vector<double>& x) const {
  double out = 0.0;
  for (const auto& t : terms) out += t.coeff * monomial_eval(t.gamma, x);
  return out;
}

double PolynomialTarget::derivative(const MultiIndex& alpha, const std::vector<double>& x) const {
  double out = 0.0;
  for (const auto& t : terms) out += t.coeff * monomial_derivative(t.gamma, alpha, x);
  return out;
}

int PolynomialTarget::degree() const {
  int deg = 0;
  for (const auto& t : terms) deg = std::max(deg, t.gamma.order());
  return deg;
}

TargetFunction target_polynomial(const PolynomialTarget& poly, int d, const std::string& name) {
  for (const auto& t : poly.terms) {
    if (t.gamma.dim() != d) throw std::invalid_argument("target_polynomial: dimension mismatch");
  }
  TargetFunction f;
  f.name = name;
  f.dim = d;
  PolynomialTarget p = poly;
  p.merge_duplicates();
  f.value = [p](const std::vector<double>& x) { return p.eval(x); };
  f.derivative = [p](const MultiIndex& alpha, const std::vector<double>& x) {
    return p.derivative(alpha, x);
  };
  return f;
}

TargetFunction target_constant(double c, int d) {
  PolynomialTarget p;
  p.terms.push_back({c, MultiIndex::zero(d)});
  return target_polynomial(p, d, c == 1.0 ? "1" : "constant");
}

TargetFunction target_monomial(const MultiIndex& gamma, int d) {
  PolynomialTarget p;
  p.terms.push_back({1.0, gamma});
  return target_polynomial(p, d, "x^" + gamma.to_string());
}

TargetFunction target_exp_x1(int d) {
  TargetFunction f;
  f.name = "exp(x1)";
  f.dim = d;
  f.value = [](const std::vector<double>& x) { return std::exp(x[0]); };
  f.derivative = [](const MultiIndex& alpha, const std::vector<double>& x) {
    for (int i = 1; i < alpha.dim(); ++i) {
      if (alpha.e[i] != 0) return 0.0;
    }
    return std::exp(x[0]);
  };
  return f;
}

TargetFunction target_ridge(const std::vector<double>& eta, double s) {
  Direction dir(eta);
  dir.validate();
  if (!(dir.norm() < 1.0)) {
    throw std::invalid_argument("target_ridge: |eta| must be below 1 so the ridge is smooth on the ball");
  }
  Atom a{1.0, dir, s};
  TargetFunction f;
  f.name = "ridge";
  f.dim = dir.dim();
  f.value = [a](const std::vector<double>& x) { return atom_eval(a, x); };
  f.derivative = [a](const MultiIndex& alpha, const std::vector<double>& x) {
    return atom_derivative(a, alpha, x);
  };
  return f;
}

TargetFunction builtin_target(const std::string& name, int d, double s) {
  if (name == "1" || name == "one") return target_constant(1.0, d);
  if (name == "x1") {
    MultiIndex g = MultiIndex::zero(d);
    g.e[0] = 1;
    return target_monomial(g, d);
  }
  if (name == "x2") {
    if (d < 2) throw std::invalid_argument("builtin_target: x2 needs d >= 2");
    MultiIndex g = MultiIndex::zero(d);
    g.e[1] = 1;
    return target_monomial(g, d);
  }
  if (name == "x1^2") {
    MultiIndex g = MultiIndex::zero(d);
    g.e[0] = 2;
    return target_monomial(g, d);
  }
  if (name == "x1^2+x2") {
    if (d < 2) throw std::invalid_argument("builtin_target: x1^2+x2 needs d >= 2");
    PolynomialTarget p;
    MultiIndex g1 = MultiIndex::zero(d);
    g1.e[0] = 2;
    MultiIndex g2 = MultiIndex::zero(d);
    g2.e[1] = 1;
    p.terms.push_back({1.0, g1});
    p.terms.push_back({1.0, g2});
    return target_polynomial(p, d, "x1^2+x2");
  }
  if (name == "exp(x1)" || name == "exp_x1") return target_exp_x1(d);
  if (name == "ridge") {
    std::vector<double> eta(d, 0.0);
    eta[0] = 0.4;
    if (d > 1) eta[1] = 0.2;
    return target_ridge(eta, s);
  }
  throw std::invalid_argument("builtin_target: unknown target '" + name + "'");
}

}  // namespace fplab
