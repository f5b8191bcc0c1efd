#include "fplab/approximate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fplab/rng.hpp"
#include "fplab/special_functions.hpp"

namespace fplab {

namespace {

double fd_target_derivative(const TargetFunction& f, const MultiIndex& alpha,
                            const std::vector<double>& x, double step) {
  const int n = alpha.order();
  if (n == 0) return f.value(x);
  const double h = std::max(step, 2.0 * std::pow(1e-16, 1.0 / (n + 2.0)));
  std::vector<int> idx(alpha.dim(), 0);
  double acc = 0.0;
  while (true) {
    double coeff = 1.0;
    int flips = 0;
    std::vector<double> pt(x);
    for (int i = 0; i < alpha.dim(); ++i) {
      coeff *= binomial(alpha.e[i], idx[i]);
      flips += idx[i];
      pt[i] += (0.5 * alpha.e[i] - idx[i]) * h;
    }
    const double term = coeff * f.value(pt);
    acc += (flips % 2 == 0) ? term : -term;
    int i = 0;
    for (; i < alpha.dim(); ++i) {
      if (++idx[i] <= alpha.e[i]) break;
      idx[i] = 0;
    }
    if (i == alpha.dim()) break;
  }
  return acc / std::pow(h, n);
}

double target_derivative(const TargetFunction& f, const MultiIndex& alpha,
                         const std::vector<double>& x, double fd_step) {
  if (alpha.order() == 0) return f.value(x);
  if (f.has_derivatives()) return f.derivative(alpha, x);
  return fd_target_derivative(f, alpha, x, fd_step);
}

int auto_resolution(int d) {
  switch (d) {
    case 1: return 401;
    case 2: return 40;
    default: return 14;
  }
}

}  // namespace

std::pair<PolynomialTarget, double> fit_polynomial(const TargetFunction& f, int degree, int k,
                                                   const EvalGrid& grid, double* condition_out) {
  if (degree < 0) throw std::invalid_argument("fit_polynomial: degree must be non-negative");
  if (grid.dim != f.dim) throw std::invalid_argument("fit_polynomial: grid/target dimension mismatch");
  const auto alphas = enumerate_multiindices(f.dim, k);
  const auto gammas = enumerate_multiindices(f.dim, degree);
  const std::size_t n_pts = grid.size();
  const std::size_t rows = alphas.size() * n_pts;
  const std::size_t cols = gammas.size();
  if (rows < cols) throw std::invalid_argument("fit_polynomial: grid too small for the degree");

  // Stacked regression: every derivative row of every grid point at once, so
  // the fit is close in the C^k sense rather than only pointwise.
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  const Tolerances tol;
  std::size_t r = 0;
  for (const auto& alpha : alphas) {
    for (std::size_t i = 0; i < n_pts; ++i, ++r) {
      const auto& x = grid.points[i];
      for (std::size_t c = 0; c < cols; ++c) {
        A(r, c) = monomial_derivative(gammas[c], alpha, x);
      }
      b(r) = target_derivative(f, alpha, x, tol.fd_step);
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (condition_out) *condition_out = cond;
  if (!(cond < 1e12)) {
    throw std::runtime_error("fit_polynomial: basis condition " + std::to_string(cond) +
                             " too high for this grid/degree");
  }
  Eigen::VectorXd coeffs = svd.solve(b);

  PolynomialTarget poly;
  double max_c = 0.0;
  for (std::size_t c = 0; c < cols; ++c) max_c = std::max(max_c, std::abs(coeffs(c)));
  for (std::size_t c = 0; c < cols; ++c) {
    if (std::abs(coeffs(c)) > 1e-14 * std::max(max_c, 1.0)) {
      poly.terms.push_back({coeffs(c), gammas[c]});
    }
  }
  poly.merge_duplicates();

  // C^k grid norm of the residual table.
  DerivativeTable residuals;
  for (const auto& alpha : alphas) {
    std::vector<double> vals(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i) {
      const auto& x = grid.points[i];
      vals[i] = poly.derivative(alpha, x) - target_derivative(f, alpha, x, tol.fd_step);
    }
    residuals[alpha] = std::move(vals);
  }
  return {poly, ck_grid_norm(residuals, k)};
}

MonomialSurrogate monomial_surrogate(const MultiIndex& gamma, int k, const Params& params,
                                     int budget, std::uint64_t seed, double magnitude_scale,
                                     double residual_tol) {
  params.validate();
  if (gamma.dim() != params.d) throw std::invalid_argument("monomial_surrogate: dimension mismatch");
  const int m = k + gamma.order();
  const Jet target = Jet::monomial(gamma, m);

  auto build = [&](double scale) {
    MonomialSurrogate out;
    out.gamma = gamma;
    out.k = k;
    const auto dirs = default_directions(params.d, m, budget, seed, scale);
    const JetSystem sys = build_jet_system(dirs, params.s, m);
    out.match = solve_jet(sys, target, residual_tol);
    out.atoms = out.match.to_atom_sum();
    out.scale = 1.0;
    out.c_bound = surrogate_remainder_bound(out, k);
    out.g_norm_bound = out.c_bound;
    return out;
  };

  if (magnitude_scale > 0.0) return build(magnitude_scale);

  // Direction magnitudes trade conditioning (wide spread keeps the jet-system
  // coefficients small) against the (1-|xi|)^{s-m-1} growth of the sup bounds.
  // Pick the candidate that minimizes the remainder constant.
  MonomialSurrogate best;
  bool have = false;
  for (double c : {2.0, 3.0, 4.0, 6.0}) {
    const double scale = std::min(1.0, c / (m + 1.0));
    MonomialSurrogate cand;
    try {
      cand = build(scale);
    } catch (const std::runtime_error&) {
      continue;  // rank/condition failure at this magnitude set
    }
    if (!have || cand.c_bound < best.c_bound) {
      best = std::move(cand);
      have = true;
    }
    if (scale >= 1.0) break;  // larger candidates are identical
  }
  if (!have) {
    throw std::runtime_error("monomial_surrogate: no magnitude scale produced a solvable system");
  }
  return best;
}

double surrogate_remainder_bound(const MonomialSurrogate& s, int k) {
  if (s.atoms.atoms.empty()) return 0.0;
  const int d = s.gamma.dim();
  const int q = s.gamma.order() + 1;
  // sum over |beta| = q of 1/beta! equals d^q / q!.
  double beta_sum = 1.0;
  for (int j = 1; j <= q; ++j) beta_sum = beta_sum * d / j;

  double norm_bound = 0.0;
  for (const auto& alpha : enumerate_multiindices(d, k + s.gamma.order() + 1)) {
    for (const auto& a : s.atoms.atoms) {
      norm_bound += atom_sup_derivative_bound(a, alpha, 1.0);
    }
  }
  return beta_sum * norm_bound;
}

std::vector<double> choose_scale(double eps, const PolynomialTarget& target,
                                 const std::vector<double>& c_bounds) {
  if (!(eps > 0.0)) throw std::invalid_argument("choose_scale: eps must be positive");
  if (target.terms.size() != c_bounds.size()) {
    throw std::invalid_argument("choose_scale: one bound per polynomial term required");
  }
  std::size_t active = 0;
  for (std::size_t i = 0; i < c_bounds.size(); ++i) {
    if (c_bounds[i] < 0.0) throw std::invalid_argument("choose_scale: bounds must be non-negative");
    if (std::abs(target.terms[i].coeff) * c_bounds[i] > 0.0) ++active;
  }
  std::vector<double> scales(c_bounds.size(), 1.0);
  if (active == 0) return scales;
  const double share = 0.5 * eps / static_cast<double>(active);
  for (std::size_t i = 0; i < c_bounds.size(); ++i) {
    const double weight = std::abs(target.terms[i].coeff) * c_bounds[i];
    if (weight > 0.0) scales[i] = std::min(1.0, share / weight);
  }
  return scales;
}

MonomialSurrogate rescale_surrogate(const MonomialSurrogate& s, double r) {
  if (!(r > 0.0) || r > 1.0) {
    throw std::invalid_argument("rescale_surrogate: scale must lie in (0, 1]");
  }
  MonomialSurrogate out = s;
  const double denom = std::pow(r, s.gamma.order());
  for (auto& a : out.atoms.atoms) {
    a = atom_rescale(a, r);
    a.coeff /= denom;
  }
  out.scale = s.scale * r;
  out.g_norm_bound = out.c_bound * out.scale;
  return out;
}

double measure_ck_error(const TargetFunction& f, const AtomSum& u, int k, const EvalGrid& grid,
                        const Tolerances& tol, DerivativeTable* table_out) {
  tol.validate();
  if (grid.dim != f.dim) throw std::invalid_argument("measure_ck_error: dimension mismatch");
  for (const auto& a : u.atoms) {
    for (const auto& x : grid.points) {
      if (!(1.0 + dot(x, a.dir.xi) > 0.0)) {
        throw std::domain_error("measure_ck_error: an atom's dead zone intersects the grid");
      }
    }
  }
  DerivativeTable table;
  for (const auto& alpha : enumerate_multiindices(f.dim, k)) {
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& x = grid.points[i];
      const double fu = u.atoms.empty() ? 0.0 : atom_sum_derivative(u, alpha, x);
      vals[i] = target_derivative(f, alpha, x, tol.fd_step) - fu;
    }
    table[alpha] = std::move(vals);
  }
  const double norm = ck_grid_norm(table, k);
  if (table_out) *table_out = std::move(table);
  return norm;
}

ApproximationReport approximate(const TargetFunction& f, int k, double eps, const Params& params,
                                const ApproxConfig& config, const QuadratureSpec& quad) {
  params.validate();
  config.tol.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("approximate: eps must be positive");
  if (f.dim != params.d) throw std::invalid_argument("approximate: target/params dimension mismatch");

  ApproximationReport rep;
  rep.target_name = f.name;
  rep.params = params;
  rep.k = k;
  rep.eps = eps;
  rep.seed = config.seed;

  const int res = config.grid_resolution > 0 ? config.grid_resolution : auto_resolution(params.d);
  const EvalGrid grid = make_ball_grid(params.d, res, 1.0);
  rep.grid = GridMeta{params.d, res, grid.size(), grid.radius, grid.shell_points};
  rep.grid_points = grid.points;

  // Polynomial stage, budgeted to eps/2.
  for (int degree = 0; degree <= config.max_degree; ++degree) {
    double cond = 0.0;
    auto [poly, err] = fit_polynomial(f, degree, k, grid, &cond);
    if (err < 0.5 * eps) {
      rep.fit = std::move(poly);
      rep.fit_error = err;
      rep.fit_degree = degree;
      rep.fit_condition = cond;
      break;
    }
    if (degree == config.max_degree) {
      throw std::runtime_error("approximate: polynomial budget exhausted (degree " +
                               std::to_string(degree) + " still has C^k residual " +
                               std::to_string(err) + " >= eps/2)");
    }
  }

  // One surrogate per monomial term.
  std::vector<double> c_bounds;
  for (std::size_t i = 0; i < rep.fit.terms.size(); ++i) {
    const auto& term = rep.fit.terms[i];
    const int m = k + term.gamma.order();
    const int budget =
        std::max(config.budget_factor * static_cast<int>(multiindex_count(params.d, m)),
                 static_cast<int>(multiindex_count(params.d, m)) + 4);
    MonomialSurrogate s = monomial_surrogate(term.gamma, k, params, budget,
                                             config.seed + 1000 * i, -1.0, config.tol.jet_residual);
    rep.surrogates.push_back(std::move(s));
    c_bounds.push_back(rep.surrogates.back().c_bound);
  }

  const std::vector<double> scales = choose_scale(eps, rep.fit, c_bounds);
  rep.scale = 1.0;
  for (std::size_t i = 0; i < rep.surrogates.size(); ++i) {
    rep.surrogates[i] = rescale_surrogate(rep.surrogates[i], scales[i]);
    rep.scale = std::min(rep.scale, scales[i]);
    rep.scale_underflow = rep.scale_underflow || scales[i] < 1e-8;
  }

  // Assemble u = sum_i c_i * surrogate_i as one flat atom list.
  for (std::size_t i = 0; i < rep.fit.terms.size(); ++i) {
    for (const auto& a : rep.surrogates[i].atoms.atoms) {
      Atom scaled = a;
      scaled.coeff *= rep.fit.terms[i].coeff;
      rep.atoms.atoms.push_back(scaled);
    }
  }

  // Measured per-surrogate monomial gaps (the triangle-audit pieces).
  for (std::size_t i = 0; i < rep.surrogates.size(); ++i) {
    const TargetFunction mono = target_monomial(rep.surrogates[i].gamma, params.d);
    rep.surrogate_g_norms.push_back(
        measure_ck_error(mono, rep.surrogates[i].atoms, k, grid, config.tol));
  }

  rep.measured_ck_error = measure_ck_error(f, rep.atoms, k, grid, config.tol, &rep.error_table);
  rep.eps_satisfied = rep.measured_ck_error < eps;

  // Harmonicity certificate of every generator at seeded interior points.
  SplitMix64 rng(config.seed ^ 0x9a7cULL);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < config.harmonicity_points; ++i) {
    std::vector<double> x(params.d);
    double nrm = 0.0;
    do {
      for (int j = 0; j < params.d; ++j) x[j] = rng.uniform(-1.0, 1.0);
      nrm = vector_norm(x);
    } while (nrm >= 0.95 || nrm < 1e-3);
    pts.push_back(x);
  }
  rep.harmonicity_points = pts;
  if (!rep.atoms.atoms.empty()) {
    const HarmonicityReport h = harmonicity_residual(rep.atoms, pts, params, quad);
    rep.harmonicity_max = h.overall_max;
    rep.max_abs_coeff = h.max_abs_coeff;
  }
  return rep;
}

}  // namespace fplab
