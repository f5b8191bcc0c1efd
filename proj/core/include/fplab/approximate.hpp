#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fplab/atoms.hpp"
#include "fplab/grid.hpp"
#include "fplab/jets.hpp"
#include "fplab/operators.hpp"
#include "fplab/params.hpp"
#include "fplab/targets.hpp"

namespace fplab {

/// One monomial x^gamma realized as an atom sum whose jet at the origin is
/// gamma! at gamma and zero through order k + |gamma|, together with the
/// Taylor-remainder machinery that controls its C^k distance from the monomial.
struct MonomialSurrogate {
  MultiIndex gamma;
  int k = 0;
  JetMatch match;
  AtomSum atoms;            // current stage (rescaled once scale < 1 is applied)
  double scale = 1.0;       // r applied so far; atoms hold directions r*xi
  double c_bound = 0.0;     // remainder constant: (sum_{|beta|=|gamma|+1} 1/beta!) * ||v||-bound
  double g_norm_bound = 0.0;  // c_bound * scale, bounds ||surrogate - x^gamma||_{C^k}
};

struct ApproxConfig {
  int max_degree = 10;
  int budget_factor = 2;     // direction budget = factor * N_m (at least N_m + 4)
  std::uint64_t seed = 0;
  int grid_resolution = 0;   // 0 = auto per dimension
  double harmonicity_tol = 1e-4;
  int harmonicity_points = 5;
  Tolerances tol;
};

struct GridMeta {
  int dim = 1;
  int resolution = 0;
  std::size_t n_points = 0;
  double radius = 1.0;
  int shell_points = 0;
};

/// End-to-end certificate: the atom representation, its measured C^k grid error
/// against the target, and the per-piece accounting that reproduces it.
struct ApproximationReport {
  std::string target_name;
  Params params;
  int k = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;

  PolynomialTarget fit;
  int fit_degree = 0;
  double fit_error = 0.0;
  double fit_condition = 0.0;

  std::vector<MonomialSurrogate> surrogates;
  std::vector<double> surrogate_g_norms;  // measured ||v_i - x^{gamma_i}||_{C^k} on the grid

  double scale = 1.0;  // smallest per-term scale actually applied
  bool scale_underflow = false;

  AtomSum atoms;
  double measured_ck_error = 0.0;
  bool eps_satisfied = false;

  double harmonicity_max = 0.0;  // unit-generator residual over seeded points
  double max_abs_coeff = 0.0;
  std::vector<std::vector<double>> harmonicity_points;

  GridMeta grid;
  DerivativeTable error_table;  // per-point |D^alpha (f-u)| source for the CSV
  std::vector<std::vector<double>> grid_points;
};

/// Least-squares fit of all derivatives |alpha| <= k simultaneously over the
/// grid, on the monomial basis up to `degree`. Exact (to rounding) when f is a
/// polynomial of degree <= degree. Returns the fit and its C^k grid residual;
/// condition_out (optional) receives the stacked-basis condition number.
std::pair<PolynomialTarget, double> fit_polynomial(const TargetFunction& f, int degree, int k,
                                                   const EvalGrid& grid,
                                                   double* condition_out = nullptr);

/// Builds the jet target gamma! * 1_gamma over order k + |gamma| and solves it.
/// magnitude_scale < 0 selects the automatic min(1, 2/(m+1)) cap that keeps the
/// remainder constants moderate.
MonomialSurrogate monomial_surrogate(const MultiIndex& gamma, int k, const Params& params,
                                     int budget, std::uint64_t seed,
                                     double magnitude_scale = -1.0,
                                     double residual_tol = 1e-8);

/// Remainder constant c(gamma) of the unscaled stage, computed from the exact
/// per-atom sup bounds over the closed unit ball.
double surrogate_remainder_bound(const MonomialSurrogate& s, int k);

/// Per-term scales r_i = min{1, (eps/2) / (n |c_i| c(gamma_i))} splitting the
/// eps/2 budget uniformly over the n terms with a positive bound, so that
/// sum_i |c_i| c(gamma_i) r_i <= eps/2. Terms with a vanishing bound get 1.
/// (A single common scale satisfies the same budget but drives the
/// highest-degree term's coefficients through 1/r^{|gamma|} far beyond what
/// double-precision jet residuals tolerate.)
std::vector<double> choose_scale(double eps, const PolynomialTarget& target,
                                 const std::vector<double>& c_bounds);

/// Applies v -> r^{-|gamma|} v(r x) atom-wise: coefficients divided by
/// r^{|gamma|}, directions scaled by r. Jets at the origin keep the gamma entry.
MonomialSurrogate rescale_surrogate(const MonomialSurrogate& s, double r);

/// C^k grid norm of the difference table f - u; atom derivatives analytic,
/// f derivatives analytic when supplied, central differences otherwise.
/// Throws if some atom's dead zone touches the grid.
double measure_ck_error(const TargetFunction& f, const AtomSum& u, int k, const EvalGrid& grid,
                        const Tolerances& tol, DerivativeTable* table_out = nullptr);

/// The full pipeline: polynomial fit budgeted to eps/2, per-monomial surrogates,
/// remainder bounds, common scale, assembly, measurement, and the harmonicity
/// certificate of every generator.
ApproximationReport approximate(const TargetFunction& f, int k, double eps, const Params& params,
                                const ApproxConfig& config, const QuadratureSpec& quad = {});

}  // namespace fplab
