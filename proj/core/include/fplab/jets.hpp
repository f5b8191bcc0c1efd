#pragma once

#include <cstdint>
#include <vector>

#include "fplab/atoms.hpp"
#include "fplab/multiindex.hpp"

namespace fplab {

/// Derivative data at the origin: one value per multi-index with |alpha| <= order,
/// aligned with enumerate_multiindices(dim, order).
struct Jet {
  int dim = 1;
  int order = 0;
  std::vector<double> values;

  static Jet zero(int d, int m);
  /// gamma! at position gamma, zero elsewhere; the canonical monomial target.
  static Jet monomial(const MultiIndex& gamma, int order);

  double at(const MultiIndex& alpha) const;
  void validate() const;
};

/// Direction sample for the jet system: a deterministic mix of lattice
/// directions at staggered magnitudes and seeded quasi-random directions.
/// All magnitudes stay strictly below magnitude_scale * 0.95 < 1 so every
/// resulting atom keeps the closed unit ball inside its support half space.
/// Requires budget >= multiindex_count(d, m); returns exactly `budget` entries.
std::vector<Direction> default_directions(int d, int m, int budget, std::uint64_t seed,
                                          double magnitude_scale = 1.0);

/// Linear map from atom coefficients to jets at the origin:
/// entry[alpha, j] = falling_factorial(s, |alpha|) * xi_j^alpha.
struct JetSystem {
  int dim = 1;
  int order = 0;
  double s = 0.5;
  std::vector<Direction> directions;
  std::vector<double> matrix;  // row-major, rows = multi-indices, cols = directions
  int rows = 0;
  int cols = 0;
  int rank = 0;
  double condition = 0.0;
  std::vector<double> singular_values;

  double entry(int r, int c) const { return matrix[static_cast<std::size_t>(r) * cols + c]; }
};

JetSystem build_jet_system(const std::vector<Direction>& directions, double s, int m);

struct JetMatch {
  std::vector<double> coefficients;
  std::vector<Direction> directions;
  double s = 0.5;
  int dim = 1;
  int order = 0;
  double residual = 0.0;   // max-norm jet mismatch, recomputed after sparsification
  double condition = 0.0;

  AtomSum to_atom_sum() const;
};

/// Minimum-norm least-squares coefficients for the target jet. Fails loudly on
/// rank deficiency, condition > 1e12, or residual above residual_tol. Drops
/// coefficients below 1e-12 * max|a| and re-verifies the residual.
JetMatch solve_jet(const JetSystem& system, const Jet& target, double residual_tol = 1e-8);

/// Independent check of a match through atom evaluation only: central finite
/// differences of the assembled sum at the origin against the target jet.
/// Returns the max relative error (relative to max(1, |target entry|)).
/// step is the base spacing; orders >= 3 widen it and Richardson-extrapolate.
double verify_jet_fd(const JetMatch& match, const Jet& target, double step);

}  // namespace fplab
