#pragma once

#include <map>
#include <vector>

#include "fplab/multiindex.hpp"

namespace fplab {

/// Deterministic sampling of the open ball of a given radius: tensor cell
/// centers intersected with the ball, plus a thin boundary shell. Every point
/// has norm strictly below radius.
struct EvalGrid {
  int dim = 1;
  double radius = 1.0;
  int resolution = 0;    // cells per axis used for the tensor part
  int shell_points = 0;  // points placed on the near-boundary shell
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
};

EvalGrid make_ball_grid(int d, int resolution, double radius = 1.0);

/// Values of one derivative per grid point, keyed by the multi-index.
using DerivativeTable = std::map<MultiIndex, std::vector<double>>;

/// Grid estimate of the C^k norm: sum over |alpha| <= k of max_i |table[alpha][i]|.
/// A lower bound of the true sup-norm sum; throws std::invalid_argument if the
/// table is missing some |alpha| <= k.
double ck_grid_norm(const DerivativeTable& table, int k);

double vector_norm(const std::vector<double>& x);
double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fplab
