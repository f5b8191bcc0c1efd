#include "fplab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fplab {

double vector_norm(const std::vector<double>& x) {
  double out = 0.0;
  for (double v : x) out += v * v;
  return std::sqrt(out);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

namespace {

// Deterministic unit directions for the boundary shell.
std::vector<std::vector<double>> shell_directions(int d, int count) {
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (d == 2) {
    for (int j = 0; j < count; ++j) {
      const double th = 2.0 * M_PI * (j + 0.5) / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  // d >= 3: Fibonacci lattice on the first three coordinates, zeros beyond.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int j = 0; j < count; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = 2.0 * M_PI * j / golden;
    std::vector<double> v(d, 0.0);
    v[0] = r * std::cos(th);
    v[1] = r * std::sin(th);
    v[2] = z;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

}  // namespace

EvalGrid make_ball_grid(int d, int resolution, double radius) {
  if (d < 1) throw std::invalid_argument("make_ball_grid: d must be positive");
  if (resolution < 1) throw std::invalid_argument("make_ball_grid: resolution must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("make_ball_grid: radius must be positive");

  EvalGrid g;
  g.dim = d;
  g.radius = radius;
  g.resolution = resolution;

  // Tensor product of cell centers; keep points strictly inside the ball.
  std::vector<double> axis(resolution);
  for (int i = 0; i < resolution; ++i) {
    axis[i] = -radius + (2.0 * i + 1.0) * radius / resolution;
  }
  const double interior = radius * (1.0 - 1e-12);
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = axis[idx[i]];
    if (vector_norm(x) < interior) g.points.push_back(std::move(x));
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < resolution) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }

  // Near-boundary shell so sup-norm estimates see the boundary behavior.
  const double shell_r = radius * (1.0 - 1e-3);
  const int shell_count = (d == 1) ? 2 : (d == 2 ? 64 : 128);
  for (auto& dir : shell_directions(d, shell_count)) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = shell_r * dir[i];
    g.points.push_back(std::move(x));
    ++g.shell_points;
  }
  return g;
}

double ck_grid_norm(const DerivativeTable& table, int k) {
  if (k < 0) throw std::invalid_argument("ck_grid_norm: k must be non-negative");
  if (table.empty()) throw std::invalid_argument("ck_grid_norm: empty derivative table");
  const int d = table.begin()->first.dim();
  double total = 0.0;
  for (const auto& alpha : enumerate_multiindices(d, k)) {
    auto it = table.find(alpha);
    if (it == table.end()) {
      throw std::invalid_argument("ck_grid_norm: table is missing derivative " + alpha.to_string());
    }
    double m = 0.0;
    for (double v : it->second) m = std::max(m, std::abs(v));
    total += m;
  }
  return total;
}

}  // namespace fplab
