#include "fplab/jets.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fplab/grid.hpp"
#include "fplab/rng.hpp"
#include "fplab/special_functions.hpp"

namespace fplab {

Jet Jet::zero(int d, int m) {
  Jet j;
  j.dim = d;
  j.order = m;
  j.values.assign(multiindex_count(d, m), 0.0);
  return j;
}

Jet Jet::monomial(const MultiIndex& gamma, int order) {
  if (gamma.order() > order) {
    throw std::invalid_argument("Jet::monomial: |gamma| exceeds the jet order");
  }
  Jet j = Jet::zero(gamma.dim(), order);
  j.values[multiindex_position(gamma, order)] = gamma.factorial();
  return j;
}

double Jet::at(const MultiIndex& alpha) const {
  const long pos = multiindex_position(alpha, order);
  if (pos < 0) throw std::invalid_argument("Jet::at: |alpha| exceeds the jet order");
  return values[static_cast<std::size_t>(pos)];
}

void Jet::validate() const {
  if (values.size() != multiindex_count(dim, order)) {
    throw std::invalid_argument("Jet: value vector does not cover all |alpha| <= order");
  }
}

namespace {

// Nonzero sign patterns in {-1,0,1}^d, in a fixed base-3 counting order.
std::vector<std::vector<double>> lattice_patterns(int d) {
  std::vector<std::vector<double>> out;
  const int total = static_cast<int>(std::pow(3.0, d) + 0.5);
  for (int code = 1; code < total; ++code) {
    std::vector<double> v(d, 0.0);
    int c = code;
    bool nonzero = false;
    for (int i = 0; i < d; ++i) {
      const int digit = c % 3;
      c /= 3;
      v[i] = (digit == 0) ? 0.0 : (digit == 1 ? 1.0 : -1.0);
      if (digit != 0) nonzero = true;
    }
    if (nonzero) out.push_back(std::move(v));
  }
  return out;
}

double ipow(double x, int n) {
  double out = 1.0;
  for (int j = 0; j < n; ++j) out *= x;
  return out;
}

}  // namespace

std::vector<Direction> default_directions(int d, int m, int budget, std::uint64_t seed,
                                          double magnitude_scale) {
  if (d < 1) throw std::invalid_argument("default_directions: d must be positive");
  if (!(magnitude_scale > 0.0) || magnitude_scale > 1.0) {
    throw std::invalid_argument("default_directions: magnitude_scale must lie in (0, 1]");
  }
  const int needed = static_cast<int>(multiindex_count(d, m));
  if (budget < needed) {
    throw std::invalid_argument("default_directions: budget below the jet dimension N_m");
  }

  const double mags[4] = {0.3 * magnitude_scale, 0.5 * magnitude_scale, 0.7 * magnitude_scale,
                          0.9 * magnitude_scale};
  std::vector<std::vector<double>> patterns = lattice_patterns(d);

  // Structured directions alone can leave degree-m polynomials vanishing on
  // every sampled line (they cover few lines through the origin), so a fixed
  // share of the budget is always quasi-random.
  const int lattice_total = static_cast<int>(patterns.size()) * 4;
  const int n_random = std::max(budget - lattice_total, (budget + 2) / 3);
  const int n_lattice = budget - n_random;

  std::vector<Direction> dirs;
  dirs.reserve(budget);
  int emitted = 0;
  for (int mi = 0; mi < 4 && emitted < n_lattice; ++mi) {
    for (const auto& v : patterns) {
      if (emitted >= n_lattice) break;
      const double nrm = vector_norm(v);
      std::vector<double> xi(d);
      for (int i = 0; i < d; ++i) xi[i] = mags[mi] * v[i] / nrm;
      dirs.emplace_back(std::move(xi));
      ++emitted;
    }
  }

  SplitMix64 rng(seed ^ 0x5eedULL);
  while (static_cast<int>(dirs.size()) < budget) {
    std::vector<double> v(d);
    double nrm = 0.0;
    do {
      for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
      nrm = vector_norm(v);
    } while (nrm < 1e-8);
    const double mag = magnitude_scale * rng.uniform(0.3, 0.95);
    for (int i = 0; i < d; ++i) v[i] *= mag / nrm;
    dirs.emplace_back(std::move(v));
  }
  return dirs;
}

JetSystem build_jet_system(const std::vector<Direction>& directions, double s, int m) {
  if (directions.empty()) throw std::invalid_argument("build_jet_system: no directions");
  for (const auto& dir : directions) dir.validate();
  const int d = directions.front().dim();
  const auto alphas = enumerate_multiindices(d, m);

  JetSystem sys;
  sys.dim = d;
  sys.order = m;
  sys.s = s;
  sys.directions = directions;
  sys.rows = static_cast<int>(alphas.size());
  sys.cols = static_cast<int>(directions.size());
  sys.matrix.assign(static_cast<std::size_t>(sys.rows) * sys.cols, 0.0);

  for (int r = 0; r < sys.rows; ++r) {
    const double ff = falling_factorial(s, alphas[r].order());
    for (int c = 0; c < sys.cols; ++c) {
      double mono = 1.0;
      for (int i = 0; i < d; ++i) mono *= ipow(directions[c].xi[i], alphas[r].e[i]);
      sys.matrix[static_cast<std::size_t>(r) * sys.cols + c] = ff * mono;
    }
  }

  Eigen::MatrixXd M(sys.rows, sys.cols);
  for (int r = 0; r < sys.rows; ++r) {
    for (int c = 0; c < sys.cols; ++c) M(r, c) = sys.entry(r, c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  sys.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double thresh = 1e-10 * (sv.size() ? sv(0) : 0.0);
  sys.rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++sys.rank;
  }
  sys.condition = (sys.rank > 0) ? sv(0) / sv(sys.rank - 1) : 0.0;
  return sys;
}

AtomSum JetMatch::to_atom_sum() const {
  AtomSum u;
  u.atoms.reserve(coefficients.size());
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    u.atoms.push_back(Atom{coefficients[j], directions[j], s});
  }
  return u;
}

JetMatch solve_jet(const JetSystem& system, const Jet& target, double residual_tol) {
  target.validate();
  if (target.dim != system.dim || target.order != system.order) {
    throw std::invalid_argument("solve_jet: target jet does not match the system shape");
  }
  if (system.rank < system.rows) {
    throw std::runtime_error("solve_jet: rank-deficient jet system (rank " +
                             std::to_string(system.rank) + " < " + std::to_string(system.rows) +
                             ")");
  }
  if (system.condition > 1e12) {
    throw std::runtime_error("solve_jet: jet system condition " +
                             std::to_string(system.condition) + " exceeds 1e12");
  }

  Eigen::MatrixXd M(system.rows, system.cols);
  for (int r = 0; r < system.rows; ++r) {
    for (int c = 0; c < system.cols; ++c) M(r, c) = system.entry(r, c);
  }
  Eigen::VectorXd b(system.rows);
  for (int r = 0; r < system.rows; ++r) b(r) = target.values[r];

  // Minimum-norm least squares through the thin SVD.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double thresh = 1e-10 * sv(0);
  auto pinv_apply = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd ut = svd.matrixU().transpose() * rhs;
    Eigen::VectorXd z(sv.size());
    for (int i = 0; i < sv.size(); ++i) z(i) = (sv(i) > thresh) ? ut(i) / sv(i) : 0.0;
    return Eigen::VectorXd(svd.matrixV() * z);
  };
  Eigen::VectorXd a = pinv_apply(b);

  // Iterative refinement with an extended-precision residual: the surrogate
  // pipeline divides these coefficients by powers of small scales, so every
  // digit of the jet mismatch matters downstream.
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd res(system.rows);
    for (int r = 0; r < system.rows; ++r) {
      long double acc = 0.0L;
      for (int c = 0; c < system.cols; ++c) {
        acc += static_cast<long double>(system.entry(r, c)) * static_cast<long double>(a(c));
      }
      res(r) = static_cast<double>(static_cast<long double>(target.values[r]) - acc);
    }
    a += pinv_apply(res);
  }

  auto residual_of = [&](const std::vector<double>& coeffs) {
    long double worst = 0.0L;
    for (int r = 0; r < system.rows; ++r) {
      long double acc = 0.0L;
      for (int c = 0; c < system.cols; ++c) {
        acc += static_cast<long double>(system.entry(r, c)) * static_cast<long double>(coeffs[c]);
      }
      worst = std::max(worst, fabsl(acc - static_cast<long double>(target.values[r])));
    }
    return static_cast<double>(worst);
  };

  std::vector<double> full(a.data(), a.data() + a.size());
  double max_abs = 0.0;
  for (double v : full) max_abs = std::max(max_abs, std::abs(v));

  // Drop negligible coefficients (stable order), keep only if the residual
  // still verifies.
  JetMatch match;
  match.s = system.s;
  match.dim = system.dim;
  match.order = system.order;
  match.condition = system.condition;

  std::vector<double> sparse_coeffs;
  std::vector<Direction> sparse_dirs;
  std::vector<double> padded(full.size(), 0.0);
  for (std::size_t j = 0; j < full.size(); ++j) {
    if (std::abs(full[j]) >= 1e-12 * max_abs && full[j] != 0.0) {
      sparse_coeffs.push_back(full[j]);
      sparse_dirs.push_back(system.directions[j]);
      padded[j] = full[j];
    }
  }
  const double full_residual = residual_of(full);
  const double sparse_residual = residual_of(padded);
  // Keep the sparse form only when dropping the negligible coefficients did
  // not materially worsen the mismatch.
  if (sparse_residual <= std::max(full_residual * 2.0, full_residual + 1e-14 * max_abs)) {
    match.coefficients = std::move(sparse_coeffs);
    match.directions = std::move(sparse_dirs);
    match.residual = sparse_residual;
  } else {
    match.coefficients = full;
    match.directions = system.directions;
    match.residual = full_residual;
  }

  if (match.residual > residual_tol) {
    throw std::runtime_error("solve_jet: residual " + std::to_string(match.residual) +
                             " exceeds tolerance");
  }
  return match;
}

namespace {

// Central difference of order alpha at the origin, spacing h: tensor product of
// one-dimensional binomial stencils with half-integer offsets.
double central_difference(const std::function<double(const std::vector<double>&)>& f,
                          const MultiIndex& alpha, double h) {
  const int d = alpha.dim();
  std::vector<int> idx(d, 0);
  double acc = 0.0;
  while (true) {
    double coeff = 1.0;
    int sign_flips = 0;
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) {
      coeff *= binomial(alpha.e[i], idx[i]);
      sign_flips += idx[i];
      x[i] = (0.5 * alpha.e[i] - idx[i]) * h;
    }
    const double term = coeff * f(x);
    acc += (sign_flips % 2 == 0) ? term : -term;
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] <= alpha.e[i]) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }
  return acc / std::pow(h, alpha.order());
}

}  // namespace

double verify_jet_fd(const JetMatch& match, const Jet& target, double step) {
  target.validate();
  if (!(step > 0.0)) throw std::invalid_argument("verify_jet_fd: step must be positive");
  const AtomSum u = match.to_atom_sum();
  auto f = [&](const std::vector<double>& x) { return atom_sum_eval(u, x); };

  double worst = 0.0;
  const auto alphas = enumerate_multiindices(target.dim, target.order);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const int n = alphas[i].order();
    double fd;
    if (n == 0) {
      fd = f(std::vector<double>(target.dim, 0.0));
    } else if (n <= 2) {
      fd = central_difference(f, alphas[i], step);
    } else {
      // Wider spacing plus one Richardson step keep the h^{-n} roundoff in check.
      const double h = std::max(step, 25.0 * std::pow(1e-16, 1.0 / (n + 2.0)));
      const double coarse = central_difference(f, alphas[i], h);
      const double fine = central_difference(f, alphas[i], 0.5 * h);
      fd = (4.0 * fine - coarse) / 3.0;
    }
    const double tgt = target.values[i];
    worst = std::max(worst, std::abs(fd - tgt) / std::max(1.0, std::abs(tgt)));
  }
  return worst;
}

}  // namespace fplab
