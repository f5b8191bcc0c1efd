#include "fplab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fplab {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double error;

  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = 0.0;
  double gauss = 0.0;
  double resabs = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double dx = h * kXgk[j];
    double fsum;
    if (j == 7) {
      fsum = f(c);
      evals += 1;
    } else {
      fsum = f(c - dx) + f(c + dx);
      evals += 2;
    }
    kron += kWgk[j] * fsum;
    resabs += kWgk[j] * std::abs(fsum);
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;  // j = 1,3,5,7 are the Gauss nodes
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * h;
  const double diff = std::abs(kron - gauss) * std::abs(h);
  // QUADPACK-style sharpening of the raw |K - G| estimate.
  const double scale = resabs * std::abs(h);
  double err = diff;
  if (scale > 0.0 && diff > 0.0) {
    err = std::min(diff, scale * std::pow(200.0 * diff / scale, 1.5));
  }
  p.error = std::max(err, std::abs(p.value) * 5e-16);
  return p;
}

bool non_finite(double v) { return !std::isfinite(v); }

}  // namespace

IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_panels,
                                  const std::vector<double>& breakpoints) {
  IntegralResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> edges;
  edges.push_back(a);
  for (double t : breakpoints) {
    if (t > a && t < b) edges.push_back(t);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gk15(f, edges[i], edges[i + 1], out.evals);
    if (non_finite(p.value)) throw std::runtime_error("integrate_adaptive: non-finite integrand");
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }

  int panels = static_cast<int>(queue.size());
  const double eps_width = 16.0 * std::numeric_limits<double>::epsilon();
  while (panels < max_panels) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= tol) break;
    Panel worst = queue.top();
    if (worst.error <= tol / std::max<std::size_t>(queue.size(), 1)) break;
    if (std::abs(worst.b - worst.a) <= eps_width * std::max(std::abs(worst.a), std::abs(worst.b))) {
      break;  // cannot subdivide further in double precision
    }
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid, out.evals);
    Panel right = gk15(f, mid, worst.b, out.evals);
    if (non_finite(left.value) || non_finite(right.value)) {
      throw std::runtime_error("integrate_adaptive: non-finite integrand");
    }
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  out.value = sign * total;
  out.error = total_err;
  out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

IntegralResult integrate_tanh_sinh(const EndpointAwareFn& f, double a, double b, double abs_tol,
                                   double rel_tol, int max_level) {
  IntegralResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double half = 0.5 * (b - a);
  const double t_max = 6.1;

  // One transformed sample: x(t) = midpoint + half*tanh((pi/2) sinh t).
  auto sample = [&](double t) -> double {
    const double z = M_PI_2 * std::sinh(t);
    // Distances to the endpoints without cancellation:
    //   b - x = half * (1 - tanh z) = 2*half / (e^{2z} + 1)
    const double e2z = std::exp(2.0 * z);
    const double dist_b = 2.0 * half / (e2z + 1.0);
    const double dist_a = 2.0 * half / (1.0 / e2z + 1.0);
    if (dist_a <= 0.0 || dist_b <= 0.0) return 0.0;
    const double x = (dist_a < dist_b) ? (a + dist_a) : (b - dist_b);
    const double sech = 1.0 / std::cosh(z);
    const double weight = half * M_PI_2 * std::cosh(t) * sech * sech;
    if (weight <= 0.0 || !std::isfinite(weight)) return 0.0;
    const double v = f(x, dist_a, dist_b);
    if (!std::isfinite(v)) {
      throw std::runtime_error("integrate_tanh_sinh: non-finite integrand");
    }
    return v * weight;
  };

  double step = 1.0;
  double sum = sample(0.0);
  out.evals += 1;
  for (double t = step; t <= t_max; t += step) {
    sum += sample(t) + sample(-t);
    out.evals += 2;
  }
  double estimate = sum * step;
  double prev_delta = std::numeric_limits<double>::infinity();
  double delta = prev_delta;

  for (int level = 1; level <= max_level; ++level) {
    step *= 0.5;
    double add = 0.0;
    for (double t = step; t <= t_max; t += 2.0 * step) {
      add += sample(t) + sample(-t);
      out.evals += 2;
    }
    sum += add;
    const double next = sum * step;
    prev_delta = delta;
    delta = std::abs(next - estimate);
    estimate = next;
    const double tol = std::max(abs_tol, rel_tol * std::abs(estimate));
    if (delta <= tol && level >= 2) {
      out.converged = true;
      break;
    }
  }

  out.value = sign * estimate;
  // Double-exponential convergence roughly squares the digits per level.
  double err = delta;
  if (std::isfinite(prev_delta) && prev_delta > 0.0 && delta < prev_delta) {
    err = std::min(delta, delta * delta / prev_delta + std::abs(estimate) * 1e-15);
  }
  out.error = std::max(err, std::abs(estimate) * 5e-16);
  if (!out.converged) out.error = std::max(out.error, delta);
  return out;
}

}  // namespace fplab
