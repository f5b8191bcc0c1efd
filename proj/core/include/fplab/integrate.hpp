#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fplab {

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7-15 on [a, b]. Panels are pre-split at the
/// given breakpoints (integrand kinks); the worst panel is bisected until the
/// summed error estimate meets max(abs_tol, rel_tol * |value|) or the panel
/// budget runs out.
IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_panels,
                                  const std::vector<double>& breakpoints = {});

/// Integrand for tanh-sinh rules: receives the abscissa plus its exactly
/// computed distances to both endpoints, so endpoint-singular factors can be
/// evaluated without cancellation.
using EndpointAwareFn = std::function<double(double x, double dist_a, double dist_b)>;

/// Double-exponential (tanh-sinh) quadrature on (a, b). Handles integrable
/// algebraic endpoint singularities to near machine precision; never evaluates
/// at the endpoints themselves.
IntegralResult integrate_tanh_sinh(const EndpointAwareFn& f, double a, double b,
                                   double abs_tol, double rel_tol, int max_level = 12);

}  // namespace fplab
