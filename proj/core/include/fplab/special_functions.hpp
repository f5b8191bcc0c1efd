#pragma once

namespace fplab {

/// Falling factorial s(s-1)...(s-m+1); 1 for m = 0 (empty product).
double falling_factorial(double s, int m);

/// log Gamma(a) + log Gamma(b) - log Gamma(a+b); requires a, b > 0.
double log_beta(double a, double b);

/// Euler Beta function via log-gamma; requires a, b > 0.
double beta(double a, double b);

/// (n-1)-dimensional measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_measure(int n);

}  // namespace fplab
