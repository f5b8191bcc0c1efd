#pragma once

namespace fplab {

/// Operator parameters: order s in (0,1), integrability exponent p in (1,inf),
/// ambient dimension d >= 1.
struct Params {
  double s = 0.5;
  double p = 2.0;
  int d = 1;

  void validate() const;  // throws std::invalid_argument on out-of-range values
};

/// Numerical knobs shared across the library. All strictly positive.
struct Tolerances {
  double quad_rel = 1e-10;     // relative quadrature tolerance
  double quad_abs = 1e-12;     // absolute quadrature tolerance
  double jet_residual = 1e-8;  // max-norm jet mismatch accepted by solve_jet
  double fd_step = 1e-4;       // base step for finite-difference checks

  void validate() const;
};

}  // namespace fplab
