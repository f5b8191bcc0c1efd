#include "fplab/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fplab {

void Params::validate() const {
  if (!(s > 0.0) || !(s < 1.0) || !std::isfinite(s)) {
    throw std::invalid_argument("Params: s must lie in (0, 1), got " + std::to_string(s));
  }
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Params: p must lie in (1, inf), got " + std::to_string(p));
  }
  if (d < 1) {
    throw std::invalid_argument("Params: d must be a positive integer, got " + std::to_string(d));
  }
}

void Tolerances::validate() const {
  if (!(quad_rel > 0.0) || !(quad_abs > 0.0) || !(jet_residual > 0.0) || !(fd_step > 0.0)) {
    throw std::invalid_argument("Tolerances: all entries must be strictly positive");
  }
}

}  // namespace fplab
