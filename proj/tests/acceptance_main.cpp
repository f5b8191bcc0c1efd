#include <iostream>

#include "fplab/acceptance.hpp"

int main() {
  const auto results = fplab::run_acceptance(std::cout);
  return fplab::all_passed(results) ? 0 : 1;
}
