#pragma once

#include <string>

#include "fplab/approximate.hpp"
#include "fplab/atoms.hpp"
#include "fplab/operators.hpp"

namespace fplab {

/// Portable representation of an atom sum: JSON array of
/// {"coeff": number, "xi": [numbers], "s": number}.
std::string atom_sum_to_json(const AtomSum& u, int indent = -1);
AtomSum atom_sum_from_json(const std::string& text);

std::string pv_result_to_json(const PVResult& r);

std::string approximation_report_to_json(const ApproximationReport& r, int indent = 2);

/// Per-grid-point error table: columns x1..xd then one |D^alpha (f-u)| column
/// per multi-index of order <= k.
std::string approximation_errors_to_csv(const ApproximationReport& r);

}  // namespace fplab
