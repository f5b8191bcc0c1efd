#include "fplab/serialize.hpp"

#include <json.hpp>

#include <sstream>

namespace fplab {

using nlohmann::json;

namespace {

json atom_to_json(const Atom& a) {
  return json{{"coeff", a.coeff}, {"xi", a.dir.xi}, {"s", a.s}};
}

}  // namespace

std::string atom_sum_to_json(const AtomSum& u, int indent) {
  json arr = json::array();
  for (const auto& a : u.atoms) arr.push_back(atom_to_json(a));
  return arr.dump(indent);
}

AtomSum atom_sum_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("atom_sum_from_json: expected a JSON array");
  AtomSum u;
  for (const auto& item : arr) {
    Atom a;
    a.coeff = item.at("coeff").get<double>();
    a.dir.xi = item.at("xi").get<std::vector<double>>();
    a.s = item.at("s").get<double>();
    a.dir.validate();
    u.atoms.push_back(std::move(a));
  }
  return u;
}

std::string pv_result_to_json(const PVResult& r) {
  json j{{"value", r.value},
         {"error_estimate", r.error_estimate},
         {"tail_bound", r.tail_bound},
         {"converged", r.converged}};
  return j.dump();
}

std::string approximation_report_to_json(const ApproximationReport& r, int indent) {
  json j;
  j["schema_version"] = 1;
  j["target"] = r.target_name;
  j["params"] = {{"s", r.params.s}, {"p", r.params.p}, {"d", r.params.d}};
  j["k"] = r.k;
  j["eps"] = r.eps;
  j["seed"] = r.seed;

  json fit;
  fit["degree"] = r.fit_degree;
  fit["fit_error"] = r.fit_error;
  fit["condition"] = r.fit_condition;
  json terms = json::array();
  for (const auto& t : r.fit.terms) {
    terms.push_back({{"coeff", t.coeff}, {"gamma", t.gamma.e}});
  }
  fit["terms"] = terms;
  j["fit"] = fit;

  json surrogates = json::array();
  for (std::size_t i = 0; i < r.surrogates.size(); ++i) {
    const auto& s = r.surrogates[i];
    json e;
    e["gamma"] = s.gamma.e;
    e["jet_order"] = s.k + s.gamma.order();
    e["residual"] = s.match.residual;
    e["condition"] = s.match.condition;
    e["atom_count"] = s.atoms.atoms.size();
    e["c_bound"] = s.c_bound;
    e["scale"] = s.scale;
    e["g_norm_bound"] = s.g_norm_bound;
    if (i < r.surrogate_g_norms.size()) e["g_norm_measured"] = r.surrogate_g_norms[i];
    surrogates.push_back(e);
  }
  j["surrogates"] = surrogates;

  j["scale"] = r.scale;
  j["scale_underflow"] = r.scale_underflow;
  j["atoms"] = json::parse(atom_sum_to_json(r.atoms));
  j["measured_ck_error"] = r.measured_ck_error;
  j["eps_satisfied"] = r.eps_satisfied;
  j["harmonicity"] = {{"max_unit_residual", r.harmonicity_max},
                      {"max_abs_coeff", r.max_abs_coeff},
                      {"points", r.harmonicity_points}};
  j["grid"] = {{"dim", r.grid.dim},
               {"resolution", r.grid.resolution},
               {"points", r.grid.n_points},
               {"radius", r.grid.radius},
               {"shell_points", r.grid.shell_points}};
  return j.dump(indent);
}

std::string approximation_errors_to_csv(const ApproximationReport& r) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < r.grid.dim; ++i) os << "x" << (i + 1) << ",";
  bool first = true;
  for (const auto& [alpha, vals] : r.error_table) {
    if (!first) os << ",";
    os << "err_d" << alpha.to_string();
    first = false;
  }
  os << "\n";
  for (std::size_t i = 0; i < r.grid_points.size(); ++i) {
    for (int c = 0; c < r.grid.dim; ++c) os << r.grid_points[i][c] << ",";
    first = true;
    for (const auto& [alpha, vals] : r.error_table) {
      if (!first) os << ",";
      os << vals[i];
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace fplab
