#pragma once

#include "ewcert/certifier.hpp"
#include "ewcert/choi.hpp"
#include "ewcert/hermitian.hpp"
#include "ewcert/product_states.hpp"
#include "ewcert/seesaw.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace ewcert::io {

using Json = nlohmann::ordered_json;

// Schemas
//   operator:  {"dims":[n1,...], "re":[[...],...], "im":[[...],...]}
//   state:     {"dims":[...], "factors":[{"re":[...],"im":[...]},...]}
//   ensemble:  {"dims":[...], "weights":[...], "members":[{"factors":[...]},...]}
//   map:       {"in_dim":n, "out_dim":n, "choi":<operator>}
//              or {"in_dim":n, "out_dim":n, "kraus":[{"re":[[...]],"im":[[...]]},...]}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw RejectedInput(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw RejectedInput(where + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

inline Json dims_to_json(const Dims& dims) { return Json(dims.subsystems()); }

inline Dims dims_from_json(const Json& j) {
  if (!j.is_array()) throw RejectedInput("dims: expected an array of integers");
  std::vector<int> d;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw RejectedInput("dims: expected an array of integers");
    d.push_back(x.get<int>());
  }
  return Dims(std::move(d));
}

inline Json matrix_parts_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  Json out = Json::object();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

/// Reads {"re":[[...]],"im":[[...]]} into a rows x cols complex matrix
/// without any Hermiticity requirement.
inline Matrix complex_matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  const Json& re = detail::field(j, "re", where);
  const Json& im = detail::field(j, "im", where);
  if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != rows ||
      static_cast<Eigen::Index>(im.size()) != rows) {
    throw RejectedInput(where + ": \"re\" and \"im\" must each have " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& rr = re[r];
    const Json& ii = im[r];
    if (!rr.is_array() || !ii.is_array() || static_cast<Eigen::Index>(rr.size()) != cols ||
        static_cast<Eigen::Index>(ii.size()) != cols) {
      throw RejectedInput(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string at = where + " entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
      m(r, c) = Complex(detail::number(rr[c], at), detail::number(ii[c], at));
    }
  }
  return m;
}

inline Json to_json(const HermitianOperator& a) {
  Json out = Json::object();
  out["dims"] = dims_to_json(a.dims());
  Json parts = matrix_parts_to_json(a.matrix());
  out["re"] = std::move(parts["re"]);
  out["im"] = std::move(parts["im"]);
  return out;
}

inline HermitianOperator operator_from_json(const Json& j) {
  const Dims dims = dims_from_json(detail::field(j, "dims", "operator"));
  const Matrix m = complex_matrix_from_json(j, dims.total(), dims.total(), "operator");
  try {
    return {dims, m};
  } catch (const RejectedInput& e) {
    throw RejectedInput(std::string("operator: ") + e.what());
  }
}

inline Json vector_to_json(const Vector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  Json out = Json::object();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

inline Vector vector_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  const Json& re = detail::field(j, "re", where);
  const Json& im = detail::field(j, "im", where);
  if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != n ||
      static_cast<Eigen::Index>(im.size()) != n) {
    throw RejectedInput(where + ": expected " + std::to_string(n) + " amplitudes");
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(detail::number(re[i], where), detail::number(im[i], where));
  }
  return v;
}

inline Json factors_to_json(const PureProductState& p) {
  Json factors = Json::array();
  for (const Vector& f : p.factors()) factors.push_back(vector_to_json(f));
  return factors;
}

inline Json to_json(const PureProductState& p) {
  Json out = Json::object();
  out["dims"] = dims_to_json(p.dims());
  out["factors"] = factors_to_json(p);
  return out;
}

/// Factors within 1e-6 of unit norm are renormalized; others are rejected.
inline PureProductState state_factors_from_json(const Json& factors, const Dims& dims, const std::string& where) {
  if (!factors.is_array() || factors.size() != dims.count()) {
    throw RejectedInput(where + ": expected " + std::to_string(dims.count()) + " factors");
  }
  std::vector<Vector> fs;
  for (std::size_t i = 0; i < dims.count(); ++i) {
    Vector v = vector_from_json(factors[i], dims[i], where + " factor " + std::to_string(i));
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-6) {
      throw RejectedInput(where + " factor " + std::to_string(i) + ": norm " + std::to_string(n) + " is not 1");
    }
    fs.push_back(v / n);
  }
  return {dims, std::move(fs)};
}

inline PureProductState state_from_json(const Json& j) {
  const Dims dims = dims_from_json(detail::field(j, "dims", "state"));
  return state_factors_from_json(detail::field(j, "factors", "state"), dims, "state");
}

inline Json to_json(const SeparableEnsemble& e) {
  Json out = Json::object();
  out["dims"] = dims_to_json(e.dims());
  out["weights"] = Json(e.weights());
  Json members = Json::array();
  for (const auto& m : e.members()) {
    Json mj = Json::object();
    mj["factors"] = factors_to_json(m);
    members.push_back(std::move(mj));
  }
  out["members"] = std::move(members);
  return out;
}

inline SeparableEnsemble ensemble_from_json(const Json& j) {
  const Dims dims = dims_from_json(detail::field(j, "dims", "ensemble"));
  const Json& wj = detail::field(j, "weights", "ensemble");
  const Json& mj = detail::field(j, "members", "ensemble");
  if (!wj.is_array() || !mj.is_array()) throw RejectedInput("ensemble: \"weights\" and \"members\" must be arrays");
  std::vector<double> weights;
  for (const auto& w : wj) weights.push_back(detail::number(w, "ensemble weight"));
  std::vector<PureProductState> members;
  for (std::size_t i = 0; i < mj.size(); ++i) {
    members.push_back(state_factors_from_json(detail::field(mj[i], "factors", "ensemble member"), dims,
                                              "ensemble member " + std::to_string(i)));
  }
  return {std::move(weights), std::move(members)};
}

inline Json to_json(const OperatorMap& m) {
  Json out = Json::object();
  out["in_dim"] = m.in_dim();
  out["out_dim"] = m.out_dim();
  Json choi = Json::object();
  choi["dims"] = Json::array({m.out_dim(), m.in_dim()});
  Json parts = matrix_parts_to_json(m.choi_matrix());
  choi["re"] = std::move(parts["re"]);
  choi["im"] = std::move(parts["im"]);
  out["choi"] = std::move(choi);
  return out;
}

inline bool looks_like_map(const Json& j) {
  return j.is_object() && (j.contains("choi") || j.contains("kraus"));
}

inline OperatorMap map_from_json(const Json& j) {
  const Json& in = detail::field(j, "in_dim", "map");
  const Json& outd = detail::field(j, "out_dim", "map");
  if (!in.is_number_integer() || !outd.is_number_integer()) throw RejectedInput("map: dimensions must be integers");
  const int n = in.get<int>();
  if (outd.get<int>() != n) throw RejectedInput("map: only square maps (in_dim == out_dim) are supported");
  if (j.contains("choi")) {
    const Json& c = j.at("choi");
    if (c.contains("dims")) {
      const Dims d = dims_from_json(c.at("dims"));
      if (!(d == Dims{n, n})) throw RejectedInput("map: Choi dims must be [out_dim, in_dim]");
    }
    return OperatorMap::from_choi(n, complex_matrix_from_json(c, n * n, n * n, "map choi"));
  }
  const Json& kj = detail::field(j, "kraus", "map");
  if (!kj.is_array() || kj.empty()) throw RejectedInput("map: \"kraus\" must be a non-empty array");
  KrausSet k;
  for (std::size_t i = 0; i < kj.size(); ++i) {
    k.operators.push_back(complex_matrix_from_json(kj[i], n, n, "map kraus " + std::to_string(i)));
  }
  return OperatorMap::from_kraus(k);
}

inline Json to_json(const Certificate& c) {
  Json out = Json::object();
  out["verdict"] = std::string(to_string(c.verdict));
  out["dims"] = dims_to_json(c.argmin.dims());

  Json c1 = Json::object();
  c1["holds"] = c.condition1.holds;
  c1["max_product_expectation"] = c.condition1.max_value;
  c1["state"] = to_json(c.condition1.state);

  Json c2 = Json::object();
  c2["holds"] = c.condition2.holds;
  c2["zero_state_count"] = c.condition2.zero_state_count;
  c2["zero_states_discovered"] = c.condition2.zero_states_discovered;
  c2["reduced"] = c.condition2.reduced;
  c2["worst_tangent_violation"] = c.condition2.worst_violation;
  c2["worst_state"] = c.condition2.worst_state ? to_json(*c.condition2.worst_state) : Json(nullptr);
  c2["detail"] = c.condition2.detail;
  Json zs = Json::array();
  for (const auto& p : c.condition2.zero_states) zs.push_back(to_json(p));
  c2["zero_states"] = std::move(zs);

  Json c3 = Json::object();
  c3["holds"] = c.condition3.holds;
  c3["min_eigenvalue"] = c.condition3.min_eigenvalue;
  c3["eigenvector"] = vector_to_json(c.condition3.eigenvector);
  c3["degeneracy_gap"] = c.condition3.degeneracy_gap;

  Json conditions = Json::object();
  conditions["condition1"] = std::move(c1);
  conditions["condition2"] = std::move(c2);
  conditions["condition3"] = std::move(c3);
  out["conditions"] = std::move(conditions);

  out["min_product_expectation"] = c.min_product_expectation;
  out["argmin"] = to_json(c.argmin);

  const OptimizerDiagnostics& d = c.diagnostics;
  Json opt = Json::object();
  opt["starts"] = d.starts;
  opt["converged"] = d.converged;
  opt["convergence_fraction"] = d.convergence_fraction;
  opt["total_sweeps"] = d.total_sweeps;
  opt["oracle_min"] = d.oracle_min ? Json(*d.oracle_min) : Json(nullptr);
  opt["oracle_gap"] = d.oracle_gap ? Json(*d.oracle_gap) : Json(nullptr);
  opt["sign_consistent"] = d.sign_consistent;
  opt["notes"] = Json(d.notes);
  out["optimizer"] = std::move(opt);

  Json tol = Json::object();
  tol["zero_tol"] = c.config.seesaw.zero_tol;
  tol["convergence_tol"] = c.config.seesaw.convergence_tol;
  tol["tangent_tol"] = c.config.tangent_tol;
  tol["psd_tol"] = c.config.psd_tol;
  out["tolerances"] = std::move(tol);
  out["seed"] = c.config.seesaw.seed;
  out["multistarts"] = c.config.seesaw.multistarts;
  out["max_sweeps"] = c.config.seesaw.max_sweeps;
  out["reduce_zero_states"] = c.config.reduce_zero_states;
  return out;
}

inline Json to_json(const SeesawResult& r, const SeesawConfig& config) {
  Json out = Json::object();
  out["min_value"] = r.min_value;
  out["argmin"] = to_json(r.argmin);
  out["best_start"] = r.best_start;
  out["starts"] = r.starts.size();
  out["converged"] = r.converged_count();
  out["convergence_fraction"] = r.convergence_fraction();
  out["total_sweeps"] = r.total_sweeps();
  out["seed"] = config.seed;
  out["zero_tol"] = config.zero_tol;
  return out;
}

/// Parses JSON text, turning syntax errors into RejectedInput.
inline Json parse(const std::string& text, const std::string& where = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw RejectedInput(where + ": malformed JSON: " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ewcert::io
