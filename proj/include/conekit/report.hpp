#ifndef CONEKIT_REPORT_HPP
#define CONEKIT_REPORT_HPP

/// \file report.hpp
/// JSON input parsing and report serialization. Objects use sorted keys so
/// that output is byte-stable for a fixed seed.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "conekit/repro.hpp"

namespace conekit {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Malformed input file.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json vector_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

// ---------------------------------------------------------------------------
// Input

struct MatrixInput {
  Mat entries;
  std::optional<SpaceDescriptor> dom;
  std::optional<SpaceDescriptor> cod;
  std::optional<double> lambda;

  OperatorMatrix operator_matrix() const {
    if (!dom || !cod) throw SchemaError("\"dom\" and \"cod\" are required");
    if (entries.rows() != cod->dim || entries.cols() != dom->dim)
      throw SchemaError("\"rows\"/\"cols\" must equal cod.dim/dom.dim");
    return {entries, *dom, *cod};
  }
};

inline Family parse_family(const std::string& s) {
  if (s == "l1") return Family::L1;
  if (s == "l2") return Family::L2;
  if (s == "linf") return Family::Linf;
  throw SchemaError("unknown space family \"" + s + "\" (expected l1, l2 or linf)");
}

inline SpaceDescriptor parse_space(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains("family") || !j.contains("dim") || !j["family"].is_string() ||
      !j["dim"].is_number_integer())
    throw SchemaError(std::string("\"") + key + "\" must be {\"family\": string, \"dim\": int}");
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw SchemaError(std::string("\"") + key + ".dim\" must be positive");
  return {parse_family(j["family"].get<std::string>()), dim};
}

inline MatrixInput parse_matrix_file(const Json& j) {
  if (!j.is_object()) throw SchemaError("matrix file must be a JSON object");
  for (const char* key : {"rows", "cols"})
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1)
      throw SchemaError(std::string("\"") + key + "\" must be a positive integer");
  if (!j.contains("data") || !j["data"].is_array()) throw SchemaError("\"data\" must be an array");
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  const Json& data = j["data"];
  if (static_cast<long long>(data.size()) != static_cast<long long>(rows) * cols)
    throw SchemaError("\"data\" length must equal rows * cols");
  MatrixInput in;
  in.entries.resize(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const Json& v = data[static_cast<std::size_t>(i * cols + c)];
      if (!v.is_number()) throw SchemaError("\"data\" entries must be numbers");
      in.entries(i, c) = v.get<double>();
    }
  if (j.contains("dom")) in.dom = parse_space(j["dom"], "dom");
  if (j.contains("cod")) in.cod = parse_space(j["cod"], "cod");
  if (j.contains("lambda")) {
    if (!j["lambda"].is_number()) throw SchemaError("\"lambda\" must be a number");
    in.lambda = j["lambda"].get<double>();
  }
  return in;
}

inline Json space_json(const SpaceDescriptor& s) { return {{"family", to_string(s.family)}, {"dim", s.dim}}; }

inline Json matrix_file_json(const Mat& m, const SpaceDescriptor& dom, const SpaceDescriptor& cod,
                             std::optional<double> lambda = std::nullopt) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  Json out = {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}, {"dom", space_json(dom)},
              {"cod", space_json(cod)}};
  if (lambda) out["lambda"] = *lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_envelope(const std::string& command, Json inputs, Json results, std::optional<std::uint64_t> seed) {
  Json out;
  out["command"] = command;
  out["inputs"] = std::move(inputs);
  out["results"] = std::move(results);
  out["seed"] = seed ? Json(*seed) : Json(nullptr);
  out["version"] = kVersion;
  return out;
}

inline Json check_json(const ReproCheck& c) {
  return {{"label", c.label},         {"relation", c.relation}, {"value", number(c.computed)},
          {"threshold", number(c.expected)}, {"tolerance", c.tolerance}, {"pass", c.pass},
          {"paper_anchor", c.anchor}};
}

inline Json repro_json(const ReproReport& r) {
  Json results = Json::array();
  for (const auto& c : r.checks) results.push_back(check_json(c));
  Json out = report_envelope("reproduce", {{"which", r.name}}, std::move(results), r.seed);
  out["overall"] = r.overall;
  return out;
}

inline Json classification_json(const ClassificationReport& rep, Json inputs, std::optional<std::uint64_t> seed) {
  Json results = Json::array();
  for (const auto& e : rep.entries) {
    Json r = {{"class", to_string(e.cls)}, {"verdict", to_string(e.verdict)}, {"norm", e.norm},
              {"value", number(e.value)},   {"threshold", e.threshold},        {"tolerance", e.tolerance},
              {"paper_anchor", e.anchor}};
    r["pass"] = e.verdict == Verdict::Unsupported ? Json(nullptr) : Json(e.verdict == Verdict::True);
    if (!e.note.empty()) r["note"] = e.note;
    results.push_back(std::move(r));
  }
  return report_envelope("classify", std::move(inputs), std::move(results), seed);
}

inline Json falsify_json(const FalsifyResult& f) {
  Json out = {{"witness_found", f.witness_found}, {"trials_run", f.trials_run}, {"inconclusive", f.inconclusive},
              {"lorentz_dim", f.k},
              {"paper_anchor", "sampled Lorentz legs A, B with B P A not entanglement breaking disprove LorEB; "
                               "no witness proves nothing"}};
  if (f.witness_found) {
    out["trial"] = f.trial;
    out["reason"] = f.reason;
    out["trace_norm"] = number(f.trace_norm);
    out["a"] = matrix_json(f.a);
    out["b"] = matrix_json(f.b);
  }
  return out;
}

inline Json norm_info_json(const NormInfo& info) {
  return {{"method", info.method}, {"status", info.status}, {"iterations", info.iterations},
          {"gap", number(info.gap)}, {"psd_slack", number(info.psd_slack)}};
}

inline Json sinkhorn_json(const SinkhornForm& s) {
  return {{"a", matrix_json(s.a)},         {"b", matrix_json(s.b)}, {"v", vector_json(s.v)},
          {"residual", number(s.residual)}, {"iterations", s.iterations},
          {"paper_anchor", "B P A = 1 (+) v with automorphisms A, B and a diagonal contraction v"}};
}

/// Structural validation of a report document.
inline bool validate_report(const Json& j, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!j.is_object()) return fail("report must be an object");
  for (const char* key : {"command", "inputs", "results", "seed", "version"})
    if (!j.contains(key)) return fail(std::string("missing key ") + key);
  if (!j["command"].is_string()) return fail("command must be a string");
  if (!j["version"].is_string()) return fail("version must be a string");
  if (!j["seed"].is_null() && !j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    return fail("seed must be an integer or null");
  const Json& res = j["results"];
  if (res.is_array()) {
    for (const auto& r : res) {
      if (!r.is_object()) return fail("result entries must be objects");
      for (const char* key : {"value", "threshold", "tolerance", "pass", "paper_anchor"})
        if (!r.contains(key)) return fail(std::string("result missing key ") + key);
      if (!r["paper_anchor"].is_string()) return fail("paper_anchor must be a string");
      if (!r["pass"].is_boolean() && !r["pass"].is_null()) return fail("pass must be boolean or null");
    }
  } else if (!res.is_object()) {
    return fail("results must be an array or object");
  }
  return true;
}

}  // namespace conekit

#endif  // CONEKIT_REPORT_HPP
