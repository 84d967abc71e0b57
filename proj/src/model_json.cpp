#include "mfg/model_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mfg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("model config: " + what);
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) fail("missing number \"" + key + "\"");
  return j[key].get<double>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) fail("missing array \"" + key + "\"");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) fail("non-numeric entry in \"" + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

EllipticCoefficient parse_a(const json& j, const Grid& grid) {
  if (!j.is_object() || !j.contains("kind")) fail("\"a\" needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") return constant_elliptic(grid, require_number(j, "value"));
  if (kind == "affine")
    return affine_elliptic(grid, require_number(j, "c0"), require_number(j, "c1"));
  if (kind == "table") {
    auto values = number_list(j, "values");
    if (static_cast<int>(values.size()) != grid.n_x)
      fail("\"a\" table must have n_x values");
    return make_elliptic(grid, Eigen::Map<const VectorXd>(values.data(),
                                                          values.size()));
  }
  fail("unknown \"a\" kind \"" + kind + "\"");
}

Hamiltonian parse_hamiltonian(const json& j, const Grid& grid) {
  if (!j.is_object() || !j.contains("kind")) fail("\"hamiltonian\" needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind != "sqrt1p") fail("unknown hamiltonian kind \"" + kind + "\"");
  if (j.contains("potential")) {
    auto values = number_list(j, "potential");
    if (static_cast<int>(values.size()) != grid.n_x)
      fail("potential must have n_x values");
    return sqrt1p_hamiltonian(grid, Eigen::Map<const VectorXd>(values.data(),
                                                               values.size()));
  }
  return sqrt1p_hamiltonian(grid);
}

CouplingKernel parse_kernel(const json& j, const Grid& grid,
                            const std::string& name) {
  if (!j.is_object()) fail("\"" + name + "\" must be an object");
  return cosine_kernel(grid, number_list(j, "cos_coeffs"));
}

}  // namespace

MfgModel model_from_json_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail("not valid JSON");
  if (!doc.is_object()) fail("top level must be an object");

  Grid grid = build_grid(static_cast<int>(require_number(doc, "n_x")),
                         static_cast<int>(require_number(doc, "n_t")),
                         require_number(doc, "t0"), require_number(doc, "T"),
                         require_number(doc, "alpha"));
  MfgModel model;
  model.grid = grid;
  if (!doc.contains("a")) fail("missing \"a\"");
  model.a = parse_a(doc["a"], grid);
  if (!doc.contains("hamiltonian")) fail("missing \"hamiltonian\"");
  model.h = parse_hamiltonian(doc["hamiltonian"], grid);
  if (!doc.contains("F")) fail("missing \"F\"");
  model.f_coupling = parse_kernel(doc["F"], grid, "F");
  if (!doc.contains("G")) fail("missing \"G\"");
  model.g_coupling = parse_kernel(doc["G"], grid, "G");
  return model;
}

MfgModel model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("model config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str());
}

}  // namespace mfg
