#include "skewgeo/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

/// Numbers are accepted as-is; strings are kept as expressions.
std::string as_expression(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw SchemaError(path, "expected a number or an expression string");
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> expression_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_expression(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<std::string>> expression_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of rows");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(expression_list(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

double constant_value(const std::string& source, const ConstantMap& constants, const std::string& path) {
  try {
    return eval(parse(source, {}, constants), std::span<const double>{});
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

AmbientSpec parse_ambient(const json& v, const std::string& path) {
  AmbientSpec a;
  if (!v.is_object()) throw SchemaError(path, "expected an object");
  a.m = as_int(require(v, "m", path), join(path, "m"));
  if (a.m < 1) throw SchemaError(join(path, "m"), "must be >= 1");
  if (v.contains("builtin")) {
    a.builtin = as_string(v["builtin"], join(path, "builtin"));
    if (a.builtin != "flat" && a.builtin != "sasakian")
      throw SchemaError(join(path, "builtin"), "expected 'flat' or 'sasakian'");
    return a;
  }
  AmbientSource src;
  src.m = a.m;
  src.coords = string_list(require(v, "coords", path), join(path, "coords"));
  src.metric = expression_matrix(require(v, "metric", path), join(path, "metric"));
  src.phi = expression_matrix(require(v, "phi", path), join(path, "phi"));
  src.xi = expression_list(require(v, "xi", path), join(path, "xi"));
  src.eta = expression_list(require(v, "eta", path), join(path, "eta"));
  a.tensors = std::move(src);
  return a;
}

json ambient_json(const AmbientSpec& a) {
  json j;
  j["m"] = a.m;
  if (!a.tensors) {
    j["builtin"] = a.builtin;
    return j;
  }
  j["coords"] = a.tensors->coords;
  j["metric"] = a.tensors->metric;
  j["phi"] = a.tensors->phi;
  j["xi"] = a.tensors->xi;
  j["eta"] = a.tensors->eta;
  return j;
}

void validate(const Scenario& s) {
  if (s.name.empty()) throw SchemaError("name", "must be nonempty");
  if (s.params.empty()) throw SchemaError("immersion.params", "must be nonempty");
  std::set<std::string> names(s.params.begin(), s.params.end());
  if (names.size() != s.params.size()) throw SchemaError("immersion.params", "duplicate parameter name");
  for (const auto& p : s.params)
    if (s.constants.count(p)) throw SchemaError("immersion.params", "'" + p + "' is also a constant");
  if (s.domain.size() != s.params.size())
    throw SchemaError("immersion.domain", "expected one interval per parameter");
  for (std::size_t i = 0; i < s.domain.size(); ++i) {
    const std::string path = "immersion.domain[" + std::to_string(i) + "]";
    const double lo = constant_value(s.domain[i].first, s.constants, path);
    const double hi = constant_value(s.domain[i].second, s.constants, path);
    if (!(lo <= hi)) throw SchemaError(path, "min exceeds max");
  }
  if (s.samples < 1) throw SchemaError("sampling.count", "must be >= 1");
  if (s.probe && s.probe->size() != s.params.size())
    throw SchemaError("probe", "expected one value per parameter");
  if (s.expect.dims && s.expect.dims->size() != 3) throw SchemaError("expect.dims", "expected three integers");
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("<document>", e.what());
  }
  if (!doc.is_object()) throw SchemaError("<document>", "expected an object");

  Scenario s;
  s.name = as_string(require(doc, "name", ""), "name");
  if (doc.contains("description")) s.description = as_string(doc["description"], "description");
  s.ambient = parse_ambient(require(doc, "ambient", ""), "ambient");

  const json& imm = require(doc, "immersion", "");
  if (imm.contains("constants")) {
    const json& c = imm["constants"];
    if (!c.is_object()) throw SchemaError("immersion.constants", "expected an object");
    for (const auto& [k, v] : c.items()) {
      if (!v.is_number()) throw SchemaError("immersion.constants." + k, "expected a number");
      s.constants[k] = v.get<double>();
    }
  }
  s.params = string_list(require(imm, "params", "immersion"), "immersion.params");
  s.components = expression_list(require(imm, "components", "immersion"), "immersion.components");
  const json& dom = require(imm, "domain", "immersion");
  if (!dom.is_array()) throw SchemaError("immersion.domain", "expected an array of [min, max] pairs");
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::string path = "immersion.domain[" + std::to_string(i) + "]";
    if (!dom[i].is_array() || dom[i].size() != 2) throw SchemaError(path, "expected [min, max]");
    s.domain.emplace_back(as_expression(dom[i][0], path), as_expression(dom[i][1], path));
  }

  if (doc.contains("product")) {
    const json& p = doc["product"];
    ProductSpec ps;
    ps.base_T = string_list(require(p, "base_T", "product"), "product.base_T");
    if (p.contains("base_theta")) ps.base_theta = string_list(p["base_theta"], "product.base_theta");
    ps.fiber = string_list(require(p, "fiber", "product"), "product.fiber");
    if (p.contains("xi_location"))
      ps.xi_location = parse_xi_location(as_string(p["xi_location"], "product.xi_location"));
    if (p.contains("warping")) ps.warping = as_string(p["warping"], "product.warping");
    s.product = std::move(ps);
  }
  if (doc.contains("sampling")) {
    const json& sm = doc["sampling"];
    if (sm.contains("count")) s.samples = as_int(sm["count"], "sampling.count");
    if (sm.contains("seed")) {
      if (!sm["seed"].is_number_unsigned()) throw SchemaError("sampling.seed", "expected a nonnegative integer");
      s.seed = sm["seed"].get<unsigned long>();
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw SchemaError("tolerances", "expected an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) throw SchemaError("tolerances." + k, "expected a number");
      s.tolerances.at(k) = v.get<double>();
    }
  }
  if (doc.contains("probe")) {
    const json& pr = doc["probe"];
    if (!pr.is_array()) throw SchemaError("probe", "expected an array of numbers");
    std::vector<double> vals;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      if (!pr[i].is_number()) throw SchemaError("probe[" + std::to_string(i) + "]", "expected a number");
      vals.push_back(pr[i].get<double>());
    }
    s.probe = std::move(vals);
  }
  if (doc.contains("expect")) {
    const json& e = doc["expect"];
    if (!e.is_object()) throw SchemaError("expect", "expected an object");
    if (e.contains("label")) s.expect.label = as_string(e["label"], "expect.label");
    if (e.contains("verdict")) s.expect.verdict = as_string(e["verdict"], "expect.verdict");
    if (e.contains("cos_slant_angle")) s.expect.cos_slant_angle = as_expression(e["cos_slant_angle"], "expect.cos_slant_angle");
    if (e.contains("dims")) {
      const json& d = e["dims"];
      if (!d.is_array()) throw SchemaError("expect.dims", "expected three integers");
      std::vector<int> dims;
      for (std::size_t i = 0; i < d.size(); ++i) dims.push_back(as_int(d[i], "expect.dims[" + std::to_string(i) + "]"));
      s.expect.dims = std::move(dims);
    }
  }
  validate(s);
  return s;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["ambient"] = ambient_json(s.ambient);
  json imm;
  imm["params"] = s.params;
  imm["components"] = s.components;
  json dom = json::array();
  for (const auto& [lo, hi] : s.domain) dom.push_back({lo, hi});
  imm["domain"] = dom;
  imm["constants"] = json::object();
  for (const auto& [k, v] : s.constants) imm["constants"][k] = v;
  j["immersion"] = imm;
  if (s.product) {
    json p;
    p["base_T"] = s.product->base_T;
    p["base_theta"] = s.product->base_theta;
    p["fiber"] = s.product->fiber;
    p["xi_location"] = to_string(s.product->xi_location);
    if (s.product->warping) p["warping"] = *s.product->warping;
    j["product"] = p;
  }
  j["sampling"] = {{"count", s.samples}, {"seed", s.seed}};
  json tol;
  for (const auto& k : Tolerances::keys()) tol[k] = s.tolerances.at(k);
  j["tolerances"] = tol;
  if (s.probe) j["probe"] = *s.probe;
  json e = json::object();
  if (s.expect.label) e["label"] = *s.expect.label;
  if (s.expect.dims) e["dims"] = *s.expect.dims;
  if (s.expect.cos_slant_angle) e["cos_slant_angle"] = *s.expect.cos_slant_angle;
  if (s.expect.verdict) e["verdict"] = *s.expect.verdict;
  j["expect"] = e;
  return j.dump(2);
}

BuiltScenario build(const Scenario& s) {
  validate(s);
  BuiltScenario b;
  b.scenario = s;
  if (s.ambient.tensors) {
    b.ambient = std::make_shared<const AmbientModel>(build_ambient(s.name, *s.ambient.tensors, s.constants));
  } else if (s.ambient.builtin == "flat") {
    b.ambient = std::make_shared<const AmbientModel>(flat_model(s.ambient.m));
  } else if (s.ambient.builtin == "sasakian") {
    b.ambient = std::make_shared<const AmbientModel>(sasakian_model(s.ambient.m));
  } else {
    throw SchemaError("ambient.builtin", "unknown model '" + s.ambient.builtin + "'");
  }

  Immersion& imm = b.immersion;
  imm.ambient = b.ambient;
  imm.params = s.params;
  if (static_cast<int>(s.components.size()) != b.ambient->dim())
    throw SchemaError("immersion.components",
                      "expected " + std::to_string(b.ambient->dim()) + " components for the ambient");
  if (imm.dim() > b.ambient->dim()) throw SchemaError("immersion.params", "more parameters than ambient dimensions");
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    try {
      imm.components.push_back(parse(s.components[i], s.params, s.constants));
    } catch (const ParseError& e) {
      throw SchemaError("immersion.components[" + std::to_string(i) + "]", e.what());
    }
  }
  for (std::size_t i = 0; i < s.domain.size(); ++i) {
    const std::string path = "immersion.domain[" + std::to_string(i) + "]";
    imm.domain.push_back({constant_value(s.domain[i].first, s.constants, path),
                          constant_value(s.domain[i].second, s.constants, path)});
  }
  if (s.product) {
    const ProductSpec& p = *s.product;
    b.product = declare_product(imm, p.base_T, p.base_theta, p.fiber, p.xi_location, p.warping, s.constants);
  }
  return b;
}

void apply_override(Scenario& s, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw SchemaError("--set", "expected name=value");
  std::string name(assignment.substr(0, eq));
  name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }), name.end());
  if (!s.constants.count(name)) throw SchemaError("--set", "scenario has no constant '" + name + "'");
  s.constants[name] = constant_value(std::string(assignment.substr(eq + 1)), s.constants, "--set " + name);
}

Scenario resolve_scenario(std::string_view name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  const std::filesystem::path p{std::string(name_or_path)};
  if (std::filesystem::exists(p)) return load_config(p);
  throw SchemaError("scenario", "'" + std::string(name_or_path) + "' is neither a built-in nor a readable file");
}

}  // namespace skewgeo
