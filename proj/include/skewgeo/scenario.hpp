#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewgeo/ambient.hpp"
#include "skewgeo/expr.hpp"
#include "skewgeo/immersion.hpp"
#include "skewgeo/tolerances.hpp"
#include "skewgeo/warped.hpp"

namespace skewgeo {

/// Either a built-in model ("flat", "sasakian") of size m, or inline tensors.
struct AmbientSpec {
  std::string builtin;
  int m = 0;
  std::optional<AmbientSource> tensors;
};

struct ProductSpec {
  std::vector<std::string> base_T;
  std::vector<std::string> base_theta;
  std::vector<std::string> fiber;
  XiLocation xi_location = XiLocation::Invariant;
  std::optional<std::string> warping;
};

/// Golden values a scenario claims about itself; each becomes an asserted check.
struct Expectation {
  std::optional<std::string> label;
  std::optional<std::vector<int>> dims;     // (D, D^perp, D^theta)
  std::optional<std::string> cos_slant_angle;   // cosine of the slant angle, expression in the constants
  std::optional<std::string> verdict;
};

struct Scenario {
  std::string name;
  std::string description;
  AmbientSpec ambient;
  std::vector<std::string> params;
  std::vector<std::string> components;
  std::vector<std::pair<std::string, std::string>> domain;  // bounds as expressions in the constants
  ConstantMap constants;
  std::optional<ProductSpec> product;
  int samples = 100;
  unsigned long seed = 42;
  Tolerances tolerances;
  std::optional<std::vector<double>> probe;  // parameter values in declaration order
  Expectation expect;
};

/// Scenario with every expression parsed and every reference resolved.
struct BuiltScenario {
  Scenario scenario;
  std::shared_ptr<const AmbientModel> ambient;
  Immersion immersion;
  std::optional<ProductDeclaration> product;
};

/// Parses and validates; schema problems raise SchemaError naming the field.
Scenario parse_scenario(std::string_view json_text);
Scenario load_config(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& s);

BuiltScenario build(const Scenario& s);

/// "name=value"; the value may be any constant expression ("pi/12").
/// Only existing constants can be overridden.
void apply_override(Scenario& s, std::string_view assignment);

const std::vector<std::string>& builtin_names();
/// Throws SchemaError for unknown names.
Scenario builtin(std::string_view name);

/// A built-in name or a path to a JSON file.
Scenario resolve_scenario(std::string_view name_or_path);

}  // namespace skewgeo
