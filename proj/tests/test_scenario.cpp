#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "skewgeo/errors.hpp"
#include "skewgeo/pipeline.hpp"
#include "skewgeo/report.hpp"
#include "skewgeo/scenario.hpp"

using namespace skewgeo;

namespace {

const char* kMinimal = R"js({
  "name": "helix",
  "ambient": {"builtin": "flat", "m": 1},
  "immersion": {
    "params": ["w"],
    "components": ["cos(w)", "sin(w)", "c*w"],
    "domain": [[-1, 1]],
    "constants": {"c": 0.5}
  }
})js";

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal config parses with defaults") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.name == "helix");
  CHECK(s.samples == 100);
  CHECK(s.seed == 42);
  CHECK(s.constants.at("c") == 0.5);
  const BuiltScenario b = build(s);
  CHECK(b.immersion.dim() == 1);
  CHECK(b.immersion.ambient_dim() == 3);
  CHECK_FALSE(b.product.has_value());
}

TEST_CASE("schema errors name the field") {
  auto doc = nlohmann::json::parse(kMinimal);
  auto without = doc;
  without["immersion"].erase("components");
  CHECK(field_of(without.dump()) == "immersion.components");

  auto inverted = doc;
  inverted["immersion"]["domain"] = {{1, -1}};
  CHECK(field_of(inverted.dump()).rfind("immersion.domain", 0) == 0);

  auto bad_model = doc;
  bad_model["ambient"]["builtin"] = "hyperbolic";
  CHECK(field_of(bad_model.dump()) == "ambient.builtin");

  auto count = doc;
  count["sampling"] = {{"count", 0}};
  CHECK(field_of(count.dump()) == "sampling.count");

  auto clash = doc;
  clash["immersion"]["constants"] = {{"w", 1.0}};
  CHECK(field_of(clash.dump()) == "immersion.params");

  CHECK(field_of("{not json") == "<document>");
}

TEST_CASE("bad expressions are reported against their component") {
  auto doc = nlohmann::json::parse(kMinimal);
  doc["immersion"]["components"][1] = "sin(w";
  const Scenario s = parse_scenario(doc.dump());
  try {
    build(s);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "immersion.components[1]");
  }
}

TEST_CASE("component count must match the ambient dimension") {
  auto doc = nlohmann::json::parse(kMinimal);
  doc["ambient"]["m"] = 2;
  CHECK_THROWS_AS(build(parse_scenario(doc.dump())), SchemaError);
}

TEST_CASE("ex62 loads as seven parameters into R^13") {
  const BuiltScenario b = build(builtin("ex62"));
  CHECK(b.immersion.dim() == 7);
  CHECK(b.ambient->dim() == 13);
  REQUIRE(b.product.has_value());
  CHECK(b.product->base_T.size() == 3);
  CHECK(b.product->base_theta.size() == 2);
  CHECK(b.product->fiber.size() == 2);
  CHECK(b.product->warping.has_value());
}

TEST_CASE("every built-in survives a JSON round trip") {
  for (const auto& name : builtin_names()) {
    const Scenario s = builtin(name);
    const std::string text = scenario_to_json(s);
    CHECK(scenario_to_json(parse_scenario(text)) == text);
  }
  CHECK_THROWS_AS(builtin("nope"), SchemaError);
}

TEST_CASE("a config with every section verifies") {
  const auto path = std::filesystem::temp_directory_path() / "skewgeo_test_cone.json";
  {
    std::ofstream out(path);
    out << R"js({
  "name": "cone",
  "description": "slant cone in R^5",
  "ambient": {"builtin": "flat", "m": 2},
  "immersion": {
    "params": ["r", "w", "t"],
    "components": ["r*cos(w)", "c*r", "r*sin(w)", "0", "t"],
    "domain": [[1, 2], ["-pi", "pi"], [-1, 1]],
    "constants": {"c": 1}
  },
  "product": {
    "base_T": ["t"], "base_theta": ["r"], "fiber": ["w"],
    "xi_location": "M_T",
    "warping": "r"
  },
  "sampling": {"count": 100, "seed": 42},
  "tolerances": {"bishop": 1e-6},
  "probe": [1.5, 0.0, 0.0],
  "expect": {
    "label": "slant",
    "dims": [0, 0, 2],
    "cos_slant_angle": "1/sqrt(1+c^2)",
    "verdict": "warped product"
  }
})js";
  }
  for (const char* c : {"1", "3"}) {
    Scenario s = load_config(path);
    apply_override(s, std::string("c=") + c);
    const VerificationReport r = run_scenario(s);
    CHECK(r.passed());
    REQUIRE(r.split.has_value());
    CHECK(r.split->label == "slant");
    CHECK(r.warped->verdict == "warped product");
    CHECK(r.theorem->point == std::vector<double>{1.5, 0.0, 0.0});
  }
  std::filesystem::remove(path);
}

TEST_CASE("config files load from disk") {
  const auto path = std::filesystem::temp_directory_path() / "skewgeo_test_config.json";
  {
    std::ofstream out(path);
    out << scenario_to_json(builtin("ex32"));
  }
  const Scenario s = resolve_scenario(path.string());
  CHECK(s.name == "ex32");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), Error);
}

TEST_CASE("constant overrides") {
  Scenario s = builtin("ex32");
  apply_override(s, "theta=pi/12");
  CHECK(s.constants.at("theta") == doctest::Approx(0.2617993877991494));
  CHECK_THROWS_AS(apply_override(s, "phi=1"), SchemaError);
  CHECK_THROWS_AS(apply_override(s, "theta"), SchemaError);
  CHECK_THROWS_AS(apply_override(s, "theta=1+"), Error);
}

TEST_CASE("every built-in scenario verifies") {
  for (const auto& name : builtin_names()) {
    Scenario s = builtin(name);
    s.samples = 40;
    const VerificationReport r = run_scenario(s);
    INFO(name);
    for (const auto& c : r.checks) {
      INFO(c.name << " = " << c.value << " (tol " << c.tolerance << ")");
      CHECK(c.verdict != Verdict::Fail);
    }
    CHECK(r.passed());
  }
}

TEST_CASE("reports do not depend on the thread count") {
  Scenario s = builtin("ex62");
  s.samples = 30;
  const std::string one = to_json(run_scenario(s, {Stage::Verify, 1}));
  const std::string many = to_json(run_scenario(s, {Stage::Verify, 6}));
  CHECK(one == many);
  CHECK(to_text(run_scenario(s, {Stage::Verify, 1})) == to_text(run_scenario(s, {Stage::Verify, 3})));
}

TEST_CASE("earlier stages stop early") {
  Scenario s = builtin("ex62");
  s.samples = 10;
  const VerificationReport amb = run_scenario(s, {Stage::Ambient, 1});
  CHECK(amb.stage == "ambient");
  CHECK_FALSE(amb.split.has_value());
  const VerificationReport cls = run_scenario(s, {Stage::Classify, 1});
  CHECK(cls.split.has_value());
  CHECK_FALSE(cls.warped.has_value());
}

TEST_CASE("a failing expectation fails the run") {
  Scenario s = builtin("ex31");
  s.samples = 10;
  s.expect.dims = std::vector<int>{2, 2, 2};
  const VerificationReport r = run_scenario(s);
  CHECK_FALSE(r.passed());
  REQUIRE(r.find("expect.dims") != nullptr);
  CHECK(r.find("expect.dims")->verdict == Verdict::Fail);
}

TEST_CASE("degenerate samples are counted") {
  Scenario s = builtin("ex61");
  s.domain[4] = {"-0.1", "0.1"};
  s.samples = 40;
  const VerificationReport r = run_scenario(s, {Stage::Classify, 1});
  CHECK(r.degenerate.empty());
  s.domain[4] = {"0", "0"};
  const VerificationReport all_bad = run_scenario(s, {Stage::Classify, 1});
  CHECK(all_bad.degenerate.size() == 40);
  CHECK_FALSE(all_bad.passed());
}

TEST_CASE("JSON report layout") {
  Scenario s = builtin("ex62");
  s.samples = 10;
  const auto j = nlohmann::json::parse(to_json(run_scenario(s)));
  CHECK(j["scenario"] == "ex62");
  CHECK(j["seed"] == 42);
  CHECK(j["passed"] == true);
  CHECK(j["split"]["label"] == "skew CR order 1");
  CHECK(j["warped"]["verdict"] == "warped product");
  CHECK(std::abs(j["theorem41"]["rhs_statement_i"].get<double>() - (4.0 + 1.0 / 12)) < 1e-9);
  CHECK(j["theorem41"]["hypothesis_flags"]["sasakian_ambient"] == false);
  CHECK(j["tolerances"].contains("bishop"));
}

TEST_CASE("text report has one line per lemma identity") {
  Scenario s = builtin("ex62");
  s.samples = 10;
  const VerificationReport r = run_scenario(s);
  const std::string text = to_text(r);
  int lemmas = 0;
  for (const auto& c : r.checks) {
    if (c.stage != "lemma") continue;
    ++lemmas;
    CHECK(text.find("\n" + c.name + " ") != std::string::npos);
  }
  CHECK(lemmas == 11);
}

TEST_CASE("built-in registry") {
  const std::vector<std::string> want{"ex31", "ex32", "ex61", "ex62", "sasakian5-ambient",
                                      "sasakian5-invariant-submanifold", "unit-circle", "tg-plane",
                                      "sheared-nonproduct"};
  CHECK(builtin_names() == want);
}

TEST_CASE("unwritable report paths raise") {
  Scenario s = builtin("unit-circle");
  s.samples = 5;
  const VerificationReport r = run_scenario(s, {Stage::Classify, 1});
  CHECK_THROWS_AS(emit_report(r, ReportFormat::Json, "/nonexistent-dir/x/report.json"), Error);
  CHECK_THROWS_AS(parse_format("yaml"), Error);
}

TEST_CASE("tolerance table") {
  Tolerances t;
  CHECK(t.at("bishop") == 1e-6);
  t.at("bishop") = 1e-3;
  CHECK(t.bishop == 1e-3);
  CHECK_THROWS(t.at("nope"));
  for (const auto& k : Tolerances::keys()) CHECK_NOTHROW(t.at(k));
}
