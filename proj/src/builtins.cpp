#include <algorithm>

#include "skewgeo/errors.hpp"
#include "skewgeo/scenario.hpp"

namespace skewgeo {

namespace {

using Bounds = std::vector<std::pair<std::string, std::string>>;

Scenario make(std::string name, std::string description, std::string model, int m,
              std::vector<std::string> params, std::vector<std::string> components, Bounds domain,
              ConstantMap constants = {}) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.ambient.builtin = std::move(model);
  s.ambient.m = m;
  s.params = std::move(params);
  s.components = std::move(components);
  s.domain = std::move(domain);
  s.constants = std::move(constants);
  return s;
}

Scenario ex31() {
  Scenario s = make("ex31", "order-1 skew CR submanifold of R^11, slant angle depends on k", "flat", 5,
                    {"u", "v", "w", "r", "s", "t"},
                    {"u+v", "cosh(w)", "k*r", "cos(r)", "cos(s)", "u-v", "sinh(w)", "s", "sin(r)", "sin(s)", "t"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-pi", "pi"}, {"-pi", "pi"}, {"-1", "1"}},
                    {{"k", 1.0}});
  s.expect.label = "skew CR order 1";
  s.expect.dims = std::vector<int>{2, 1, 2};
  s.expect.cos_slant_angle = "k/sqrt(2*(1+k^2))";
  return s;
}

Scenario ex32() {
  // theta is a coordinate constant, not the slant angle
  Scenario s = make("ex32", "order-1 skew CR submanifold of R^9 with a 45 degree slant block", "flat", 4,
                    {"u", "v", "r", "s", "w", "t"},
                    {"u", "r", "s*cos(theta)", "cos(w)", "-v", "s", "s*sin(theta)", "-sin(w)", "t"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-pi", "pi"}, {"-1", "1"}},
                    {{"theta", 0.5235987755982988}});
  s.expect.label = "skew CR order 1";
  s.expect.dims = std::vector<int>{2, 1, 2};
  s.expect.cos_slant_angle = "cos(pi/4)";
  return s;
}

Scenario ex61() {
  Scenario s = make("ex61", "Riemannian product M_T x M_theta x M_perp in R^9", "flat", 4,
                    {"u1", "v1", "u2", "v2", "w", "t"},
                    {"u1", "u2", "sin(v2)", "cos(w^2)", "v1", "v2", "cos(v2)", "sin(w^2)", "t"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-pi", "pi"}, {"0.2", "1.5"}, {"-1", "1"}});
  s.product = ProductSpec{{"u1", "v1", "t"}, {"u2", "v2"}, {"w"}, XiLocation::Invariant, std::nullopt};
  s.expect.label = "skew CR order 1";
  s.expect.dims = std::vector<int>{2, 1, 2};
  s.expect.cos_slant_angle = "cos(pi/4)";
  s.expect.verdict = "Riemannian product";
  return s;
}

Scenario ex62() {
  Scenario s = make("ex62", "skew CR warped product in R^13 with f = sqrt(2(u^2+v^2))", "flat", 6,
                    {"u", "v", "w", "r", "s", "t", "z"},
                    {"u*cos(w+r)", "u*sin(w+r)", "v*cos(w-r)", "v*sin(w-r)", "k*(u+v)", "s+t", "v*cos(w+r)",
                     "v*sin(w+r)", "u*cos(w-r)", "u*sin(w-r)", "-k*(u-v)", "-s+t", "z"},
                    {{"0.5", "1.5"}, {"0.5", "1.5"}, {"-pi", "pi"}, {"-pi", "pi"}, {"-1", "1"}, {"-1", "1"},
                     {"-1", "1"}},
                    {{"k", 1.0}});
  s.product = ProductSpec{{"s", "t", "z"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant, "sqrt(2*(u^2+v^2))"};
  s.probe = std::vector<double>{1.0, 1.0, 0.3, 0.2, 0.0, 0.0, 0.0};
  s.expect.label = "skew CR order 1";
  s.expect.dims = std::vector<int>{2, 2, 2};
  s.expect.cos_slant_angle = "k^2/(1+k^2)";
  s.expect.verdict = "warped product";
  return s;
}

Scenario sasakian_ambient() {
  Scenario s = make("sasakian5-ambient", "identity chart of the Sasakian R^5", "sasakian", 2,
                    {"a1", "a2", "b1", "b2", "c"}, {"a1", "a2", "b1", "b2", "c"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}});
  s.expect.label = "invariant";
  s.expect.dims = std::vector<int>{4, 0, 0};
  return s;
}

Scenario sasakian_invariant() {
  Scenario s = make("sasakian5-invariant-submanifold", "the invariant slice x2 = y2 = 0 of the Sasakian R^5",
                    "sasakian", 2, {"a", "b", "c"}, {"a", "0", "b", "0", "c"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}});
  s.expect.label = "invariant";
  s.expect.dims = std::vector<int>{2, 0, 0};
  return s;
}

Scenario unit_circle() {
  Scenario s = make("unit-circle", "unit circle in the (x1, y1) plane of R^3", "flat", 1, {"w"},
                    {"cos(w)", "sin(w)", "0"}, {{"-pi", "pi"}});
  s.expect.label = "anti-invariant";
  s.expect.dims = std::vector<int>{0, 1, 0};
  return s;
}

Scenario tg_plane() {
  Scenario s = make("tg-plane", "totally geodesic order-1 skew CR plane in R^9", "flat", 4,
                    {"u", "v", "r", "s", "w", "t"}, {"u", "r", "s", "w", "-v", "s", "0", "0", "t"},
                    {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}, {"-1", "1"}});
  s.product = ProductSpec{{"u", "v", "t"}, {"r", "s"}, {"w"}, XiLocation::Invariant, std::nullopt};
  s.expect.label = "skew CR order 1";
  s.expect.dims = std::vector<int>{2, 1, 2};
  s.expect.cos_slant_angle = "cos(pi/4)";
  s.expect.verdict = "Riemannian product";
  return s;
}

Scenario sheared() {
  Scenario s = make("sheared-nonproduct", "sheared plane whose metric mixes the declared factors", "flat", 1,
                    {"u", "w", "t"}, {"u+w", "w", "t"}, {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}});
  s.product = ProductSpec{{"u", "t"}, {}, {"w"}, XiLocation::Invariant, std::nullopt};
  s.expect.label = "invariant";
  s.expect.dims = std::vector<int>{2, 0, 0};
  s.expect.verdict = "not a warped product";
  return s;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "ex31", "ex32", "ex61", "ex62", "sasakian5-ambient", "sasakian5-invariant-submanifold",
      "unit-circle", "tg-plane", "sheared-nonproduct"};
  return names;
}

Scenario builtin(std::string_view name) {
  if (name == "ex31") return ex31();
  if (name == "ex32") return ex32();
  if (name == "ex61") return ex61();
  if (name == "ex62") return ex62();
  if (name == "sasakian5-ambient") return sasakian_ambient();
  if (name == "sasakian5-invariant-submanifold") return sasakian_invariant();
  if (name == "unit-circle") return unit_circle();
  if (name == "tg-plane") return tg_plane();
  if (name == "sheared-nonproduct") return sheared();
  throw SchemaError("scenario", "unknown built-in '" + std::string(name) + "'");
}

}  // namespace skewgeo
