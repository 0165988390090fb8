#include <cmath>
#include <cstring>
#include <numbers>

#include <doctest.h>

#include "skewgeo/errors.hpp"
#include "skewgeo/scenario.hpp"
#include "skewgeo/skewcr.hpp"
#include "skewgeo/warped.hpp"

using namespace skewgeo;

namespace {

BuiltScenario named(const std::string& name, const std::vector<std::string>& sets = {}) {
  Scenario s = builtin(name);
  for (const auto& a : sets) apply_override(s, a);
  return build(s);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("product declarations must partition the parameters") {
  const BuiltScenario b = named("ex62");
  const auto& imm = b.immersion;
  CHECK_NOTHROW(declare_product(imm, {"s", "t", "z"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant));
  CHECK_THROWS_AS(declare_product(imm, {"s", "t"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant), SchemaError);
  CHECK_THROWS_AS(declare_product(imm, {"s", "t", "z", "u"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant),
                  SchemaError);
  CHECK_THROWS_AS(declare_product(imm, {"s", "t", "z", "q"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant),
                  SchemaError);
  CHECK_THROWS_AS(declare_product(imm, {"s", "t", "z", "w", "r"}, {"u", "v"}, {}, XiLocation::Invariant),
                  SchemaError);
  CHECK_THROWS_AS(
      declare_product(imm, {"s", "t", "z"}, {"u", "v"}, {"w", "r"}, XiLocation::Invariant, std::string("u*w")),
      SchemaError);
}

TEST_CASE("xi location names") {
  CHECK(to_string(XiLocation::Invariant) == "M_T");
  CHECK(parse_xi_location(to_string(XiLocation::Slant)) == XiLocation::Slant);
  CHECK(parse_xi_location(to_string(XiLocation::Fiber)) == XiLocation::Fiber);
  CHECK_THROWS_AS(parse_xi_location("nowhere"), Error);
}

TEST_CASE("ex62 is a warped product with f = sqrt(2(u^2+v^2))") {
  for (double k : {0.5, 1.0, 2.0}) {
    const BuiltScenario b = named("ex62", {"k=" + std::to_string(k)});
    const auto pts = sample_points(b.immersion, 30, 42);
    const WarpedStructure ws = extract_warping(b.immersion, *b.product, pts);
    CHECK(ws.verdict == WarpVerdict::WarpedProduct);
    CHECK(ws.block.max() < 1e-10);
    CHECK(ws.consistency < 1e-9);
    REQUIRE(ws.expr_error.has_value());
    CHECK(*ws.expr_error < 1e-6);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double u = pts[i][0], v = pts[i][1];
      CHECK(ws.f_values[static_cast<Eigen::Index>(i)] == doctest::Approx(std::sqrt(2 * (u * u + v * v))).epsilon(1e-10));
    }
  }
}

TEST_CASE("ln f gradient on ex62") {
  const BuiltScenario b = named("ex62");
  const auto pts = sample_points(b.immersion, 10, 42);
  const WarpedStructure ws = extract_warping(b.immersion, *b.product, pts);
  const Eigen::VectorXd p = vec({1, 1, 0.3, 0.2, 0, 0, 0});
  const LnFGradient g = grad_ln_f(b.immersion, *b.product, ws, p);
  CHECK(g.differential[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.differential[1] == doctest::Approx(0.5).epsilon(1e-14));
  for (int c = 2; c < 7; ++c) CHECK(g.differential[c] == 0.0);
  CHECK(g.norm2_theta == doctest::Approx(1.0 / 8).epsilon(1e-14));
  CHECK(g.norm2_T == 0.0);
  CHECK(std::abs(g.xi_ln_f) < 1e-12);

  // without the declared expression the gradient comes from the metric alone
  ProductDeclaration bare = *b.product;
  bare.warping.reset();
  const WarpedStructure wb = extract_warping(b.immersion, bare, pts);
  const LnFGradient gb = grad_ln_f(b.immersion, bare, wb, p);
  CHECK((gb.differential - g.differential).norm() < 1e-12);
  CHECK(gb.norm2_theta == doctest::Approx(1.0 / 8).epsilon(1e-12));
}

TEST_CASE("Bishop formula on ex62") {
  const BuiltScenario b = named("ex62");
  const auto pts = sample_points(b.immersion, 10, 3);
  const WarpedStructure ws = extract_warping(b.immersion, *b.product, pts);
  for (const auto& p : pts)
    for (int a : b.product->base())
      for (int c : b.product->fiber) {
        const BishopResidual r = check_bishop(b.immersion, *b.product, ws, p, a, c);
        CHECK(r.residual < 1e-6);
        CHECK(r.ordering < 1e-8);
      }
}

TEST_CASE("verdicts for the other products") {
  const BuiltScenario r = named("ex61");
  CHECK(extract_warping(r.immersion, *r.product, sample_points(r.immersion, 20, 1)).verdict ==
        WarpVerdict::RiemannianProduct);
  const BuiltScenario t = named("tg-plane");
  CHECK(extract_warping(t.immersion, *t.product, sample_points(t.immersion, 20, 1)).verdict ==
        WarpVerdict::RiemannianProduct);
  const BuiltScenario s = named("sheared-nonproduct");
  const WarpedStructure ws = extract_warping(s.immersion, *s.product, sample_points(s.immersion, 20, 1));
  CHECK(ws.verdict == WarpVerdict::NotWarped);
  CHECK(ws.block.offdiag == doctest::Approx(1.0));
  CHECK(to_string(ws.verdict) == "not a warped product");
}

TEST_CASE("inequality report at the ex62 probe point") {
  const BuiltScenario b = named("ex62");
  const auto pts = sample_points(b.immersion, 10, 42);
  const WarpedStructure ws = extract_warping(b.immersion, *b.product, pts);
  const GeometrySample s = second_fundamental_form(b.immersion, vec({1, 1, 0.3, 0.2, 0, 0, 0}));
  const TFPair tf = tf_decompose(s);
  const DistributionSplit split = classify(s, tf);
  const LnFGradient g = grad_ln_f(b.immersion, *b.product, ws, s);
  HypothesisFlags flags;
  flags.order1_skewcr = true;
  const InequalityReport r = inequality_report(s, tf, split, g, *b.product, flags);
  CHECK(r.m2 == 2);
  CHECK(r.theta == doctest::Approx(std::numbers::pi / 3).epsilon(1e-12));
  CHECK(std::abs(r.rhs_statement_i - (4.0 + 1.0 / 12)) < 1e-9);
  CHECK(std::abs(r.rhs_statement_ii - 1.0 / 12) < 1e-9);
  CHECK(std::abs(r.rhs_proof_variant_i - (4.0 + 1.0 / 3)) < 1e-9);
  CHECK(std::abs(r.lhs - r.lhs_components) < 1e-8);
  CHECK(r.margin == doctest::Approx(r.lhs - r.rhs_statement_i));
}

TEST_CASE("special case lower bounds") {
  CHECK(special_case_rhs(2, 0.0, 0.0, 0.0, RhsCase::ContactCR) == 4.0);
  CHECK(std::abs(special_case_rhs(2, 0.0, 1.0 / 8, std::numbers::pi / 3, RhsCase::PseudoSlant) - 1.0 / 12) < 1e-15);

  for (int m2 : {1, 2, 5})
    for (double gT2 : {0.0, 0.125, 3.7})
      for (double th : {0.0, 0.2, std::numbers::pi / 3, std::numbers::pi / 2}) {
        CHECK(same_bits(special_case_rhs(m2, gT2, 0.0, th, RhsCase::XiInInvariant),
                        special_case_rhs(m2, gT2, 0.0, th, RhsCase::ContactCR)));
      }
  for (int m2 : {1, 2, 5})
    for (double gth2 : {0.0, 0.125, 3.7})
      for (double th : {0.2, std::numbers::pi / 3, std::numbers::pi / 2}) {
        CHECK(same_bits(special_case_rhs(m2, 0.0, gth2, th, RhsCase::XiInSlant),
                        special_case_rhs(m2, 0.0, gth2, th, RhsCase::PseudoSlant)));
      }
}

TEST_CASE("lower bounds grow with the gradients and shrink with the angle") {
  const double th = 0.7;
  for (auto c : {RhsCase::XiInInvariant, RhsCase::XiInSlant, RhsCase::XiInInvariantCsc}) {
    CHECK(special_case_rhs(2, 0.5, 0.3, th, c) < special_case_rhs(2, 0.6, 0.3, th, c));
    CHECK(special_case_rhs(2, 0.5, 0.3, th, c) < special_case_rhs(2, 0.5, 0.4, th, c));
    CHECK(special_case_rhs(2, 0.5, 0.3, th, c) > special_case_rhs(2, 0.5, 0.3, th + 0.2, c));
    CHECK(special_case_rhs(2, 0.5, 0.3, th, c) < special_case_rhs(3, 0.5, 0.3, th, c));
  }
  CHECK(special_case_rhs(2, 0.5, 0.3, th, RhsCase::XiInInvariantCsc) >
        special_case_rhs(2, 0.5, 0.3, th, RhsCase::XiInInvariant));
  CHECK(special_case_rhs(2, 0.5, 0.3, std::numbers::pi / 2, RhsCase::PseudoSlant) < 1e-30);
}

TEST_CASE("special case preconditions") {
  CHECK_THROWS_AS(special_case_rhs(0, 0.0, 0.0, 1.0, RhsCase::ContactCR), DomainError);
  CHECK_THROWS_AS(special_case_rhs(2, -1.0, 0.0, 1.0, RhsCase::ContactCR), DomainError);
  CHECK_THROWS_AS(special_case_rhs(2, 0.0, 0.1, 0.0, RhsCase::PseudoSlant), DomainError);
  CHECK_THROWS_AS(special_case_rhs(2, 0.0, 0.0, 0.0, RhsCase::PseudoSlant), DomainError);
  CHECK_THROWS_AS(special_case_rhs(2, 0.0, 0.1, 2.0, RhsCase::XiInSlant), DomainError);
}
