#include <cmath>
#include <numbers>

#include <doctest.h>

#include "fd_oracle.hpp"
#include "skewgeo/errors.hpp"
#include "skewgeo/expr.hpp"

using namespace skewgeo;

namespace {

double ev(std::string_view src, const std::vector<std::string>& params, std::vector<double> args,
          const ConstantMap& constants = {}) {
  return eval(parse(src, params, constants), std::span<const double>(args));
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("1+2*3", {}, {}) == 7.0);
  CHECK(ev("(1+2)*3", {}, {}) == 9.0);
  CHECK(ev("2^3^2", {}, {}) == 512.0);
  CHECK(ev("-u^2", {"u"}, {2.0}) == -4.0);
  CHECK(ev("u-v-w", {"u", "v", "w"}, {1, 2, 3}) == -4.0);
  CHECK(ev("8/4/2", {}, {}) == 1.0);
  CHECK(ev("1.5e1", {}, {}) == 15.0);
  CHECK(ev("pi", {}, {}) == std::numbers::pi);
  CHECK(ev("k*u", {"u"}, {3.0}, {{"k", 2.0}}) == 6.0);
}

TEST_CASE("elementary functions") {
  CHECK(ev("cosh(1)", {}, {}) == doctest::Approx(1.5430806348152437).epsilon(1e-15));
  CHECK(ev("sinh(0)+exp(0)+log(1)", {}, {}) == 1.0);
  CHECK(ev("sqrt(2*(u^2+v^2))", {"u", "v"}, {1, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ev("tan(pi/4)", {}, {}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev("sin(u)^2+cos(u)^2", {"u"}, {0.7}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse("u+", {"u"}), ParseError);
  CHECK_THROWS_AS(parse("(u", {"u"}), ParseError);
  CHECK_THROWS_AS(parse("u)", {"u"}), ParseError);
  CHECK_THROWS_AS(parse("q*u", {"u"}), ParseError);
  CHECK_THROWS_AS(parse("foo(u)", {"u"}), ParseError);
  CHECK_THROWS_AS(parse("", {}), ParseError);
  CHECK_THROWS_AS(parse("u $ v", {"u", "v"}), ParseError);
  try {
    parse("u + * v", {"u", "v"});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("function arity is checked") {
  CHECK_THROWS_AS(parse("sin(u, v)", {"u", "v"}), ParseError);
  CHECK_THROWS_AS(parse("sin()", {}), ParseError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(ev("sqrt(u)", {"u"}, {-1.0}), DomainError);
  CHECK_THROWS_AS(ev("log(u)", {"u"}, {0.0}), DomainError);
  CHECK_THROWS_AS(ev("u^0.5", {"u"}, {-2.0}), DomainError);
  CHECK(ev("u^2", {"u"}, {-2.0}) == 4.0);
}

TEST_CASE("gradients") {
  const Expr e = parse("u^2+sinh(w)", {"u", "w"});
  const Eigen::VectorXd g = gradient(e, Point{{"u", 1.0}, {"w", 0.0}});
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Expr lf = parse("log(2*(u^2+v^2))/2", {"u", "v"});
  const Eigen::VectorXd gl = gradient(lf, Point{{"u", 1.0}, {"v", 1.0}});
  CHECK(gl[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gl[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hessians") {
  const Eigen::MatrixXd h = hessian(parse("cos(w^2)", {"w"}), Point{{"w", 1.0}});
  CHECK(h(0, 0) == doctest::Approx(-2 * std::sin(1.0) - 4 * std::cos(1.0)).epsilon(1e-14));
  CHECK(h(0, 0) == doctest::Approx(-3.8441511930883519).epsilon(1e-14));

  const Eigen::MatrixXd hp = hessian(parse("u*v", {"u", "v"}), Point{{"u", 0.3}, {"v", -2.0}});
  CHECK(hp(0, 0) == 0.0);
  CHECK(hp(0, 1) == 1.0);
  CHECK(hp(1, 0) == 1.0);
  CHECK(hp(1, 1) == 0.0);
}

TEST_CASE("point lookup is by name") {
  const Expr e = parse("u-v", {"u", "v"});
  CHECK(eval(e, Point{{"v", 1.0}, {"extra", 9.0}, {"u", 4.0}}) == 3.0);
  CHECK_THROWS_AS(eval(e, Point{{"u", 1.0}}), Error);
}

TEST_CASE("printing round-trips") {
  const std::vector<std::string> params{"u", "v", "w"};
  for (const char* src : {"u+v*w", "-u^2", "2^3^2", "sin(u)*cos(v-w)/sqrt(1+u^2)", "k*(u-v)", "-(u+v)",
                          "exp(-w)+log(2+u^2)", "u/v/w"}) {
    const Expr a = parse(src, params, {{"k", 2.0}});
    const Expr b = parse(to_string(a), params, {{"k", 2.0}});
    CHECK(structurally_equal(a, b));
    const std::vector<double> x{0.4, 1.3, -0.6};
    CHECK(eval(a, std::span<const double>(x)) == eval(b, std::span<const double>(x)));
  }
  CHECK_FALSE(structurally_equal(parse("u+v", params), parse("v+u", params)));
}

TEST_CASE("evaluation is pure") {
  const Expr e = parse("sin(u)*v", {"u", "v"});
  const std::string before = to_string(e);
  const std::vector<double> x{0.3, 2.0};
  const double first = eval(e, std::span<const double>(x));
  gradient(e, std::span<const double>(x));
  hessian(e, std::span<const double>(x));
  CHECK(eval(e, std::span<const double>(x)) == first);
  CHECK(to_string(e) == before);
}

TEST_CASE("dependency query") {
  const Expr e = parse("u*cos(w)", {"u", "v", "w"});
  CHECK(depends_on(e, 0));
  CHECK_FALSE(depends_on(e, 1));
  CHECK(depends_on(e, 2));
}

TEST_CASE("dual derivatives agree with central differences on every built-in expression") {
  const fd::Worst w = fd::compare_all(fd::builtin_cases());
  INFO("worst gradient case " << w.gradient_case << ", worst hessian case " << w.hessian_case);
  CHECK(w.gradient < 1e-6);
  CHECK(w.hessian < 1e-6);
}
