#include <cmath>
#include <numeric>

#include <doctest.h>

#include "skewgeo/errors.hpp"
#include "skewgeo/immersion.hpp"
#include "skewgeo/scenario.hpp"

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

BuiltScenario sphere() {
  Scenario s;
  s.name = "sphere";
  s.ambient.builtin = "flat";
  s.ambient.m = 1;
  s.params = {"a", "b"};
  s.components = {"2*sin(a)*cos(b)", "2*sin(a)*sin(b)", "2*cos(a)"};
  s.domain = {{"0.3", "2.8"}, {"-pi", "pi"}};
  return build(s);
}

}  // namespace

TEST_CASE("ex62 induced metric entries") {
  for (double k : {0.5, 1.0, 2.0}) {
    const BuiltScenario b = named("ex62", {"k=" + std::to_string(k)});
    CHECK(b.immersion.dim() == 7);
    CHECK(b.immersion.ambient_dim() == 13);
    for (const auto& p : sample_points(b.immersion, 20, 4)) {
      const Eigen::MatrixXd G = induced_metric(b.immersion, p);
      const double u = p[0], v = p[1];
      Eigen::MatrixXd want = Eigen::MatrixXd::Zero(7, 7);
      want(0, 0) = want(1, 1) = 2 * (1 + k * k);
      want(2, 2) = want(3, 3) = 2 * (u * u + v * v);
      want(4, 4) = want(5, 5) = 2;
      want(6, 6) = 1;
      CHECK((G - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("ex32 slant direction has length two") {
  const BuiltScenario b = named("ex32");
  for (const auto& p : sample_points(b.immersion, 10, 2)) CHECK(induced_metric(b.immersion, p)(3, 3) == doctest::Approx(2.0));
}

TEST_CASE("induced metric derivatives match central differences") {
  const BuiltScenario b = named("ex62");
  const Eigen::VectorXd p = vec({0.8, 1.2, 0.4, -0.3, 0.1, 0.2, -0.5});
  const auto d = induced_metric_derivatives(b.immersion, p);
  for (int c = 0; c < 7; ++c) {
    Eigen::VectorXd pp = p, pm = p;
    pp[c] += 1e-5;
    pm[c] -= 1e-5;
    const Eigen::MatrixXd num = (induced_metric(b.immersion, pp) - induced_metric(b.immersion, pm)) / 2e-5;
    CHECK((d[c] - num).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("rank deficiency raises") {
  const BuiltScenario b = named("ex61");
  Eigen::VectorXd p = domain_center(b.immersion);
  p[4] = 0.0;
  CHECK_THROWS_AS(jacobian(b.immersion, p), DegenerateError);
  CHECK_THROWS_AS(second_fundamental_form(b.immersion, p), DegenerateError);
}

TEST_CASE("frames are orthonormal and span the tangent space") {
  for (const char* name : {"ex31", "ex62", "sasakian5-invariant-submanifold"}) {
    const BuiltScenario b = named(name);
    for (const auto& p : sample_points(b.immersion, 10, 8)) {
      const GeometrySample s = second_fundamental_form(b.immersion, p);
      Eigen::MatrixXd full(s.dim(), s.dim());
      full << s.tangent, s.normal;
      CHECK((full.transpose() * s.g * full - Eigen::MatrixXd::Identity(s.dim(), s.dim())).norm() < 1e-10);
      CHECK((s.J * s.coeffs - s.tangent).norm() < 1e-12);
      const SampleDiagnostics d = diagnose(s);
      CHECK(d.sigma_symmetry < 1e-9);
      CHECK(d.sigma_normality < 1e-9);
      CHECK(d.gauss_split < 1e-9);
    }
  }
}

TEST_CASE("unit circle has unit curvature") {
  const BuiltScenario b = named("unit-circle");
  for (const auto& p : sample_points(b.immersion, 10, 1)) {
    const GeometrySample s = second_fundamental_form(b.immersion, p);
    const Eigen::MatrixXd A = shape_operator(s, -s.x);
    CHECK(A(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sff_norm2(s).frame_contraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.norm(mean_curvature(s)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("shape operator rejects tangential vectors") {
  const BuiltScenario b = named("unit-circle");
  const GeometrySample s = second_fundamental_form(b.immersion, vec({0.4}));
  CHECK_THROWS_AS(shape_operator(s, s.tangent.col(0)), Error);
}

TEST_CASE("round sphere is totally umbilical") {
  const BuiltScenario b = sphere();
  for (const auto& p : sample_points(b.immersion, 20, 6)) {
    const GeometrySample s = second_fundamental_form(b.immersion, p);
    CHECK(umbilicity_residual(s) < 1e-12);
    CHECK(s.norm(mean_curvature(s)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sff_norm2(s).frame_contraction == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("totally geodesic plane") {
  const BuiltScenario b = named("tg-plane");
  for (const auto& p : sample_points(b.immersion, 10, 3)) {
    const GeometrySample s = second_fundamental_form(b.immersion, p);
    CHECK(sff_norm2(s).frame_contraction < 1e-24);
  }
}

TEST_CASE("frame-independent quantities do not depend on the Gram-Schmidt ordering") {
  const BuiltScenario b = named("ex62");
  std::vector<int> order(7), reversed(7);
  std::iota(order.begin(), order.end(), 0);
  std::iota(reversed.rbegin(), reversed.rend(), 0);
  for (const auto& p : sample_points(b.immersion, 10, 12)) {
    const GeometrySample a = second_fundamental_form(b.immersion, p, order);
    const GeometrySample r = second_fundamental_form(b.immersion, p, reversed);
    const SffNorm2 na = sff_norm2(a), nr = sff_norm2(r);
    CHECK(na.frame_contraction == doctest::Approx(nr.frame_contraction).epsilon(1e-12));
    CHECK(na.component_sum == doctest::Approx(na.frame_contraction).epsilon(1e-12));
    CHECK((mean_curvature(a) - mean_curvature(r)).norm() < 1e-12);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        CHECK((a.sigma_coord[i * 7 + j] - r.sigma_coord[i * 7 + j]).norm() < 1e-12);
  }
}

TEST_CASE("sample points are seeded and inside the domain") {
  const BuiltScenario b = named("ex61");
  const auto pts = sample_points(b.immersion, 50, 42);
  const auto again = sample_points(b.immersion, 50, 42);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i] == again[i]);
    for (int a = 0; a < b.immersion.dim(); ++a) {
      CHECK(pts[i][a] >= b.immersion.domain[a].lo);
      CHECK(pts[i][a] <= b.immersion.domain[a].hi);
    }
  }
}
