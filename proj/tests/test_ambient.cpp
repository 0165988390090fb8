#include <cmath>

#include <doctest.h>

#include "skewgeo/ambient.hpp"

using namespace skewgeo;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

VectorField field(const AmbientModel& m, std::initializer_list<const char*> comps) {
  VectorField f;
  for (const char* c : comps) f.push_back(parse(c, m.coords));
  return f;
}

}  // namespace

TEST_CASE("flat model is flat") {
  const AmbientModel m = flat_model(3);
  CHECK(m.dim() == 7);
  for (const auto& x : random_chart_points(m.dim(), 10, 3)) {
    const Christoffel G = christoffel(m, x);
    for (int c = 0; c < m.dim(); ++c) CHECK(G.upper(c).norm() == 0.0);
  }
}

TEST_CASE("flat model: almost contact metric but not Sasakian") {
  for (int mm : {1, 2, 4}) {
    const AmbientModel m = flat_model(mm);
    const auto r = check_structure(m, random_chart_points(m.dim(), 20, 5), structure_directions(m.dim(), 4, 5));
    CHECK(r.almost_contact < 1e-12);
    CHECK(r.compatibility < 1e-12);
    CHECK(r.sasakian >= 0.9);
  }
}

TEST_CASE("Sasakian model satisfies every structure identity") {
  const AmbientModel m = sasakian_model(2);
  const auto r = check_structure(m, random_chart_points(m.dim(), 30, 11), structure_directions(m.dim(), 6, 11));
  CHECK(r.almost_contact < 1e-12);
  CHECK(r.compatibility < 1e-12);
  CHECK(r.contact_metric < 1e-12);
  CHECK(r.normality < 1e-12);
  CHECK(r.sasakian < 1e-12);
  CHECK(r.xi_derivative < 1e-12);
}

TEST_CASE("Sasakian Christoffel symbols against a symbolic computation") {
  // coordinates (x1, y1, z)
  const AmbientModel m = sasakian_model(1);
  const Christoffel G0 = christoffel(m, vec({0, 0, 0}));
  Eigen::MatrixXd want[3] = {Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)};
  want[0](1, 2) = want[0](2, 1) = -0.5;
  want[1](0, 2) = want[1](2, 0) = 0.5;
  want[2](0, 1) = want[2](1, 0) = -0.5;
  for (int c = 0; c < 3; ++c) CHECK((G0.upper(c) - want[c]).norm() < 1e-15);

  const Christoffel G = christoffel(m, vec({0.3, -0.7, 0.2}));
  for (auto& w : want) w.setZero();
  want[0](0, 1) = want[0](1, 0) = -0.35;
  want[0](1, 2) = want[0](2, 1) = -0.5;
  want[1](0, 0) = 0.7;
  want[1](0, 2) = want[1](2, 0) = 0.5;
  want[2](0, 1) = want[2](1, 0) = -0.255;
  want[2](1, 2) = want[2](2, 1) = 0.35;
  for (int c = 0; c < 3; ++c) CHECK((G.upper(c) - want[c]).norm() < 1e-14);
}

TEST_CASE("Christoffel symbols are symmetric and metric compatible") {
  const AmbientModel m = sasakian_model(2);
  const double h = 1e-5;
  for (const auto& x : random_chart_points(m.dim(), 10, 17)) {
    const Christoffel G = christoffel(m, x);
    const Eigen::MatrixXd g = metric_at(m, x);
    for (int c = 0; c < m.dim(); ++c) CHECK((G.upper(c) - G.upper(c).transpose()).norm() == 0.0);
    // d_C g_AB = g_AD G^D_CB + g_BD G^D_CA, derivative by central differences
    for (int c = 0; c < m.dim(); ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const Eigen::MatrixXd dg = (metric_at(m, xp) - metric_at(m, xm)) / (2 * h);
      Eigen::MatrixXd lowered(m.dim(), m.dim());
      for (int a = 0; a < m.dim(); ++a)
        for (int b = 0; b < m.dim(); ++b) {
          double s = 0.0;
          for (int d = 0; d < m.dim(); ++d) s += g(a, d) * G(d, c, b) + g(b, d) * G(d, c, a);
          lowered(a, b) = s;
        }
      CHECK((dg - lowered).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("exact metric derivatives match central differences") {
  const AmbientModel m = sasakian_model(2);
  const Eigen::VectorXd x = vec({0.1, -0.4, 0.8, 0.25, -0.3});
  const auto dg = metric_derivatives(m, x);
  for (int c = 0; c < m.dim(); ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += 1e-5;
    xm[c] -= 1e-5;
    CHECK((dg[c] - (metric_at(m, xp) - metric_at(m, xm)) / 2e-5).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("covariant derivative obeys the Leibniz rule") {
  const AmbientModel m = sasakian_model(1);
  const VectorField X = field(m, {"1+y1", "z", "x1*y1"});
  const VectorField Y = field(m, {"sin(x1)", "y1^2", "1"});
  const Expr f = parse("exp(x1)*cos(z)", m.coords);
  VectorField fY;
  for (const auto& c : Y) fY.push_back(parse("exp(x1)*cos(z)*(" + to_string(c) + ")", m.coords));
  for (const auto& x : random_chart_points(3, 10, 23)) {
    const std::span<const double> xs = as_span(x);
    Eigen::VectorXd Xv(3), Yv(3);
    for (int i = 0; i < 3; ++i) {
      Xv[i] = eval(X[i], xs);
      Yv[i] = eval(Y[i], xs);
    }
    const double Xf = gradient(f, xs).dot(Xv);
    const Eigen::VectorXd lhs = covariant_derivative(m, X, fY, x);
    const Eigen::VectorXd rhs = Xf * Yv + eval(f, xs) * covariant_derivative(m, X, Y, x);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("nabla xi = -phi on the Sasakian model") {
  const AmbientModel m = sasakian_model(2);
  for (const auto& x : random_chart_points(m.dim(), 10, 29)) {
    const Christoffel G = christoffel(m, x);
    const Eigen::MatrixXd dxi = xi_jacobian(m, x);
    const Eigen::VectorXd xi = xi_at(m, x);
    const Eigen::MatrixXd phi = phi_at(m, x);
    for (int a = 0; a < m.dim(); ++a) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(m.dim(), a);
      CHECK((covariant_derivative(G, e, xi, dxi) + phi * e).norm() < 1e-12);
    }
  }
}

TEST_CASE("phi squared picks up the eta xi term") {
  const AmbientModel m = sasakian_model(1);
  const Eigen::MatrixXd phi = phi_at(m, vec({0.0, 0.5, 0.0}));
  const Eigen::VectorXd r = phi * phi * Eigen::VectorXd::Unit(3, 0);
  CHECK((r - vec({-1.0, 0.0, -0.5})).norm() < 1e-15);
}

TEST_CASE("built tensors round-trip through their source form") {
  const AmbientModel m = sasakian_model(2);
  const AmbientModel r = build_ambient("copy", source_of(m));
  const Eigen::VectorXd x = vec({0.2, 0.4, -0.1, 0.9, 0.3});
  CHECK((metric_at(m, x) - metric_at(r, x)).norm() == 0.0);
  CHECK((phi_at(m, x) - phi_at(r, x)).norm() == 0.0);
  CHECK((xi_at(m, x) - xi_at(r, x)).norm() == 0.0);
  CHECK((eta_at(m, x) - eta_at(r, x)).norm() == 0.0);
}

TEST_CASE("structure directions start with the coordinate pairs and are seeded") {
  const auto d = structure_directions(3, 2, 9);
  CHECK(d.size() == 9 + 2);
  CHECK(d[1].first == Eigen::VectorXd::Unit(3, 0));
  CHECK(d[1].second == Eigen::VectorXd::Unit(3, 1));
  const auto again = structure_directions(3, 2, 9);
  CHECK(d.back().first == again.back().first);
}
