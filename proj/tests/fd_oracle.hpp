#pragma once

// Central finite differences, used as an independent check on the dual-number derivatives.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skewgeo/ambient.hpp"
#include "skewgeo/expr.hpp"
#include "skewgeo/immersion.hpp"
#include "skewgeo/scenario.hpp"

namespace fd {

inline double f_at(const skewgeo::Expr& e, const Eigen::VectorXd& x) { return skewgeo::eval(e, skewgeo::as_span(x)); }

inline Eigen::VectorXd gradient(const skewgeo::Expr& e, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f_at(e, xp) - f_at(e, xm)) / (2 * h);
  }
  return g;
}

inline Eigen::MatrixXd hessian(const skewgeo::Expr& e, const Eigen::VectorXd& x, double h = 1e-4) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  const double f0 = f_at(e, x);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    H(i, i) = (f_at(e, xp) - 2 * f0 + f_at(e, xm)) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = H(j, i) = (f_at(e, pp) - f_at(e, pm) - f_at(e, mp) + f_at(e, mm)) / (4 * h * h);
    }
  }
  return H;
}

/// max over entries of |a - b| / (1 + |a|), a the exact value.
inline double relative_error(const Eigen::MatrixXd& exact, const Eigen::MatrixXd& approx) {
  return ((exact - approx).array().abs() / (1.0 + exact.array().abs())).maxCoeff();
}

struct Case {
  std::string label;
  skewgeo::Expr expr;
  std::vector<Eigen::VectorXd> points;
};

/// Every expression the built-in scenarios define, each paired with 100 seeded points of its own domain.
inline std::vector<Case> builtin_cases(int count = 100, unsigned long seed = 42) {
  std::vector<Case> cases;
  for (const auto& name : skewgeo::builtin_names()) {
    const skewgeo::BuiltScenario b = skewgeo::build(skewgeo::builtin(name));
    const auto params = skewgeo::sample_points(b.immersion, count, seed);
    for (std::size_t i = 0; i < b.immersion.components.size(); ++i)
      cases.push_back({name + ".component" + std::to_string(i), b.immersion.components[i], params});
    if (b.product && b.product->warping) cases.push_back({name + ".warping", *b.product->warping, params});

    const skewgeo::AmbientModel& am = *b.ambient;
    const auto chart = skewgeo::random_chart_points(am.dim(), count, seed);
    auto add = [&](const std::string& tag, const std::vector<skewgeo::Expr>& list) {
      for (std::size_t i = 0; i < list.size(); ++i)
        cases.push_back({name + ".ambient." + tag + std::to_string(i), list[i], chart});
    };
    add("g", am.metric);
    add("phi", am.phi);
    add("xi", am.xi);
    add("eta", am.eta);
  }
  return cases;
}

struct Worst {
  double gradient = 0.0;
  double hessian = 0.0;
  std::string gradient_case, hessian_case;
};

inline Worst compare_all(const std::vector<Case>& cases) {
  Worst w;
  for (const auto& c : cases) {
    for (const auto& x : c.points) {
      const double eg = relative_error(skewgeo::gradient(c.expr, skewgeo::as_span(x)), gradient(c.expr, x));
      const double eh = relative_error(skewgeo::hessian(c.expr, skewgeo::as_span(x)), hessian(c.expr, x));
      if (eg > w.gradient) { w.gradient = eg; w.gradient_case = c.label; }
      if (eh > w.hessian) { w.hessian = eh; w.hessian_case = c.label; }
    }
  }
  return w;
}

}  // namespace fd
