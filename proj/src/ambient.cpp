#include "skewgeo/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

std::vector<std::string> standard_coords(int m, const std::string& last) {
  std::vector<std::string> c;
  for (int i = 1; i <= m; ++i) c.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m; ++i) c.push_back("y" + std::to_string(i));
  c.push_back(last);
  return c;
}

std::vector<std::vector<std::string>> zeros(int n) {
  return std::vector<std::vector<std::string>>(n, std::vector<std::string>(n, "0"));
}

Eigen::MatrixXd eval_square(const std::vector<Expr>& entries, int n, const Eigen::VectorXd& x) {
  Eigen::MatrixXd out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = eval(entries[a * n + b], as_span(x));
  return out;
}

Eigen::VectorXd eval_vector(const std::vector<Expr>& entries, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(entries.size());
  for (std::size_t a = 0; a < entries.size(); ++a)
    out[static_cast<Eigen::Index>(a)] = eval(entries[a], as_span(x));
  return out;
}

std::vector<Eigen::MatrixXd> square_derivatives(const std::vector<Expr>& entries, int n,
                                                const Eigen::VectorXd& x) {
  std::vector<Eigen::MatrixXd> d(n, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Expr& e = entries[a * n + b];
      if (e.root().parameter_free) continue;
      Eigen::VectorXd g = gradient(e, as_span(x));
      for (int c = 0; c < n; ++c) d[c](a, b) = g[c];
    }
  }
  return d;
}

Eigen::MatrixXd vector_jacobian(const std::vector<Expr>& entries, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, x.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    const Expr& e = entries[static_cast<std::size_t>(a)];
    if (e.root().parameter_free) continue;
    j.row(a) = gradient(e, as_span(x)).transpose();
  }
  return j;
}

double g_norm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(g * v)));
}

Eigen::MatrixXd directional(const std::vector<Eigen::MatrixXd>& d, const Eigen::VectorXd& v) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.front().rows(), d.front().cols());
  for (std::size_t c = 0; c < d.size(); ++c) out += v[static_cast<Eigen::Index>(c)] * d[c];
  return out;
}

}  // namespace

AmbientModel build_ambient(const std::string& name, const AmbientSource& src,
                           const ConstantMap& constants) {
  if (src.m < 1) throw SchemaError("ambient.m", "must be >= 1");
  const int n = 2 * src.m + 1;
  auto check_len = [&](std::size_t len, const std::string& field) {
    if (static_cast<int>(len) != n)
      throw SchemaError("ambient." + field, "expected " + std::to_string(n) + " entries");
  };
  check_len(src.coords.size(), "coords");
  check_len(src.metric.size(), "metric");
  check_len(src.phi.size(), "phi");
  check_len(src.xi.size(), "xi");
  check_len(src.eta.size(), "eta");

  AmbientModel model;
  model.name = name;
  model.m = src.m;
  model.coords = src.coords;
  for (int a = 0; a < n; ++a) {
    check_len(src.metric[a].size(), "metric[" + std::to_string(a) + "]");
    check_len(src.phi[a].size(), "phi[" + std::to_string(a) + "]");
    for (int b = 0; b < n; ++b) {
      model.metric.push_back(parse(src.metric[a][b], model.coords, constants));
      model.phi.push_back(parse(src.phi[a][b], model.coords, constants));
    }
  }
  for (int a = 0; a < n; ++a) {
    model.xi.push_back(parse(src.xi[a], model.coords, constants));
    model.eta.push_back(parse(src.eta[a], model.coords, constants));
  }
  return model;
}

AmbientSource source_of(const AmbientModel& model) {
  const int n = model.dim();
  AmbientSource src;
  src.m = model.m;
  src.coords = model.coords;
  src.metric = zeros(n);
  src.phi = zeros(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      src.metric[a][b] = to_string(model.metric[a * n + b]);
      src.phi[a][b] = to_string(model.phi[a * n + b]);
    }
    src.xi.push_back(to_string(model.xi[a]));
    src.eta.push_back(to_string(model.eta[a]));
  }
  return src;
}

AmbientModel flat_model(int m) {
  if (m < 1) throw SchemaError("ambient.m", "must be >= 1");
  const int n = 2 * m + 1;
  AmbientSource src;
  src.m = m;
  src.coords = standard_coords(m, "t");
  src.metric = zeros(n);
  src.phi = zeros(n);
  for (int a = 0; a < n; ++a) src.metric[a][a] = "1";
  for (int i = 0; i < m; ++i) {
    src.phi[m + i][i] = "-1";  // phi(dx_i) = -dy_i
    src.phi[i][m + i] = "1";   // phi(dy_i) = dx_i
  }
  src.xi.assign(n, "0");
  src.eta.assign(n, "0");
  src.xi[n - 1] = "1";
  src.eta[n - 1] = "1";
  return build_ambient("flat(" + std::to_string(m) + ")", src);
}

AmbientModel sasakian_model(int m) {
  if (m < 1) throw SchemaError("ambient.m", "must be >= 1");
  const int n = 2 * m + 1;
  const int z = n - 1;
  AmbientSource src;
  src.m = m;
  src.coords = standard_coords(m, "z");
  src.metric = zeros(n);
  src.phi = zeros(n);
  auto y = [&](int i) { return src.coords[m + i]; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      std::string prod = y(i) + "*" + y(j) + "/4";
      src.metric[i][j] = i == j ? "1/4+" + prod : prod;
    }
    src.metric[m + i][m + i] = "1/4";
    src.metric[i][z] = "-" + y(i) + "/4";
    src.metric[z][i] = "-" + y(i) + "/4";
    src.phi[m + i][i] = "-1";   // phi(dx_i) = -dy_i
    src.phi[i][m + i] = "1";    // phi(dy_i) = dx_i + y_i dz
    src.phi[z][m + i] = y(i);
  }
  src.metric[z][z] = "1/4";
  src.xi.assign(n, "0");
  src.eta.assign(n, "0");
  src.xi[z] = "2";
  for (int i = 0; i < m; ++i) src.eta[i] = "-" + y(i) + "/2";
  src.eta[z] = "1/2";
  return build_ambient("sasakian(" + std::to_string(m) + ")", src);
}

Eigen::MatrixXd metric_at(const AmbientModel& model, const Eigen::VectorXd& x) {
  return eval_square(model.metric, model.dim(), x);
}
Eigen::MatrixXd phi_at(const AmbientModel& model, const Eigen::VectorXd& x) {
  return eval_square(model.phi, model.dim(), x);
}
Eigen::VectorXd xi_at(const AmbientModel& model, const Eigen::VectorXd& x) {
  return eval_vector(model.xi, x);
}
Eigen::VectorXd eta_at(const AmbientModel& model, const Eigen::VectorXd& x) {
  return eval_vector(model.eta, x);
}

std::vector<Eigen::MatrixXd> metric_derivatives(const AmbientModel& model, const Eigen::VectorXd& x) {
  return square_derivatives(model.metric, model.dim(), x);
}
std::vector<Eigen::MatrixXd> phi_derivatives(const AmbientModel& model, const Eigen::VectorXd& x) {
  return square_derivatives(model.phi, model.dim(), x);
}
Eigen::MatrixXd xi_jacobian(const AmbientModel& model, const Eigen::VectorXd& x) {
  return vector_jacobian(model.xi, x);
}
Eigen::MatrixXd eta_jacobian(const AmbientModel& model, const Eigen::VectorXd& x) {
  return vector_jacobian(model.eta, x);
}

Eigen::VectorXd Christoffel::contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(dim());
  for (int c = 0; c < dim(); ++c) out[c] = x.dot(gamma_[c] * y);
  return out;
}

Christoffel christoffel(const AmbientModel& model, const Eigen::VectorXd& x) {
  const int n = model.dim();
  Eigen::MatrixXd g = metric_at(model, x);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw DegenerateError("ambient metric is not positive definite");
  Eigen::MatrixXd ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  auto dg = metric_derivatives(model, x);
  // Gamma_{D,AB} = (d_A g_BD + d_B g_AD - d_D g_AB) / 2
  std::vector<Eigen::MatrixXd> lower(n, Eigen::MatrixXd::Zero(n, n));
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) lower[d](a, b) = 0.5 * (dg[a](b, d) + dg[b](a, d) - dg[d](a, b));
  std::vector<Eigen::MatrixXd> upper(n, Eigen::MatrixXd::Zero(n, n));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      if (ginv(c, d) != 0.0) upper[c] += ginv(c, d) * lower[d];
  return Christoffel(std::move(upper));
}

Eigen::VectorXd covariant_derivative(const Christoffel& gamma, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Y, const Eigen::MatrixXd& dY) {
  return dY * X + gamma.contract(X, Y);
}

Eigen::VectorXd covariant_derivative(const AmbientModel& model, const VectorField& X,
                                     const VectorField& Y, const Eigen::VectorXd& x) {
  if (static_cast<int>(X.size()) != model.dim() || static_cast<int>(Y.size()) != model.dim())
    throw Error("vector field has wrong number of components");
  return covariant_derivative(christoffel(model, x), eval_vector(X, x), eval_vector(Y, x),
                              vector_jacobian(Y, x));
}

std::vector<DirectionPair> structure_directions(int dim, int random_pairs, unsigned long seed) {
  std::vector<DirectionPair> out;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      out.emplace_back(Eigen::VectorXd::Unit(dim, a), Eigen::VectorXd::Unit(dim, b));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < random_pairs; ++k) {
    Eigen::VectorXd x(dim), y(dim);
    for (int a = 0; a < dim; ++a) x[a] = normal(rng);
    for (int a = 0; a < dim; ++a) y[a] = normal(rng);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

std::vector<Eigen::VectorXd> random_chart_points(int dim, int count, unsigned long seed, double lo,
                                                 double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(dim);
    for (int a = 0; a < dim; ++a) p[a] = uni(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

StructureResiduals check_structure(const AmbientModel& model,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const std::vector<DirectionPair>& directions) {
  const int n = model.dim();
  StructureResiduals r;
  for (const auto& x : points) {
    const Eigen::MatrixXd g = metric_at(model, x);
    const Eigen::MatrixXd phi = phi_at(model, x);
    const Eigen::VectorXd xi = xi_at(model, x);
    const Eigen::VectorXd eta = eta_at(model, x);
    const auto dphi = phi_derivatives(model, x);
    const Eigen::MatrixXd deta = eta_jacobian(model, x);
    const Eigen::MatrixXd dxi = xi_jacobian(model, x);
    const Christoffel gamma = christoffel(model, x);

    Eigen::MatrixXd ac = phi * phi + Eigen::MatrixXd::Identity(n, n) - xi * eta.transpose();
    r.almost_contact = std::max({r.almost_contact, ac.cwiseAbs().maxCoeff(),
                                 std::abs(eta.dot(xi) - 1.0), (phi * xi).cwiseAbs().maxCoeff(),
                                 (eta.transpose() * phi).cwiseAbs().maxCoeff()});
    r.compatibility = std::max(r.compatibility, (eta - g * xi).cwiseAbs().maxCoeff());

    for (const auto& [x0, y0] : directions) {
      const double nx = g_norm(g, x0), ny = g_norm(g, y0);
      if (nx == 0.0 || ny == 0.0) continue;
      const Eigen::VectorXd X = x0 / nx, Y = y0 / ny;
      const Eigen::VectorXd pX = phi * X, pY = phi * Y;
      const double gxy = X.dot(g * Y);
      const double ex = eta.dot(X), ey = eta.dot(Y);

      r.compatibility = std::max(r.compatibility, std::abs(pX.dot(g * pY) - gxy + ex * ey));

      const double d_eta = 0.5 * (Y.dot(deta * X) - X.dot(deta * Y));
      r.contact_metric = std::max(r.contact_metric, std::abs(X.dot(g * pY) - d_eta));

      const Eigen::MatrixXd dphi_x = directional(dphi, X);
      const Eigen::MatrixXd dphi_y = directional(dphi, Y);
      Eigen::VectorXd nij = directional(dphi, pX) * Y - directional(dphi, pY) * X +
                            phi * (dphi_y * X) - phi * (dphi_x * Y) + 2.0 * d_eta * xi;
      r.normality = std::max(r.normality, g_norm(g, nij));

      Eigen::VectorXd nabla_phi = dphi_x * Y + gamma.contract(X, pY) - phi * gamma.contract(X, Y);
      r.sasakian = std::max(r.sasakian, g_norm(g, nabla_phi - gxy * xi + ey * X));

      Eigen::VectorXd nabla_xi = covariant_derivative(gamma, X, xi, dxi);
      r.xi_derivative = std::max(r.xi_derivative, g_norm(g, nabla_xi + pX));
    }
  }
  return r;
}

}  // namespace skewgeo
