#include "skewgeo/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "skewgeo/errors.hpp"
#include "skewgeo/gram_schmidt.hpp"

namespace skewgeo {

namespace {

std::string describe(const Eigen::VectorXd& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::vector<Eigen::MatrixXd> component_hessians(const Immersion& imm, const Eigen::VectorXd& p) {
  std::vector<Eigen::MatrixXd> h;
  h.reserve(imm.components.size());
  for (const auto& c : imm.components) {
    if (c.root().parameter_free)
      h.push_back(Eigen::MatrixXd::Zero(imm.dim(), imm.dim()));
    else
      h.push_back(hessian(c, as_span(p)));
  }
  return h;
}

/// Second partials of psi as ambient vectors: out[a*n+b]^C = d_a d_b psi^C.
std::vector<Eigen::VectorXd> second_partials(const std::vector<Eigen::MatrixXd>& h, int n) {
  const auto N = static_cast<Eigen::Index>(h.size());
  std::vector<Eigen::VectorXd> out(n * n, Eigen::VectorXd::Zero(N));
  for (Eigen::Index c = 0; c < N; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out[a * n + b][c] = h[c](a, b);
  return out;
}

}  // namespace

double GeometrySample::norm(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, inner(u, u)));
}

Eigen::VectorXd GeometrySample::sigma_of(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  for (int a = 0; a < n(); ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < n(); ++b)
      if (v[b] != 0.0) out += u[a] * v[b] * sigma_at(a, b);
  }
  return out;
}

Eigen::VectorXd position(const Immersion& imm, const Eigen::VectorXd& p) {
  Eigen::VectorXd x(imm.ambient_dim());
  for (int c = 0; c < imm.ambient_dim(); ++c) x[c] = eval(imm.components[c], as_span(p));
  return x;
}

Eigen::MatrixXd jacobian(const Immersion& imm, const Eigen::VectorXd& p, double rank_tol) {
  const int N = imm.ambient_dim(), n = imm.dim();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, n);
  for (int c = 0; c < N; ++c) {
    if (imm.components[c].root().parameter_free) continue;
    J.row(c) = gradient(imm.components[c], as_span(p)).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  if (n > 0 && !(sv[n - 1] > rank_tol * std::max(1.0, sv[0])))
    throw DegenerateError("pushforward is rank deficient at " + describe(p));
  return J;
}

Eigen::MatrixXd induced_metric(const Immersion& imm, const Eigen::VectorXd& p) {
  Eigen::MatrixXd J = jacobian(imm, p);
  Eigen::MatrixXd g = metric_at(*imm.ambient, position(imm, p));
  return J.transpose() * g * J;
}

std::vector<Eigen::MatrixXd> induced_metric_derivatives(const Immersion& imm, const Eigen::VectorXd& p) {
  const int n = imm.dim();
  const Eigen::VectorXd x = position(imm, p);
  const Eigen::MatrixXd J = jacobian(imm, p);
  const Eigen::MatrixXd g = metric_at(*imm.ambient, x);
  const auto dg = metric_derivatives(*imm.ambient, x);
  const auto second = second_partials(component_hessians(imm, p), n);
  std::vector<Eigen::MatrixXd> out(n, Eigen::MatrixXd::Zero(n, n));
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd dg_c = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    for (int d = 0; d < imm.ambient_dim(); ++d)
      if (J(d, c) != 0.0) dg_c += J(d, c) * dg[d];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out[c](a, b) = second[c * n + a].dot(g * J.col(b)) + J.col(a).dot(g * second[c * n + b]) +
                       J.col(a).dot(dg_c * J.col(b));
  }
  return out;
}

Frames orthonormal_frames(const Immersion& imm, const Eigen::VectorXd& p, std::span<const int> ordering,
                          const Tolerances& tol) {
  const int n = imm.dim();
  const Eigen::MatrixXd J = jacobian(imm, p, tol.rank);
  const Eigen::MatrixXd g = metric_at(*imm.ambient, position(imm, p));
  std::vector<int> order(n);
  if (ordering.empty()) {
    std::iota(order.begin(), order.end(), 0);
  } else {
    if (static_cast<int>(ordering.size()) != n) throw Error("ordering must list every parameter");
    order.assign(ordering.begin(), ordering.end());
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
      if (sorted[i] != i) throw Error("ordering is not a permutation");
  }
  Eigen::MatrixXd cols(J.rows(), n);
  for (int i = 0; i < n; ++i) cols.col(i) = J.col(order[i]);

  Frames f;
  f.tangent = modified_gram_schmidt(cols, g, tol.rank, tol.reorthogonalize);
  f.normal = complete_basis(f.tangent, g);
  // tangent = J * coeffs; solve the normal equations in the induced metric.
  const Eigen::MatrixXd gi = J.transpose() * g * J;
  f.coeffs = gi.ldlt().solve(J.transpose() * g * f.tangent);
  return f;
}

GeometrySample second_fundamental_form(const Immersion& imm, const Eigen::VectorXd& p,
                                       std::span<const int> ordering, const Tolerances& tol) {
  const int n = imm.dim();
  const AmbientModel& amb = *imm.ambient;
  GeometrySample s;
  s.p = p;
  s.x = position(imm, p);
  s.J = jacobian(imm, p, tol.rank);
  s.g = metric_at(amb, s.x);
  s.g_ind = s.J.transpose() * s.g * s.J;
  Frames f = orthonormal_frames(imm, p, ordering, tol);
  s.tangent = std::move(f.tangent);
  s.normal = std::move(f.normal);
  s.coeffs = std::move(f.coeffs);
  s.phi = phi_at(amb, s.x);
  s.xi = xi_at(amb, s.x);
  s.eta = eta_at(amb, s.x);

  const Christoffel gamma = christoffel(amb, s.x);
  s.accel_coord = second_partials(component_hessians(imm, p), n);
  s.sigma_coord.resize(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXd& acc = s.accel_coord[a * n + b];
      acc += gamma.contract(s.J.col(a), s.J.col(b));
      s.sigma_coord[a * n + b] = s.normal_part(acc);
    }
  }
  // sigma(e_a, e_b) = sum_ij C_ia C_jb sigma(d_i, d_j)
  s.sigma.assign(n * n, Eigen::VectorXd::Zero(s.dim()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double w = s.coeffs(i, a) * s.coeffs(j, b);
          if (w != 0.0) s.sigma[a * n + b] += w * s.sigma_coord[i * n + j];
        }
  return s;
}

Eigen::MatrixXd shape_operator(const GeometrySample& s, const Eigen::VectorXd& N, double tol) {
  const Eigen::VectorXd tangential = s.tangent * s.tangent_coords(N);
  if (s.norm(tangential) > tol * std::max(1.0, s.norm(N)))
    throw Error("shape_operator: vector is not normal to the submanifold");
  const int n = s.n();
  Eigen::MatrixXd A(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(a, b) = s.inner(s.sigma_at(a, b), N);
  return A;
}

SffNorm2 sff_norm2(const GeometrySample& s) {
  SffNorm2 out;
  for (const auto& v : s.sigma) out.frame_contraction += s.inner(v, v);
  for (Eigen::Index r = 0; r < s.normal.cols(); ++r)
    for (const auto& v : s.sigma) {
      const double c = s.inner(v, s.normal.col(r));
      out.component_sum += c * c;
    }
  return out;
}

Eigen::VectorXd mean_curvature(const GeometrySample& s) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(s.dim());
  for (int a = 0; a < s.n(); ++a) h += s.sigma_at(a, a);
  return h / s.n();
}

double umbilicity_residual(const GeometrySample& s) {
  const Eigen::VectorXd h = mean_curvature(s);
  double worst = 0.0;
  for (int a = 0; a < s.n(); ++a)
    for (int b = 0; b < s.n(); ++b)
      worst = std::max(worst, s.norm(s.sigma_at(a, b) - (a == b ? h : Eigen::VectorXd::Zero(s.dim()))));
  return worst;
}

SampleDiagnostics diagnose(const GeometrySample& s) {
  SampleDiagnostics d;
  Eigen::MatrixXd full(s.dim(), s.dim());
  full << s.tangent, s.normal;
  d.frame_gram = gram_defect(full, s.g);
  const int n = s.n();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      d.sigma_symmetry = std::max(d.sigma_symmetry, s.norm(s.sigma_at(a, b) - s.sigma_at(b, a)));
      d.sigma_normality =
          std::max(d.sigma_normality, s.tangent_coords(s.sigma_at(a, b)).cwiseAbs().maxCoeff());
      const Eigen::VectorXd& acc = s.accel_coord[a * n + b];
      const Eigen::VectorXd tang = s.tangent * s.tangent_coords(acc);
      const double scale = std::max(1.0, s.norm(acc));
      d.gauss_split = std::max(d.gauss_split, s.norm(tang + s.sigma_coord[a * n + b] - acc) / scale);
    }
  }
  return d;
}

std::vector<Eigen::VectorXd> sample_points(const Immersion& imm, int count, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(imm.dim());
    for (int a = 0; a < imm.dim(); ++a) {
      std::uniform_real_distribution<double> uni(imm.domain[a].lo, imm.domain[a].hi);
      p[a] = uni(rng);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

Eigen::VectorXd domain_center(const Immersion& imm) {
  Eigen::VectorXd c(imm.dim());
  for (int a = 0; a < imm.dim(); ++a) c[a] = 0.5 * (imm.domain[a].lo + imm.domain[a].hi);
  return c;
}

}  // namespace skewgeo
