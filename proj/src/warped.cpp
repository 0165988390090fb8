#include "skewgeo/warped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd sub(const Eigen::MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

/// Block columns as a list of frame-coordinate vectors.
std::vector<Eigen::VectorXd> columns(const Eigen::MatrixXd& m) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
  return out;
}

double quadratic_raise(const Eigen::MatrixXd& G, const Eigen::VectorXd& d) {
  if (d.size() == 0) return 0.0;
  return d.dot(G.ldlt().solve(d));
}

/// Fiber block of the induced metric with the given point's fiber coordinates.
Eigen::MatrixXd fiber_block(const Immersion& imm, const ProductDeclaration& decl, const Eigen::VectorXd& p) {
  return sub(induced_metric(imm, p), decl.fiber, decl.fiber);
}

Eigen::VectorXd with_base_of(const Eigen::VectorXd& base_src, const Eigen::VectorXd& fiber_src,
                             const ProductDeclaration& decl) {
  Eigen::VectorXd out = fiber_src;
  for (int b : decl.base()) out[b] = base_src[b];
  return out;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Distance of the normal-frame vector v from the span of the orthonormal columns of basis.
double distance_from_span(const Eigen::VectorXd& v, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return v.norm();
  return (v - basis * (basis.transpose() * v)).norm();
}

LnFGradient raise(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                  const Eigen::VectorXd& p, const Eigen::MatrixXd& g_ind, const Eigen::MatrixXd& J,
                  const Eigen::MatrixXd& g, const Eigen::VectorXd& xi) {
  const int n = imm.dim();
  LnFGradient out;
  out.differential = Eigen::VectorXd::Zero(n);
  if (decl.warping) {
    const double f = eval(*decl.warping, as_span(p));
    if (!(f > 0.0)) throw DomainError(0, "warping function is not positive at the sample");
    out.differential = gradient(*decl.warping, as_span(p)) / f;
  } else if (ws.verdict == WarpVerdict::WarpedProduct) {
    // ln f = 1/2 ln tr G_F + const along the base
    const auto dG = induced_metric_derivatives(imm, p);
    double tr = 0.0;
    for (int a : decl.fiber) tr += g_ind(a, a);
    for (int c : decl.base()) {
      double dtr = 0.0;
      for (int a : decl.fiber) dtr += dG[c](a, a);
      out.differential[c] = 0.5 * dtr / tr;
    }
  }
  for (int c : decl.fiber) out.differential[c] = 0.0;

  const std::vector<int> base = decl.base();
  out.gradient = Eigen::VectorXd::Zero(n);
  if (!base.empty()) {
    const Eigen::VectorXd raised = sub(g_ind, base, base).ldlt().solve(gather(out.differential, base));
    for (std::size_t i = 0; i < base.size(); ++i) out.gradient[base[i]] = raised[i];
  }
  out.norm2_T = quadratic_raise(sub(g_ind, decl.base_T, decl.base_T), gather(out.differential, decl.base_T));
  out.norm2_theta =
      quadratic_raise(sub(g_ind, decl.base_theta, decl.base_theta), gather(out.differential, decl.base_theta));

  // parameter components of the tangential part of xi
  const Eigen::VectorXd xi_params = g_ind.ldlt().solve(J.transpose() * (g * xi));
  out.xi_ln_f = out.differential.dot(xi_params);
  return out;
}

}  // namespace

std::string to_string(XiLocation loc) {
  switch (loc) {
    case XiLocation::Invariant: return "M_T";
    case XiLocation::Slant: return "M_theta";
    case XiLocation::Fiber: return "M_perp";
  }
  return "?";
}

XiLocation parse_xi_location(const std::string& s) {
  if (s == "M_T" || s == "T" || s == "invariant") return XiLocation::Invariant;
  if (s == "M_theta" || s == "theta" || s == "slant") return XiLocation::Slant;
  if (s == "M_perp" || s == "perp" || s == "fiber") return XiLocation::Fiber;
  throw SchemaError("xi_location", "expected one of M_T, M_theta, M_perp, got '" + s + "'");
}

std::vector<int> ProductDeclaration::base() const {
  std::vector<int> b = base_T;
  b.insert(b.end(), base_theta.begin(), base_theta.end());
  return b;
}

ProductDeclaration declare_product(const Immersion& imm, const std::vector<std::string>& base_T,
                                   const std::vector<std::string>& base_theta,
                                   const std::vector<std::string>& fiber, XiLocation xi_location,
                                   const std::optional<std::string>& warping, const ConstantMap& constants) {
  ProductDeclaration d;
  d.xi_location = xi_location;
  std::vector<int> seen(imm.dim(), 0);
  auto resolve = [&](const std::vector<std::string>& names, std::vector<int>& out, const char* field) {
    for (const auto& nm : names) {
      const auto it = std::find(imm.params.begin(), imm.params.end(), nm);
      if (it == imm.params.end()) throw SchemaError(field, "unknown parameter '" + nm + "'");
      const int idx = static_cast<int>(it - imm.params.begin());
      if (seen[idx]++) throw SchemaError(field, "parameter '" + nm + "' listed twice");
      out.push_back(idx);
    }
  };
  resolve(base_T, d.base_T, "product.base_T");
  resolve(base_theta, d.base_theta, "product.base_theta");
  resolve(fiber, d.fiber, "product.fiber");
  for (int i = 0; i < imm.dim(); ++i)
    if (!seen[i]) throw SchemaError("product", "parameter '" + imm.params[i] + "' is not assigned to a factor");
  if (d.fiber.empty()) throw SchemaError("product.fiber", "fiber must be nonempty");

  if (warping) {
    d.warping = parse(*warping, imm.params, constants);
    for (int c : d.fiber)
      if (depends_on(*d.warping, c))
        throw SchemaError("product.warping", "depends on fiber parameter '" + imm.params[c] + "'");
  }
  return d;
}

BlockStructure check_block_structure(const Immersion& imm, const ProductDeclaration& decl,
                                     std::span<const Eigen::VectorXd> samples) {
  BlockStructure bs;
  std::vector<int> factor(imm.dim(), 0);
  for (int a : decl.base_theta) factor[a] = 1;
  for (int a : decl.fiber) factor[a] = 2;
  const std::vector<int> base = decl.base();
  for (const auto& p : samples) {
    const Eigen::MatrixXd g = induced_metric(imm, p);
    for (int a = 0; a < imm.dim(); ++a)
      for (int b = 0; b < imm.dim(); ++b)
        if (factor[a] != factor[b]) bs.offdiag = std::max(bs.offdiag, std::abs(g(a, b)));
    const auto dg = induced_metric_derivatives(imm, p);
    for (int c : decl.fiber)
      bs.base_dependence = std::max(bs.base_dependence, max_abs(sub(dg[c], base, base)));
  }
  return bs;
}

std::string to_string(WarpVerdict v) {
  switch (v) {
    case WarpVerdict::NotWarped: return "not a warped product";
    case WarpVerdict::RiemannianProduct: return "Riemannian product";
    case WarpVerdict::WarpedProduct: return "warped product";
  }
  return "?";
}

WarpedStructure extract_warping(const Immersion& imm, const ProductDeclaration& decl,
                                std::span<const Eigen::VectorXd> samples, const Tolerances& tol) {
  WarpedStructure ws;
  ws.block = check_block_structure(imm, decl, samples);
  ws.base_reference = domain_center(imm);
  ws.fiber_reference = gather(ws.base_reference, decl.fiber);
  if (decl.warping) {
    ws.f_reference = eval(*decl.warping, as_span(ws.base_reference));
    if (!(ws.f_reference > 0.0)) throw DomainError(0, "warping function is not positive at the gauge point");
  }

  ws.f_values.resize(static_cast<Eigen::Index>(samples.size()));
  double expr_err = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Eigen::VectorXd& p = samples[k];
    const Eigen::MatrixXd G = fiber_block(imm, decl, p);
    const Eigen::MatrixXd G_ref = fiber_block(imm, decl, with_base_of(ws.base_reference, p, decl));
    const double ratio = G.trace() / G_ref.trace();
    const double scale = std::max(max_abs(G_ref), std::numeric_limits<double>::min());
    ws.consistency = std::max(ws.consistency, max_abs(G - ratio * G_ref) / scale);
    // the ratio must not depend on where in the fiber it is measured
    const Eigen::VectorXd q0 = with_base_of(p, ws.base_reference, decl);
    const Eigen::MatrixXd G0 = fiber_block(imm, decl, q0);
    const Eigen::MatrixXd G0_ref = fiber_block(imm, decl, ws.base_reference);
    const double ratio0 = G0.trace() / G0_ref.trace();
    ws.consistency = std::max(ws.consistency, std::abs(ratio - ratio0) / std::max(1.0, std::abs(ratio0)));

    const double f = ws.f_reference * std::sqrt(ratio);
    ws.f_values[static_cast<Eigen::Index>(k)] = f;
    if (decl.warping) {
      const double fe = eval(*decl.warping, as_span(p));
      expr_err = std::max(expr_err, std::abs(f - fe) / fe);
    }
  }
  if (decl.warping) ws.expr_error = expr_err;
  if (ws.f_values.size() > 0) {
    const double mean = ws.f_values.mean();
    ws.f_spread = (ws.f_values.maxCoeff() - ws.f_values.minCoeff()) / mean;
  }

  if (ws.block.max() > tol.block || ws.consistency > tol.warp)
    ws.verdict = WarpVerdict::NotWarped;
  else if (ws.f_spread < tol.f_constant)
    ws.verdict = WarpVerdict::RiemannianProduct;
  else
    ws.verdict = WarpVerdict::WarpedProduct;
  return ws;
}

double LnFGradient::along(const GeometrySample& s, const Eigen::VectorXd& frame_coords) const {
  return differential.dot(s.coeffs * frame_coords);
}

LnFGradient grad_ln_f(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                      const Eigen::VectorXd& p) {
  const Eigen::VectorXd x = position(imm, p);
  const Eigen::MatrixXd J = jacobian(imm, p);
  const Eigen::MatrixXd g = metric_at(*imm.ambient, x);
  return raise(imm, decl, ws, p, J.transpose() * g * J, J, g, xi_at(*imm.ambient, x));
}

LnFGradient grad_ln_f(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                      const GeometrySample& s) {
  return raise(imm, decl, ws, s.p, s.g_ind, s.J, s.g, s.xi);
}

BishopResidual check_bishop(const GeometrySample& s, const LnFGradient& grad, int base_param, int fiber_param) {
  const int n = s.n();
  if (base_param < 0 || base_param >= n || fiber_param < 0 || fiber_param >= n)
    throw Error("check_bishop: parameter index out of range");
  const Eigen::VectorXd& acc = s.accel_coord[base_param * n + fiber_param];
  const Eigen::VectorXd tang = s.g_ind.ldlt().solve(s.J.transpose() * (s.g * acc));
  Eigen::VectorXd r = tang;
  r[fiber_param] -= grad.differential[base_param];
  BishopResidual out;
  out.residual = std::sqrt(std::max(0.0, r.dot(s.g_ind * r)));
  out.ordering = s.norm(acc - s.accel_coord[fiber_param * n + base_param]);
  return out;
}

BishopResidual check_bishop(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                            const Eigen::VectorXd& p, int base_param, int fiber_param) {
  const auto base = decl.base();
  if (std::find(base.begin(), base.end(), base_param) == base.end())
    throw Error("check_bishop: first index is not a base parameter");
  if (std::find(decl.fiber.begin(), decl.fiber.end(), fiber_param) == decl.fiber.end())
    throw Error("check_bishop: second index is not a fiber parameter");
  const GeometrySample s = second_fundamental_form(imm, p);
  return check_bishop(s, grad_ln_f(imm, decl, ws, s), base_param, fiber_param);
}

std::vector<NamedResidual> lemma_residuals(const GeometrySample& s, const TFPair& tf,
                                           const DistributionSplit& split, const LnFGradient& grad,
                                           const ProductDeclaration& decl) {
  const auto D = columns(split.basis(BlockKind::Invariant));
  const auto P = columns(split.basis(BlockKind::AntiInvariant));
  const auto S = columns(split.basis(BlockKind::Slant));
  const Block* slant = split.slant();
  const double cos2 = slant ? std::pow(std::cos(slant->angle), 2) : 0.0;

  auto gs = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    return s.inner(s.sigma_of(u, v), w);
  };
  auto phi = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd { return s.phi * s.ambient(u); };
  auto F = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd { return s.normal * (tf.F * u); };
  auto T = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd { return tf.T * u; };
  auto eta = [&](const Eigen::VectorXd& u) { return s.eta.dot(s.ambient(u)); };
  auto lnf = [&](const Eigen::VectorXd& u) { return grad.along(s, u); };

  std::vector<NamedResidual> out;
  auto record = [&](std::string name, bool available, auto&& body) {
    NamedResidual r{std::move(name), std::nullopt};
    if (available) {
      double worst = 0.0;
      body(worst);
      r.value = worst;
    }
    out.push_back(std::move(r));
  };
  auto upd = [](double& w, double v) { w = std::max(w, std::abs(v)); };

  record("xi_ln_f", split.xi.has_value(), [&](double& w) { upd(w, grad.xi_ln_f); });
  record("sigma_D_D_phi_perp", !D.empty() && !P.empty(), [&](double& w) {
    for (const auto& X : D)
      for (const auto& Y : D)
        for (const auto& Z : P) upd(w, gs(X, Y, phi(Z)));
  });
  record("sigma_D_theta_phi_perp", !D.empty() && !S.empty() && !P.empty(), [&](double& w) {
    for (const auto& X : D)
      for (const auto& V : S)
        for (const auto& Z : P) upd(w, gs(X, V, phi(Z)));
  });
  record("sigma_D_perp_F_theta", !D.empty() && !S.empty() && !P.empty(), [&](double& w) {
    for (const auto& X : D)
      for (const auto& Z : P)
        for (const auto& V : S) upd(w, gs(X, Z, F(V)));
  });
  record("theta_perp_exchange", !S.empty() && !P.empty(), [&](double& w) {
    for (const auto& U : S)
      for (const auto& V : S)
        for (const auto& Z : P) upd(w, gs(U, V, phi(Z)) - gs(U, Z, F(V)));
  });
  record("phi_D_perp_ln_f", !D.empty() && !P.empty(), [&](double& w) {
    for (const auto& X : D)
      for (const auto& Z : P)
        for (const auto& W : P) upd(w, gs(T(X), Z, phi(W)) - lnf(X) * Z.dot(W));
  });
  std::vector<Eigen::VectorXd> Dx = D;
  if (split.xi && decl.xi_location == XiLocation::Invariant) Dx.push_back(*split.xi);
  record("D_perp_eta_ln_f", !Dx.empty() && !P.empty(), [&](double& w) {
    for (const auto& X : Dx)
      for (const auto& Z : P)
        for (const auto& W : P) upd(w, gs(X, Z, phi(W)) + (lnf(T(X)) + eta(X)) * Z.dot(W));
  });
  record("perp_theta_TV_ln_f", !S.empty() && !P.empty(), [&](double& w) {
    for (const auto& Z : P)
      for (const auto& W : P)
        for (const auto& V : S) upd(w, gs(Z, W, F(V)) - gs(Z, V, phi(W)) - (lnf(T(V)) + eta(V)) * Z.dot(W));
  });
  record("perp_theta_cos2_ln_f", !S.empty() && !P.empty(), [&](double& w) {
    for (const auto& Z : P)
      for (const auto& W : P)
        for (const auto& V : S)
          upd(w, gs(Z, W, F(T(V))) - gs(Z, T(V), phi(W)) + cos2 * lnf(V) * Z.dot(W));
  });
  record("sigma_perp_xi", split.xi.has_value() && !P.empty(), [&](double& w) {
    for (const auto& Z : P) w = std::max(w, s.norm(s.sigma_of(Z, *split.xi) + phi(Z)));
  });
  record("sigma_xi_F", split.xi.has_value(), [&](double& w) {
    for (int a = 0; a < s.n(); ++a) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(s.n(), a);
      w = std::max(w, s.norm(s.sigma_of(e, *split.xi) + F(e)));
    }
  });
  return out;
}

double mixed_tg_check(const GeometrySample& s, const DistributionSplit& split, BlockKind a, BlockKind b) {
  const Eigen::MatrixXd A = split.basis(a), B = split.basis(b);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < A.cols(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      worst = std::max(worst, s.norm(s.sigma_of(A.col(i), B.col(j))));
  return worst;
}

double mixed_tg_check(std::span<const GeometrySample> samples, std::span<const DistributionSplit> splits,
                      BlockKind a, BlockKind b) {
  if (samples.size() != splits.size()) throw Error("mixed_tg_check: samples and splits differ in length");
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k)
    worst = std::max(worst, mixed_tg_check(samples[k], splits[k], a, b));
  return worst;
}

InequalityReport inequality_report(const GeometrySample& s, const TFPair& tf, const DistributionSplit& split,
                                   const LnFGradient& grad, const ProductDeclaration& decl,
                                   const HypothesisFlags& flags) {
  InequalityReport r;
  const SffNorm2 nn = sff_norm2(s);
  r.lhs = nn.frame_contraction;
  r.lhs_components = nn.component_sum;
  r.m2 = static_cast<int>(decl.fiber.size());
  r.norm2_T = grad.norm2_T;
  r.norm2_theta = grad.norm2_theta;
  r.flags = flags;

  const Block* slant = split.slant();
  double cot2 = 0.0, csc2 = 0.0;
  if (slant) {
    r.theta = slant->angle;
    const double c = std::cos(r.theta), sn = std::sin(r.theta);
    cot2 = c * c / (sn * sn);
    csc2 = 1.0 / (sn * sn);
  } else {
    r.theta = kNaN;
  }
  const double m2 = r.m2;
  const double slant_term = slant ? m2 * cot2 * r.norm2_theta : 0.0;
  r.rhs_statement_i = 2 * m2 * (r.norm2_T + 1) + slant_term;
  r.rhs_statement_ii = 2 * m2 * r.norm2_T + slant_term;
  r.rhs_proof_variant_i = 2 * m2 * (r.norm2_T + 1) + (slant ? m2 * csc2 * r.norm2_theta : 0.0);
  switch (decl.xi_location) {
    case XiLocation::Invariant: r.margin = r.lhs - r.rhs_statement_i; break;
    case XiLocation::Slant: r.margin = r.lhs - r.rhs_statement_ii; break;
    case XiLocation::Fiber: r.margin = kNaN; break;
  }

  std::vector<Eigen::VectorXd> D = columns(split.basis(BlockKind::Invariant));
  std::vector<Eigen::VectorXd> S = columns(split.basis(BlockKind::Slant));
  const auto P = columns(split.basis(BlockKind::AntiInvariant));
  if (split.xi && decl.xi_location == XiLocation::Invariant) D.push_back(*split.xi);
  if (split.xi && decl.xi_location == XiLocation::Slant) S.push_back(*split.xi);

  auto block_norm = [&](const std::vector<Eigen::VectorXd>& A, const std::vector<Eigen::VectorXd>& B) {
    double w = 0.0;
    for (const auto& a : A)
      for (const auto& b : B) w = std::max(w, s.norm(s.sigma_of(a, b)));
    return w;
  };
  EqualityDiagnostics& eq = r.equality;
  eq.sigma_D_D = block_norm(D, D);
  eq.sigma_perp_theta = block_norm(P, S);
  eq.sigma_theta_theta = block_norm(S, S);
  eq.sigma_D_theta = block_norm(D, S);

  const NormalSplit ns = classify_normal(s, tf, split);
  for (const auto& X : D)
    for (const auto& Z : P)
      eq.D_perp_outside_phi_perp =
          std::max(eq.D_perp_outside_phi_perp, distance_from_span(s.normal_coords(s.sigma_of(X, Z)), ns.phi_perp));
  for (const auto& Z : P)
    for (const auto& W : P)
      eq.perp_perp_outside_F_theta =
          std::max(eq.perp_perp_outside_F_theta, distance_from_span(s.normal_coords(s.sigma_of(Z, W)), ns.f_slant));
  return r;
}

double special_case_rhs(int m2, double gT2, double gtheta2, double theta, RhsCase which) {
  if (m2 < 1) throw DomainError(0, "m2 must be at least 1");
  if (!(gT2 >= 0.0) || !(gtheta2 >= 0.0)) throw DomainError(0, "squared gradient norms must be nonnegative");
  const bool uses_angle = which != RhsCase::ContactCR;
  if (uses_angle && !(theta >= 0.0 && theta <= std::numbers::pi / 2))
    throw DomainError(0, "slant angle must lie in [0, pi/2]");
  if (uses_angle && theta == 0.0 && (which == RhsCase::PseudoSlant || gtheta2 != 0.0))
    throw DomainError(0, "cot and csc are undefined at a zero slant angle");
  const double c = std::cos(theta), sn = std::sin(theta);
  const double cot2 = uses_angle && theta != 0.0 ? c * c / (sn * sn) : 0.0;
  const double csc2 = uses_angle && theta != 0.0 ? 1.0 / (sn * sn) : 0.0;
  switch (which) {
    case RhsCase::ContactCR: return 2 * m2 * (gT2 + 1);
    case RhsCase::PseudoSlant: return m2 * cot2 * gtheta2;
    case RhsCase::XiInInvariant: return 2 * m2 * (gT2 + 1) + m2 * cot2 * gtheta2;
    case RhsCase::XiInSlant: return 2 * m2 * gT2 + m2 * cot2 * gtheta2;
    case RhsCase::XiInInvariantCsc: return 2 * m2 * (gT2 + 1) + m2 * csc2 * gtheta2;
  }
  return 0.0;
}

}  // namespace skewgeo
