#include "skewgeo/skewcr.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

/// Orthonormal basis of the complement of unit vector c in R^n.
Eigen::MatrixXd complement(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::MatrixXd m(n, n);
  m.col(0) = c;
  m.rightCols(n - 1) = Eigen::MatrixXd::Identity(n, n).leftCols(n - 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

/// Orthonormal basis of the column span of `m` (rank determined at tol).
Eigen::MatrixXd span_basis(const Eigen::MatrixXd& m, double tol) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  const auto rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.rows());
  return q.leftCols(rank);
}

}  // namespace

TFPair tf_decompose(const GeometrySample& s, double xi_tangent_tol) {
  TFPair tf;
  const Eigen::MatrixXd phi_e = s.phi * s.tangent;
  tf.T = s.tangent.transpose() * s.g * phi_e;
  tf.F = s.normal.transpose() * s.g * phi_e;
  const Eigen::VectorXd c = s.tangent_coords(s.xi);
  tf.xi_normal_defect = s.norm(s.xi - s.tangent * c);
  if (tf.xi_normal_defect < xi_tangent_tol * std::max(1.0, s.norm(s.xi))) tf.xi = c;
  return tf;
}

TFResiduals tf_residuals(const GeometrySample& s, const TFPair& tf) {
  TFResiduals r;
  const Eigen::MatrixXd recon = s.tangent * tf.T + s.normal * tf.F - s.phi * s.tangent;
  r.reconstruction = recon.cwiseAbs().maxCoeff();
  r.antisymmetry = (tf.T + tf.T.transpose()).cwiseAbs().maxCoeff();
  if (tf.xi) r.xi_kernel = (tf.T * *tf.xi).norm() + (tf.F * *tf.xi).norm();
  return r;
}

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Invariant: return "invariant";
    case BlockKind::AntiInvariant: return "anti-invariant";
    case BlockKind::Slant: return "slant";
  }
  return "?";
}

std::string to_string(SplitLabel l) {
  switch (l) {
    case SplitLabel::Invariant: return "invariant";
    case SplitLabel::AntiInvariant: return "anti-invariant";
    case SplitLabel::Slant: return "slant";
    case SplitLabel::ContactCR: return "contact CR";
    case SplitLabel::SemiSlant: return "semi-slant";
    case SplitLabel::PseudoSlant: return "pseudo-slant";
    case SplitLabel::SkewCROrder1: return "skew CR order 1";
    case SplitLabel::Generic: return "generic";
  }
  return "?";
}

int DistributionSplit::dim(BlockKind k) const {
  int d = 0;
  for (const auto& b : blocks)
    if (b.kind == k) d += b.dim;
  return d;
}

int DistributionSplit::slant_count() const {
  return static_cast<int>(std::count_if(blocks.begin(), blocks.end(),
                                        [](const Block& b) { return b.kind == BlockKind::Slant; }));
}

const Block* DistributionSplit::slant() const {
  for (const auto& b : blocks)
    if (b.kind == BlockKind::Slant) return &b;
  return nullptr;
}

Eigen::MatrixXd DistributionSplit::basis(BlockKind k) const {
  Eigen::MatrixXd out(n, dim(k));
  Eigen::Index col = 0;
  for (const auto& b : blocks) {
    if (b.kind != k) continue;
    out.middleCols(col, b.dim) = b.basis;
    col += b.dim;
  }
  return out;
}

SplitLabel label_for(int dim_invariant, int dim_anti, int slant_blocks) {
  if (slant_blocks >= 2) return SplitLabel::Generic;
  if (slant_blocks == 1) {
    if (dim_invariant == 0 && dim_anti == 0) return SplitLabel::Slant;
    if (dim_anti == 0) return SplitLabel::SemiSlant;
    if (dim_invariant == 0) return SplitLabel::PseudoSlant;
    return SplitLabel::SkewCROrder1;
  }
  if (dim_anti == 0) return SplitLabel::Invariant;
  if (dim_invariant == 0) return SplitLabel::AntiInvariant;
  return SplitLabel::ContactCR;
}

DistributionSplit classify(const GeometrySample& s, const TFPair& tf, double tol_cluster, double range_tol) {
  const int n = s.n();
  DistributionSplit split;
  split.n = n;
  split.xi = tf.xi;
  const Eigen::MatrixXd basis =
      tf.xi ? complement(tf.xi->normalized()) : Eigen::MatrixXd::Identity(n, n);

  const Eigen::MatrixXd Q = tf.T * tf.T;
  Eigen::MatrixXd Qr = basis.transpose() * Q * basis;
  Qr = 0.5 * (Qr + Qr.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Qr);
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd vecs = basis * eig.eigenvectors();

  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < -1.0 - range_tol || ev[i] > range_tol)
      throw ConsistencyError("Q eigenvalue " + std::to_string(ev[i]) + " outside [-1, 0]");

  Eigen::Index start = 0;
  while (start < ev.size()) {
    Eigen::Index end = start + 1;
    while (end < ev.size() && ev[end] - ev[end - 1] < tol_cluster) ++end;
    Block b;
    b.dim = static_cast<int>(end - start);
    b.eigenvalue = ev.segment(start, end - start).mean();
    b.basis = vecs.middleCols(start, end - start);
    const double mu = std::clamp(b.eigenvalue, -1.0, 0.0);
    if (std::abs(mu + 1.0) < tol_cluster) {
      b.kind = BlockKind::Invariant;
      b.angle = 0.0;
    } else if (std::abs(mu) < tol_cluster) {
      b.kind = BlockKind::AntiInvariant;
      b.angle = std::acos(0.0);
    } else {
      b.kind = BlockKind::Slant;
      b.angle = std::acos(std::sqrt(-mu));
      if (b.dim % 2 != 0) split.even_slant_dims = false;
    }
    split.blocks.push_back(std::move(b));
    start = end;
  }
  std::stable_sort(split.blocks.begin(), split.blocks.end(), [](const Block& a, const Block& b) {
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  for (const auto& b : split.blocks)
    if (b.kind == BlockKind::AntiInvariant)
      split.anti_invariant_T = std::max(split.anti_invariant_T, (tf.T * b.basis).cwiseAbs().maxCoeff());

  split.label = label_for(split.dim(BlockKind::Invariant), split.dim(BlockKind::AntiInvariant),
                          split.slant_count());
  return split;
}

SlantResiduals verify_slant_identities(const GeometrySample& s, const TFPair& tf, const Block& block,
                                       const std::optional<Eigen::VectorXd>& xi,
                                       int random_combinations, unsigned long seed) {
  // Frame coordinates are orthonormal, so inner products are Euclidean here.
  const int n = s.n();
  const double c2 = std::pow(std::cos(block.angle), 2);
  const double s2 = std::pow(std::sin(block.angle), 2);
  const Eigen::VectorXd xi_c = xi ? *xi : Eigen::VectorXd::Zero(n);

  std::vector<Eigen::VectorXd> vecs;
  for (Eigen::Index j = 0; j < block.basis.cols(); ++j) vecs.push_back(block.basis.col(j));
  if (xi) vecs.push_back(xi_c);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < random_combinations; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < block.basis.cols(); ++j) v += normal(rng) * block.basis.col(j);
    if (xi) v += normal(rng) * xi_c;
    vecs.push_back(v);
  }

  SlantResiduals r;
  const Eigen::MatrixXd Q = tf.T * tf.T;
  for (const auto& X : vecs) {
    const double ex = X.dot(xi_c);
    for (const auto& Y : vecs) {
      const double ey = Y.dot(xi_c);
      const double base = X.dot(Y) - ex * ey;
      r.g_TT = std::max(r.g_TT, std::abs((tf.T * X).dot(tf.T * Y) - c2 * base));
      r.g_FF = std::max(r.g_FF, std::abs((tf.F * X).dot(tf.F * Y) - s2 * base));
    }
    r.t_squared = std::max(r.t_squared, (Q * X + c2 * (X - ex * xi_c)).norm());
  }
  for (Eigen::Index j = 0; j < block.basis.cols(); ++j) {
    const Eigen::VectorXd e = block.basis.col(j);
    const double phi_norm = std::hypot((tf.T * e).norm(), (tf.F * e).norm());
    if (phi_norm == 0.0) continue;
    const double direct = std::acos(std::clamp((tf.T * e).norm() / phi_norm, 0.0, 1.0));
    r.wirtinger = std::max(r.wirtinger, std::abs(direct - block.angle));
  }
  return r;
}

NormalSplit classify_normal(const GeometrySample& s, const TFPair& tf, const DistributionSplit& split,
                            double tol) {
  NormalSplit ns;
  const Eigen::Index codim = tf.F.rows();
  const Eigen::MatrixXd perp = split.basis(BlockKind::AntiInvariant);
  const Eigen::MatrixXd slant = split.basis(BlockKind::Slant);
  ns.phi_perp = span_basis(tf.F * perp, tol);
  ns.f_slant = span_basis(tf.F * slant, tol);
  ns.dim_phi_perp = static_cast<int>(ns.phi_perp.cols());
  ns.dim_f_slant = static_cast<int>(ns.f_slant.cols());
  ns.dim_mu = static_cast<int>(codim) - ns.dim_phi_perp - ns.dim_f_slant;
  if (ns.dim_phi_perp != perp.cols() || ns.dim_f_slant != slant.cols() || ns.dim_mu < 0)
    throw ConsistencyError("normal bundle dimensions do not tile the normal space");
  if (ns.dim_phi_perp && ns.dim_f_slant)
    ns.orthogonality = (ns.phi_perp.transpose() * ns.f_slant).cwiseAbs().maxCoeff();

  Eigen::MatrixXd used(codim, ns.dim_phi_perp + ns.dim_f_slant);
  used << ns.phi_perp, ns.f_slant;
  if (used.cols() == 0) {
    ns.mu = Eigen::MatrixXd::Identity(codim, codim);
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(used);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(codim, codim);
    ns.mu = q.rightCols(ns.dim_mu);
  }
  for (Eigen::Index j = 0; j < ns.mu.cols(); ++j) {
    const Eigen::VectorXd nu = s.normal * ns.mu.col(j);
    const Eigen::VectorXd image = s.phi * nu;
    const Eigen::VectorXd in_mu = s.normal * (ns.mu * (ns.mu.transpose() * s.normal_coords(image)));
    ns.mu_invariance = std::max(ns.mu_invariance, s.norm(image - in_mu));
  }
  return ns;
}

SplitConstancy compare_splits(std::span<const DistributionSplit> splits) {
  SplitConstancy c;
  if (splits.empty()) return c;
  const auto& ref = splits.front();
  for (const auto& sp : splits) {
    if (sp.blocks.size() != ref.blocks.size() || sp.xi.has_value() != ref.xi.has_value()) {
      c.dims_constant = false;
      continue;
    }
    for (std::size_t i = 0; i < sp.blocks.size(); ++i) {
      if (sp.blocks[i].kind != ref.blocks[i].kind || sp.blocks[i].dim != ref.blocks[i].dim)
        c.dims_constant = false;
    }
  }
  if (!c.dims_constant) return c;
  for (std::size_t i = 0; i < ref.blocks.size(); ++i) {
    if (ref.blocks[i].kind != BlockKind::Slant) continue;
    double lo = ref.blocks[i].angle, hi = lo;
    for (const auto& sp : splits) {
      lo = std::min(lo, sp.blocks[i].angle);
      hi = std::max(hi, sp.blocks[i].angle);
    }
    c.angle_spread = std::max(c.angle_spread, hi - lo);
  }
  return c;
}

SplitLabel overall_label(std::span<const DistributionSplit> splits, double tol) {
  if (splits.empty()) return SplitLabel::Generic;
  const SplitConstancy c = compare_splits(splits);
  if (!c.dims_constant || c.angle_spread > tol) return SplitLabel::Generic;
  return splits.front().label;
}

}  // namespace skewgeo
