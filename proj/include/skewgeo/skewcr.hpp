#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/immersion.hpp"

namespace skewgeo {

/// Tangential and normal parts of phi in the orthonormal frames: phi e_b = sum_a T_ab e_a + sum_r F_rb N_r.
struct TFPair {
  Eigen::MatrixXd T;                 // n x n
  Eigen::MatrixXd F;                 // (N-n) x n
  std::optional<Eigen::VectorXd> xi; // frame coordinates of xi when tangent
  double xi_normal_defect = 0.0;     // |xi - tangential part of xi|
};

TFPair tf_decompose(const GeometrySample& s, double xi_tangent_tol = 1e-9);

struct TFResiduals {
  double reconstruction = 0.0;  // |TX + FX - phi X| over the frame
  double antisymmetry = 0.0;    // |T + T^t|
  double xi_kernel = 0.0;       // |T xi| + |F xi| in frame coordinates
};

TFResiduals tf_residuals(const GeometrySample& s, const TFPair& tf);

enum class BlockKind { Invariant, AntiInvariant, Slant };

std::string to_string(BlockKind k);

/// One eigenspace of Q = T^2 restricted to <xi>^perp.
struct Block {
  BlockKind kind = BlockKind::Slant;
  double eigenvalue = 0.0;   // mean of the clustered eigenvalues, in [-1, 0]
  int dim = 0;
  double angle = 0.0;        // arccos(sqrt(-eigenvalue)), radians
  Eigen::MatrixXd basis;     // n x dim, orthonormal frame coordinates
};

enum class SplitLabel {
  Invariant,
  AntiInvariant,
  Slant,
  ContactCR,
  SemiSlant,
  PseudoSlant,
  SkewCROrder1,
  Generic,
};

std::string to_string(SplitLabel l);

struct DistributionSplit {
  int n = 0;                          // submanifold dimension
  std::vector<Block> blocks;          // invariant, anti-invariant, then slant blocks by eigenvalue
  std::optional<Eigen::VectorXd> xi;  // frame coordinates of xi when tangent
  SplitLabel label = SplitLabel::Generic;
  bool even_slant_dims = true;
  double anti_invariant_T = 0.0;      // |T| on the anti-invariant block (cross-check)

  int dim(BlockKind k) const;
  int slant_count() const;
  /// First slant block, if any.
  const Block* slant() const;
  /// Concatenated basis of all blocks of kind k (n x dim(k)).
  Eigen::MatrixXd basis(BlockKind k) const;
};

/// Eigen-decomposition of Q on <xi>^perp with eigenvalues grouped within
/// tol_cluster. Throws ConsistencyError when an eigenvalue leaves [-1 - range_tol, range_tol].
DistributionSplit classify(const GeometrySample& s, const TFPair& tf, double tol_cluster = 1e-6,
                           double range_tol = 1e-9);

/// Label from the block dimensions alone.
SplitLabel label_for(int dim_invariant, int dim_anti, int slant_blocks);

struct SlantResiduals {
  double g_TT = 0.0;       // g(TX,TY) - cos^2 [g(X,Y) - eta(X)eta(Y)]
  double g_FF = 0.0;       // g(FX,FY) - sin^2 [g(X,Y) - eta(X)eta(Y)]
  double t_squared = 0.0;  // T^2 X + cos^2 (X - eta(X) xi)
  double wirtinger = 0.0;  // arccos-angle vs |Te| / |phi e|
};

/// Evaluates the slant identities on block ⊕ <xi> over the basis and
/// `random_combinations` seeded combinations.
SlantResiduals verify_slant_identities(const GeometrySample& s, const TFPair& tf, const Block& block,
                                       const std::optional<Eigen::VectorXd>& xi,
                                       int random_combinations = 8, unsigned long seed = 7);

/// Normal bundle split phi D^perp + F D^theta + mu, bases in normal-frame coordinates.
struct NormalSplit {
  int dim_phi_perp = 0;
  int dim_f_slant = 0;
  int dim_mu = 0;
  Eigen::MatrixXd phi_perp;  // (N-n) x dim
  Eigen::MatrixXd f_slant;
  Eigen::MatrixXd mu;
  double orthogonality = 0.0;  // |<phi D^perp, F D^theta>|
  double mu_invariance = 0.0;  // |phi nu - proj_mu(phi nu)| over the mu basis
};

NormalSplit classify_normal(const GeometrySample& s, const TFPair& tf, const DistributionSplit& split,
                            double tol = 1e-9);

struct SplitConstancy {
  bool dims_constant = true;
  double angle_spread = 0.0;  // max over slant blocks of (max - min) angle across samples
};

SplitConstancy compare_splits(std::span<const DistributionSplit> splits);

/// Label for a set of samples: the common pointwise label, or Generic if
/// dimensions change or slant angles drift beyond tol.
SplitLabel overall_label(std::span<const DistributionSplit> splits, double tol = 1e-8);

}  // namespace skewgeo
