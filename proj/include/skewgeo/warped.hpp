#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/immersion.hpp"
#include "skewgeo/skewcr.hpp"

namespace skewgeo {

enum class XiLocation { Invariant, Slant, Fiber };

std::string to_string(XiLocation loc);
XiLocation parse_xi_location(const std::string& s);

/// Partition of the immersion parameters into M_T x M_theta (base) and M_perp (fiber).
struct ProductDeclaration {
  std::vector<int> base_T;
  std::vector<int> base_theta;
  std::vector<int> fiber;
  XiLocation xi_location = XiLocation::Invariant;
  std::optional<Expr> warping;  // over the immersion parameters, base-only

  std::vector<int> base() const;
};

/// Resolves names to parameter indices; throws SchemaError unless the three
/// lists partition the parameters. The warping expression may only depend on
/// base parameters.
ProductDeclaration declare_product(const Immersion& imm, const std::vector<std::string>& base_T,
                                   const std::vector<std::string>& base_theta,
                                   const std::vector<std::string>& fiber, XiLocation xi_location,
                                   const std::optional<std::string>& warping = std::nullopt,
                                   const ConstantMap& constants = {});

struct BlockStructure {
  double offdiag = 0.0;          // max |g_ab| across different factors
  double base_dependence = 0.0;  // max |d_c g_ab|, a,b base, c fiber
  double max() const { return std::max(offdiag, base_dependence); }
};

BlockStructure check_block_structure(const Immersion& imm, const ProductDeclaration& decl,
                                     std::span<const Eigen::VectorXd> samples);

enum class WarpVerdict { NotWarped, RiemannianProduct, WarpedProduct };

std::string to_string(WarpVerdict v);

struct WarpedStructure {
  WarpVerdict verdict = WarpVerdict::NotWarped;
  BlockStructure block;
  double consistency = 0.0;            // fiber block vs scalar multiple of the gauge metric
  Eigen::VectorXd base_reference;      // gauge base point (full parameter vector)
  Eigen::VectorXd fiber_reference;     // q0, fiber coordinates
  double f_reference = 1.0;            // f at the gauge base point
  Eigen::VectorXd f_values;            // recovered f per sample
  double f_spread = 0.0;               // (max - min) / mean of f_values
  std::optional<double> expr_error;    // max |f - f_expr| / f_expr

  bool established() const { return verdict != WarpVerdict::NotWarped; }
};

/// Recovers f(b)^2 = f_ref^2 tr G_F(b,q) / tr G_F(b_ref,q) from the fiber block
/// of the induced metric, gauge-fixed at the domain centre.
WarpedStructure extract_warping(const Immersion& imm, const ProductDeclaration& decl,
                                std::span<const Eigen::VectorXd> samples, const Tolerances& tol = {});

struct LnFGradient {
  Eigen::VectorXd differential;  // d(ln f) in parameter coordinates (zero on the fiber)
  Eigen::VectorXd gradient;      // raised with the inverse base metric
  double norm2_T = 0.0;          // |grad^T ln f|^2
  double norm2_theta = 0.0;      // |grad^theta ln f|^2
  double xi_ln_f = 0.0;          // xi(ln f)

  /// X(ln f) for a tangent vector in frame coordinates.
  double along(const GeometrySample& s, const Eigen::VectorXd& frame_coords) const;
};

LnFGradient grad_ln_f(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                      const Eigen::VectorXd& p);
LnFGradient grad_ln_f(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                      const GeometrySample& s);

struct BishopResidual {
  double residual = 0.0;  // |tan(nabla~_{d_a} d_c) - (d_a ln f) d_c| in the induced metric
  double ordering = 0.0;  // |nabla_{d_a} d_c - nabla_{d_c} d_a|
};

BishopResidual check_bishop(const GeometrySample& s, const LnFGradient& grad, int base_param, int fiber_param);
BishopResidual check_bishop(const Immersion& imm, const ProductDeclaration& decl, const WarpedStructure& ws,
                            const Eigen::VectorXd& p, int base_param, int fiber_param);

struct NamedResidual {
  std::string name;
  std::optional<double> value;  // empty when the needed blocks are absent
};

/// Warped-product identities on the adapted frame; each is the max absolute
/// defect over block basis combinations.
std::vector<NamedResidual> lemma_residuals(const GeometrySample& s, const TFPair& tf,
                                           const DistributionSplit& split, const LnFGradient& grad,
                                           const ProductDeclaration& decl);

/// max |sigma(e_a, e_c)| with e_a, e_c from blocks a and b, over all samples.
double mixed_tg_check(std::span<const GeometrySample> samples, std::span<const DistributionSplit> splits,
                      BlockKind a, BlockKind b);
double mixed_tg_check(const GeometrySample& s, const DistributionSplit& split, BlockKind a, BlockKind b);

struct HypothesisFlags {
  bool sasakian_ambient = false;
  bool mixed_tg_perp_theta = false;
  XiLocation xi_location = XiLocation::Invariant;
  bool order1_skewcr = false;
};

struct EqualityDiagnostics {
  double sigma_D_D = 0.0;
  double sigma_perp_theta = 0.0;
  double sigma_theta_theta = 0.0;
  double sigma_D_theta = 0.0;
  double D_perp_outside_phi_perp = 0.0;   // distance of sigma(D, D^perp) from phi D^perp
  double perp_perp_outside_F_theta = 0.0; // distance of sigma(D^perp, D^perp) from F D^theta
};

/// Lower-bound report for |sigma|^2 at one sample.
struct InequalityReport {
  double lhs = 0.0;              // frame contraction
  double lhs_components = 0.0;   // normal-component sum
  int m2 = 0;
  double theta = 0.0;
  double norm2_T = 0.0;
  double norm2_theta = 0.0;
  double rhs_statement_i = 0.0;
  double rhs_statement_ii = 0.0;
  double rhs_proof_variant_i = 0.0;  // csc^2 in place of cot^2
  double margin = 0.0;               // lhs - rhs for the applicable statement
  HypothesisFlags flags;
  EqualityDiagnostics equality;
};

InequalityReport inequality_report(const GeometrySample& s, const TFPair& tf, const DistributionSplit& split,
                                   const LnFGradient& grad, const ProductDeclaration& decl,
                                   const HypothesisFlags& flags);

enum class RhsCase {
  ContactCR,          // 2 m2 (gT2 + 1)
  PseudoSlant,        // m2 cot^2 gtheta2
  XiInInvariant,      // 2 m2 (gT2 + 1) + m2 cot^2 gtheta2
  XiInSlant,          // 2 m2 gT2 + m2 cot^2 gtheta2
  XiInInvariantCsc,   // 2 m2 (gT2 + 1) + m2 csc^2 gtheta2
};

double special_case_rhs(int m2, double gT2, double gtheta2, double theta, RhsCase which);

}  // namespace skewgeo
