#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/ambient.hpp"
#include "skewgeo/expr.hpp"
#include "skewgeo/tolerances.hpp"

namespace skewgeo {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// psi: U -> M~, U a box in R^n, components are expressions in the parameters.
struct Immersion {
  std::vector<std::string> params;
  std::vector<Interval> domain;
  std::vector<Expr> components;
  std::shared_ptr<const AmbientModel> ambient;

  int dim() const { return static_cast<int>(params.size()); }
  int ambient_dim() const { return ambient->dim(); }
  int codim() const { return ambient_dim() - dim(); }
};

Eigen::VectorXd position(const Immersion& imm, const Eigen::VectorXd& p);

/// Column a = d psi / d u_a. Throws DegenerateError when the smallest singular
/// value falls below rank_tol times the largest.
Eigen::MatrixXd jacobian(const Immersion& imm, const Eigen::VectorXd& p, double rank_tol = 1e-8);

Eigen::MatrixXd induced_metric(const Immersion& imm, const Eigen::VectorXd& p);

/// Exact d_c of the induced metric, one matrix per parameter c.
std::vector<Eigen::MatrixXd> induced_metric_derivatives(const Immersion& imm, const Eigen::VectorXd& p);

struct Frames {
  Eigen::MatrixXd tangent;  // N x n, g-orthonormal, spans the image of J
  Eigen::MatrixXd normal;   // N x (N-n), g-orthonormal completion
  Eigen::MatrixXd coeffs;   // n x n, tangent = J * coeffs
};

/// Modified Gram-Schmidt over the Jacobian columns taken in `ordering`
/// (declaration order when empty), then pivoted completion to a full basis.
Frames orthonormal_frames(const Immersion& imm, const Eigen::VectorXd& p,
                          std::span<const int> ordering = {}, const Tolerances& tol = {});

/// Extrinsic data at one parameter point. Frame-indexed quantities use the
/// orthonormal tangent frame e_a; coordinate-indexed ones use d/du_a.
struct GeometrySample {
  Eigen::VectorXd p;
  Eigen::VectorXd x;        // psi(p)
  Eigen::MatrixXd J;        // N x n
  Eigen::MatrixXd g;        // ambient metric at x
  Eigen::MatrixXd g_ind;    // n x n
  Eigen::MatrixXd tangent;  // N x n
  Eigen::MatrixXd normal;   // N x (N-n)
  Eigen::MatrixXd coeffs;   // tangent = J * coeffs
  Eigen::MatrixXd phi;      // ambient phi at x
  Eigen::VectorXd xi;       // ambient xi at x
  Eigen::VectorXd eta;      // ambient eta at x
  std::vector<Eigen::VectorXd> accel_coord;  // nabla~_{d_a} d_b, n*n ambient vectors
  std::vector<Eigen::VectorXd> sigma_coord;  // sigma(d_a, d_b)
  std::vector<Eigen::VectorXd> sigma;        // sigma(e_a, e_b)

  int n() const { return static_cast<int>(J.cols()); }
  int dim() const { return static_cast<int>(J.rows()); }
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return u.dot(g * v); }
  double norm(const Eigen::VectorXd& u) const;
  const Eigen::VectorXd& sigma_at(int a, int b) const { return sigma[a * n() + b]; }
  /// sigma(u, v) for tangent vectors given by frame coordinates.
  Eigen::VectorXd sigma_of(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// Ambient vector for frame coordinates.
  Eigen::VectorXd ambient(const Eigen::VectorXd& frame_coords) const { return tangent * frame_coords; }
  /// Frame coordinates of the tangential part of an ambient vector.
  Eigen::VectorXd tangent_coords(const Eigen::VectorXd& v) const { return tangent.transpose() * (g * v); }
  /// Normal-frame coordinates of an ambient vector.
  Eigen::VectorXd normal_coords(const Eigen::VectorXd& v) const { return normal.transpose() * (g * v); }
  Eigen::VectorXd normal_part(const Eigen::VectorXd& v) const { return normal * normal_coords(v); }
};

/// Builds the full sample: frames plus sigma from
/// nabla~_{d_a} d_b = d_a d_b psi + Gamma(d_a psi, d_b psi), projected normally.
GeometrySample second_fundamental_form(const Immersion& imm, const Eigen::VectorXd& p,
                                       std::span<const int> ordering = {}, const Tolerances& tol = {});

/// (A_N)_{ab} = g(sigma(e_a, e_b), N). Throws if N has a tangential component above tol.
Eigen::MatrixXd shape_operator(const GeometrySample& s, const Eigen::VectorXd& N, double tol = 1e-9);

struct SffNorm2 {
  double frame_contraction = 0.0;  // sum_ab g(sigma_ab, sigma_ab)
  double component_sum = 0.0;      // sum_r sum_ab (sigma^r_ab)^2
};

SffNorm2 sff_norm2(const GeometrySample& s);

Eigen::VectorXd mean_curvature(const GeometrySample& s);

/// max_ab |sigma(e_a,e_b) - delta_ab H|.
double umbilicity_residual(const GeometrySample& s);

struct SampleDiagnostics {
  double frame_gram = 0.0;       // full ambient frame vs identity
  double sigma_symmetry = 0.0;
  double sigma_normality = 0.0;
  double gauss_split = 0.0;      // tangential + sigma reconstructs nabla~
};

SampleDiagnostics diagnose(const GeometrySample& s);

/// Seeded uniform points in the immersion's domain box.
std::vector<Eigen::VectorXd> sample_points(const Immersion& imm, int count, unsigned long seed);

Eigen::VectorXd domain_center(const Immersion& imm);

}  // namespace skewgeo
