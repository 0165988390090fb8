#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/expr.hpp"

namespace skewgeo {

/// Almost contact metric manifold (phi, xi, eta, g) on one global chart of
/// dimension 2m+1. Tensor entries are expressions in the chart coordinates.
struct AmbientModel {
  std::string name;
  int m = 0;
  std::vector<std::string> coords;
  std::vector<Expr> metric;  // g_{AB}, row-major
  std::vector<Expr> phi;     // phi^A_B, row-major: column B is phi(d/dx^B)
  std::vector<Expr> xi;      // xi^A
  std::vector<Expr> eta;     // eta_A

  int dim() const { return 2 * m + 1; }
};

/// Source strings for an AmbientModel; the serialisable form.
struct AmbientSource {
  int m = 0;
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> metric;
  std::vector<std::vector<std::string>> phi;
  std::vector<std::string> xi;
  std::vector<std::string> eta;
};

AmbientModel build_ambient(const std::string& name, const AmbientSource& src,
                           const ConstantMap& constants = {});
AmbientSource source_of(const AmbientModel& model);

/// R^{2m+1} with the Euclidean metric, phi(dx_i) = -dy_i, phi(dy_i) = dx_i,
/// xi = dt, eta = dt. Coordinates (x_1..x_m, y_1..y_m, t).
AmbientModel flat_model(int m);

/// Standard Sasakian structure on R^{2m+1}: eta = (dz - sum y_i dx_i)/2,
/// xi = 2 dz, g = eta (x) eta + (1/4) sum (dx_i^2 + dy_i^2),
/// phi(dx_i) = -dy_i, phi(dy_i) = dx_i + y_i dz. Coordinates (x.., y.., z).
AmbientModel sasakian_model(int m);

Eigen::MatrixXd metric_at(const AmbientModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd phi_at(const AmbientModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd xi_at(const AmbientModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd eta_at(const AmbientModel& model, const Eigen::VectorXd& x);

/// Entry [C](A,B) = d_C g_{AB}.
std::vector<Eigen::MatrixXd> metric_derivatives(const AmbientModel& model, const Eigen::VectorXd& x);
/// Entry [C](A,B) = d_C phi^A_B.
std::vector<Eigen::MatrixXd> phi_derivatives(const AmbientModel& model, const Eigen::VectorXd& x);
/// (A,C) = d_C xi^A.
Eigen::MatrixXd xi_jacobian(const AmbientModel& model, const Eigen::VectorXd& x);
/// (B,C) = d_C eta_B.
Eigen::MatrixXd eta_jacobian(const AmbientModel& model, const Eigen::VectorXd& x);

/// Levi-Civita symbols Gamma^C_{AB} at one chart point.
class Christoffel {
 public:
  explicit Christoffel(std::vector<Eigen::MatrixXd> gamma) : gamma_(std::move(gamma)) {}

  /// Gamma^C_{AB}.
  double operator()(int c, int a, int b) const { return gamma_[c](a, b); }
  const Eigen::MatrixXd& upper(int c) const { return gamma_[c]; }
  int dim() const { return static_cast<int>(gamma_.size()); }

  /// Vector with components Gamma^C_{AB} X^A Y^B.
  Eigen::VectorXd contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  std::vector<Eigen::MatrixXd> gamma_;
};

Christoffel christoffel(const AmbientModel& model, const Eigen::VectorXd& x);

/// Vector field given by expression components in the chart coordinates.
using VectorField = std::vector<Expr>;

/// (nabla_X Y)^C = X^A d_A Y^C + Gamma^C_{AB} X^A Y^B at x.
Eigen::VectorXd covariant_derivative(const AmbientModel& model, const VectorField& X,
                                     const VectorField& Y, const Eigen::VectorXd& x);

/// Same with X given by its value at x and Y by value plus Jacobian dY (C, A) = d_A Y^C.
Eigen::VectorXd covariant_derivative(const Christoffel& gamma, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Y, const Eigen::MatrixXd& dY);

struct StructureResiduals {
  double almost_contact = 0.0;  // phi^2 + I - eta (x) xi, eta(xi) - 1, phi xi, eta o phi
  double compatibility = 0.0;   // g(phiX, phiY) - g(X,Y) + eta(X) eta(Y), eta - g(., xi)
  double contact_metric = 0.0;  // Phi - d eta, Phi(X,Y) = g(X, phi Y)
  double normality = 0.0;       // [phi,phi] + 2 d eta (x) xi
  double sasakian = 0.0;        // (nabla_X phi)Y - g(X,Y) xi + eta(Y) X
  double xi_derivative = 0.0;   // nabla_X xi + phi X
};

using DirectionPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

/// All ordered pairs of coordinate vectors followed by `random_pairs` seeded
/// Gaussian pairs.
std::vector<DirectionPair> structure_directions(int dim, int random_pairs, unsigned long seed);

/// Uniform seeded points in the cube [lo, hi]^dim.
std::vector<Eigen::VectorXd> random_chart_points(int dim, int count, unsigned long seed,
                                                 double lo = -1.0, double hi = 1.0);

/// Max defect of each structure identity over points x directions. Directions
/// are g-normalised at each point before use. dη(X,Y) = (X η(Y) - Y η(X))/2
/// for coordinate-constant fields.
StructureResiduals check_structure(const AmbientModel& model,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const std::vector<DirectionPair>& directions);

}  // namespace skewgeo
