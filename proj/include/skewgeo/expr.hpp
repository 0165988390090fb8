#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/dual.hpp"

namespace skewgeo {

enum class UnaryFn { Sin, Cos, Tan, Sinh, Cosh, Exp, Log, Sqrt, Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable expression node. Subtrees are shared, never mutated.
struct ExprNode {
  enum class Kind { Constant, Parameter, Unary, Binary };

  Kind kind = Kind::Constant;
  double value = 0.0;        // Constant
  std::string name;          // Parameter name, or the name of a named constant ("pi", "k")
  std::size_t index = 0;     // Parameter slot
  UnaryFn fn = UnaryFn::Neg;
  BinaryOp op = BinaryOp::Add;
  std::shared_ptr<const ExprNode> lhs;  // Unary operand / binary left
  std::shared_ptr<const ExprNode> rhs;
  std::size_t position = 0;  // offset into the source text
  bool parameter_free = true;
};

/// Parsed scalar expression over an ordered list of named parameters.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ["-"] atom ["^" factor]
///   atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
///
/// "^" binds tighter than unary minus and is right-associative. Powers need a
/// positive base unless the exponent is a parameter-free integer.
class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<const ExprNode> root, std::vector<std::string> params)
      : root_(std::move(root)), params_(std::move(params)) {}

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }
  const std::vector<std::string>& params() const { return params_; }
  std::size_t num_params() const { return params_.size(); }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> params_;
};

using ConstantMap = std::map<std::string, double>;

/// Named parameter values. Lookup is by name so a point may carry extra entries.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<std::pair<std::string, double>> entries);

  void set(const std::string& name, double value);
  double at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

  /// Values in the order of `names`; throws if a name is missing.
  std::vector<double> ordered(const std::vector<std::string>& names) const;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

Expr parse(std::string_view source, const std::vector<std::string>& params,
           const ConstantMap& constants = {});

template <typename Scalar>
Scalar evaluate(const Expr& e, std::span<const Scalar> args);

double eval(const Expr& e, std::span<const double> args);
double eval(const Expr& e, const Point& p);

/// Exact first partials, one dual pass per parameter.
Eigen::VectorXd gradient(const Expr& e, std::span<const double> args);
Eigen::VectorXd gradient(const Expr& e, const Point& p);

/// Exact second partials from nested duals, one pass per unordered pair.
Eigen::MatrixXd hessian(const Expr& e, std::span<const double> args);
Eigen::MatrixXd hessian(const Expr& e, const Point& p);

/// Canonical fully parenthesised form; parses back to a structurally equal tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// True when the tree references parameter `index`.
bool depends_on(const Expr& e, std::size_t index);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace skewgeo
