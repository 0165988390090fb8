#include "skewgeo/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct FunctionInfo {
  std::string_view name;
  UnaryFn fn;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},
    {"sinh", UnaryFn::Sinh}, {"cosh", UnaryFn::Cosh}, {"exp", UnaryFn::Exp},
    {"log", UnaryFn::Log},   {"sqrt", UnaryFn::Sqrt},
};

std::string_view function_name(UnaryFn fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f.name;
  return "neg";
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

NodePtr make_constant(double v, std::string name, std::size_t pos) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Constant;
  n->value = v;
  n->name = std::move(name);
  n->position = pos;
  return n;
}

NodePtr make_unary(UnaryFn fn, NodePtr arg, std::size_t pos) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->fn = fn;
  n->parameter_free = arg->parameter_free;
  n->lhs = std::move(arg);
  n->position = pos;
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b, std::size_t pos) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = op;
  n->parameter_free = a->parameter_free && b->parameter_free;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  n->position = pos;
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& params, const ConstantMap& constants)
      : src_(src), params_(params), constants_(constants) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+'))
        lhs = make_binary(BinaryOp::Add, lhs, term(), at);
      else if (accept('-'))
        lhs = make_binary(BinaryOp::Sub, lhs, term(), at);
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*'))
        lhs = make_binary(BinaryOp::Mul, lhs, factor(), at);
      else if (accept('/'))
        lhs = make_binary(BinaryOp::Div, lhs, factor(), at);
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    std::size_t at = pos_;
    bool negate = accept('-');
    NodePtr base = atom();
    skip_ws();
    std::size_t caret = pos_;
    if (accept('^')) base = make_binary(BinaryOp::Pow, base, factor(), caret);
    return negate ? make_unary(UnaryFn::Neg, base, at) : base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    std::size_t at = pos_;
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = identifier();
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') return call(name, at);
      return reference(name, at);
    }
    throw ParseError(at, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    std::size_t at = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t mark = end++;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
      std::size_t exp_start = end;
      digits();
      if (end == exp_start) end = mark;  // "2e" is 2 followed by identifier e
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + at, src_.data() + end, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + end)
      throw ParseError(at, "malformed number");
    pos_ = end;
    return make_constant(v, "", at);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  NodePtr call(const std::string& name, std::size_t at) {
    const FunctionInfo* info = nullptr;
    for (const auto& f : kFunctions)
      if (f.name == name) info = &f;
    if (!info) throw ParseError(at, "unknown function '" + name + "'");
    expect('(');
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() != 1)
      throw ParseError(at, "function '" + name + "' takes 1 argument, got " +
                               std::to_string(args.size()));
    return make_unary(info->fn, args.front(), at);
  }

  NodePtr reference(const std::string& name, std::size_t at) {
    auto it = std::find(params_.begin(), params_.end(), name);
    if (it != params_.end()) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Parameter;
      n->name = name;
      n->index = static_cast<std::size_t>(it - params_.begin());
      n->position = at;
      n->parameter_free = false;
      return n;
    }
    if (auto c = constants_.find(name); c != constants_.end())
      return make_constant(c->second, name, at);
    if (name == "pi") return make_constant(std::numbers::pi, "pi", at);
    throw ParseError(at, "unknown identifier '" + name + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& params_;
  const ConstantMap& constants_;
  std::size_t pos_ = 0;
};

template <typename Scalar>
Scalar lift(double c) {
  if constexpr (is_dual<Scalar>::value) {
    using Inner = decltype(Scalar{}.value);
    return Scalar{lift<Inner>(c), Inner{}};
  } else {
    return c;
  }
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

template <typename Scalar>
Scalar eval_node(const ExprNode& n, std::span<const Scalar> args) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  switch (n.kind) {
    case ExprNode::Kind::Constant:
      return lift<Scalar>(n.value);
    case ExprNode::Kind::Parameter:
      if (n.index >= args.size())
        throw DomainError(n.position, "no value for parameter '" + n.name + "'");
      return args[n.index];
    case ExprNode::Kind::Unary: {
      Scalar a = eval_node(*n.lhs, args);
      double av = primal(a);
      switch (n.fn) {
        case UnaryFn::Neg: return -a;
        case UnaryFn::Sin: return sin(a);
        case UnaryFn::Cos: return cos(a);
        case UnaryFn::Tan:
          if (std::cos(av) == 0.0) throw DomainError(n.position, "tan at a pole");
          return tan(a);
        case UnaryFn::Sinh: return sinh(a);
        case UnaryFn::Cosh: return cosh(a);
        case UnaryFn::Exp: return exp(a);
        case UnaryFn::Log:
          if (!(av > 0.0)) throw DomainError(n.position, "log of non-positive value");
          return log(a);
        case UnaryFn::Sqrt:
          if (av < 0.0) throw DomainError(n.position, "sqrt of negative value");
          if (is_dual<Scalar>::value && av == 0.0)
            throw DomainError(n.position, "sqrt is not differentiable at 0");
          return sqrt(a);
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      Scalar a = eval_node(*n.lhs, args);
      if (n.op == BinaryOp::Pow) {
        double base = primal(a);
        if (n.rhs->parameter_free) {
          double e = eval_node<double>(*n.rhs, {});
          if (!(base > 0.0)) {
            if (!is_integer(e))
              throw DomainError(n.position, "non-integer power of non-positive base");
            if (base == 0.0 && e < 0.0) throw DomainError(n.position, "negative power of zero");
          }
          return pow(a, e);
        }
        if (!(base > 0.0))
          throw DomainError(n.position, "variable exponent needs a positive base");
        Scalar b = eval_node(*n.rhs, args);
        return exp(b * log(a));
      }
      Scalar b = eval_node(*n.rhs, args);
      switch (n.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (primal(b) == 0.0) throw DomainError(n.position, "division by zero");
          return a / b;
        case BinaryOp::Pow: break;
      }
      break;
    }
  }
  throw DomainError(n.position, "malformed node");
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: {
      if (!n.name.empty()) {
        out += n.name;
        return;
      }
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case ExprNode::Kind::Parameter:
      out += n.name;
      return;
    case ExprNode::Kind::Unary:
      if (n.fn == UnaryFn::Neg) {
        out += "(-";
        print_node(*n.lhs, out);
        out += ')';
      } else {
        out += function_name(n.fn);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
      }
      return;
    case ExprNode::Kind::Binary:
      out += '(';
      print_node(*n.lhs, out);
      out += op_symbol(n.op);
      print_node(*n.rhs, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Constant: return a.value == b.value && a.name == b.name;
    case ExprNode::Kind::Parameter: return a.index == b.index && a.name == b.name;
    case ExprNode::Kind::Unary: return a.fn == b.fn && equal_nodes(*a.lhs, *b.lhs);
    case ExprNode::Kind::Binary:
      return a.op == b.op && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
  return false;
}

bool node_depends_on(const ExprNode& n, std::size_t index) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: return false;
    case ExprNode::Kind::Parameter: return n.index == index;
    case ExprNode::Kind::Unary: return node_depends_on(*n.lhs, index);
    case ExprNode::Kind::Binary:
      return node_depends_on(*n.lhs, index) || node_depends_on(*n.rhs, index);
  }
  return false;
}

}  // namespace

Point::Point(std::initializer_list<std::pair<std::string, double>> entries) {
  for (const auto& [name, value] : entries) set(name, value);
}

void Point::set(const std::string& name, double value) {
  for (auto& e : entries_) {
    if (e.first == name) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(name, value);
}

bool Point::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

double Point::at(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.first == name) return e.second;
  throw Error("point has no value for '" + name + "'");
}

std::vector<double> Point::ordered(const std::vector<std::string>& names) const {
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(at(n));
  return out;
}

Expr parse(std::string_view source, const std::vector<std::string>& params,
           const ConstantMap& constants) {
  for (const auto& p : params)
    if (constants.count(p)) throw ParseError(0, "'" + p + "' is both a parameter and a constant");
  Parser parser(source, params, constants);
  return Expr(parser.run(), params);
}

template <typename Scalar>
Scalar evaluate(const Expr& e, std::span<const Scalar> args) {
  if (args.size() < e.num_params()) throw Error("expression needs " + std::to_string(e.num_params()) + " arguments");
  return eval_node<Scalar>(e.root(), args);
}

template double evaluate<double>(const Expr&, std::span<const double>);
template Dual<double> evaluate<Dual<double>>(const Expr&, std::span<const Dual<double>>);
template Dual<Dual<double>> evaluate<Dual<Dual<double>>>(const Expr&,
                                                         std::span<const Dual<Dual<double>>>);

double eval(const Expr& e, std::span<const double> args) { return evaluate<double>(e, args); }

double eval(const Expr& e, const Point& p) {
  auto v = p.ordered(e.params());
  return eval(e, std::span<const double>(v));
}

Eigen::VectorXd gradient(const Expr& e, std::span<const double> args) {
  const std::size_t n = e.num_params();
  Eigen::VectorXd g(n);
  std::vector<Dual<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {args[i], 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    x[i].deriv = 1.0;
    g[static_cast<Eigen::Index>(i)] = evaluate<Dual<double>>(e, x).deriv;
    x[i].deriv = 0.0;
  }
  return g;
}

Eigen::VectorXd gradient(const Expr& e, const Point& p) {
  auto v = p.ordered(e.params());
  return gradient(e, std::span<const double>(v));
}

Eigen::MatrixXd hessian(const Expr& e, std::span<const double> args) {
  using D2 = Dual<Dual<double>>;
  const std::size_t n = e.num_params();
  Eigen::MatrixXd h(n, n);
  std::vector<D2> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = D2{{args[k], 0.0}, {0.0, 0.0}};
  for (std::size_t i = 0; i < n; ++i) {
    x[i].deriv.value = 1.0;
    for (std::size_t j = i; j < n; ++j) {
      x[j].value.deriv = 1.0;
      double hij = evaluate<D2>(e, x).deriv.deriv;
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
      h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = hij;
      x[j].value.deriv = 0.0;
    }
    x[i].deriv.value = 0.0;
  }
  return h;
}

Eigen::MatrixXd hessian(const Expr& e, const Point& p) {
  auto v = p.ordered(e.params());
  return hessian(e, std::span<const double>(v));
}

std::string to_string(const Expr& e) {
  std::string out;
  if (!e.empty()) print_node(e.root(), out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return a.params() == b.params() && equal_nodes(a.root(), b.root());
}

bool depends_on(const Expr& e, std::size_t index) {
  return !e.empty() && node_depends_on(e.root(), index);
}

}  // namespace skewgeo
