#pragma once

// Scalar expression language for chart components and warping functions.
//
// Grammar (whitespace is insignificant, identifiers are case-sensitive):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | identifier | function '(' expr ')' | '(' expr ')'
//   function:= sin cos tan exp log sinh cosh tanh sqrt
//
// so `-a^2` is `-(a^2)` and `a^b^c` is `a^(b^c)`.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "warpchen/errors.hpp"
#include "warpchen/hyperdual.hpp"

namespace warpchen {

enum class Op {
  Const,
  Var,
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sinh,
  Cosh,
  Tanh,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;  // Const
  std::string name;    // Var
  std::shared_ptr<const Node> lhs;  // operand of unary ops, left of binary ops
  std::shared_ptr<const Node> rhs;
};

// Immutable expression tree; copies share nodes.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  std::set<std::string> variables() const;

  friend bool operator==(const Expr& a, const Expr& b);

  static Expr constant(double v);
  static Expr variable(std::string name);
  static Expr unary(Op op, const Expr& arg);
  static Expr binary(Op op, const Expr& lhs, const Expr& rhs);

 private:
  std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view source);

// Fully parenthesized text that parses back to a structurally equal tree.
std::string print(const Expr& expr);

const char* op_name(Op op);

template <class S>
using Bindings = std::map<std::string, S, std::less<>>;

namespace detail {

bool is_constant(const Node& node);
double integer_or_nan(double p);

template <class S>
S eval_node(const Node& node, const Bindings<S>& env) {
  using std::cos, std::cosh, std::exp, std::log, std::pow, std::sin, std::sinh, std::sqrt,
      std::tan, std::tanh;
  switch (node.op) {
    case Op::Const:
      return S(node.value);
    case Op::Var: {
      auto it = env.find(node.name);
      if (it == env.end()) throw UnboundVariable("unbound variable '" + node.name + "'");
      return it->second;
    }
    case Op::Add:
      return eval_node(*node.lhs, env) + eval_node(*node.rhs, env);
    case Op::Sub:
      return eval_node(*node.lhs, env) - eval_node(*node.rhs, env);
    case Op::Mul:
      return eval_node(*node.lhs, env) * eval_node(*node.rhs, env);
    case Op::Div: {
      S den = eval_node(*node.rhs, env);
      if (value_of(den) == 0.0) throw DomainError("division by zero");
      return eval_node(*node.lhs, env) / den;
    }
    case Op::Pow: {
      S base = eval_node(*node.lhs, env);
      const double b = value_of(base);
      if (is_constant(*node.rhs)) {
        const double p = eval_node<double>(*node.rhs, {});
        if (b < 0.0 && std::isnan(integer_or_nan(p)))
          throw DomainError("negative base with non-integer exponent");
        if (b == 0.0 && p < 0.0) throw DomainError("division by zero in pow");
        return pow(base, p);
      }
      if (b <= 0.0) throw DomainError("non-positive base with variable exponent");
      S e = eval_node(*node.rhs, env);
      return exp(e * log(base));
    }
    default:
      break;
  }
  S a = eval_node(*node.lhs, env);
  const double x = value_of(a);
  switch (node.op) {
    case Op::Neg:
      return -a;
    case Op::Sin:
      return sin(a);
    case Op::Cos:
      return cos(a);
    case Op::Tan:
      return tan(a);
    case Op::Exp:
      return exp(a);
    case Op::Log:
      if (x <= 0.0) throw DomainError("log of non-positive value");
      return log(a);
    case Op::Sinh:
      return sinh(a);
    case Op::Cosh:
      return cosh(a);
    case Op::Tanh:
      return tanh(a);
    case Op::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value");
      return sqrt(a);
    default:
      throw Error("corrupt expression node");
  }
}

}  // namespace detail

// Evaluates `expr` over any scalar type with the arithmetic and elementary
// functions defined (double, HyperDual, Dual<HyperDual>, ...).
template <class S>
S eval(const Expr& expr, const Bindings<S>& bindings) {
  return detail::eval_node(expr.root(), bindings);
}

}  // namespace warpchen
