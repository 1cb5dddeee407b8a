#include "warpchen/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace warpchen {

namespace {

struct FunctionEntry {
  std::string_view name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},   {"log", Op::Log},
    {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"tanh", Op::Tanh}, {"sqrt", Op::Sqrt},
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
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
    if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Op::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        Op op = lookup_function(name, start);
        ++pos_;
        Expr arg = parse_expr();
        expect(')');
        return Expr::unary(op, arg);
      }
      return Expr::variable(std::move(name));
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw SyntaxError("malformed number", start);
    return Expr::constant(v);
  }

  static Op lookup_function(const std::string& name, std::size_t offset) {
    for (const auto& f : kFunctions)
      if (f.name == name) return f.op;
    throw UnknownFunction("unknown function '" + name + "' at offset " + std::to_string(offset));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

bool nodes_equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Const:
      return a->value == b->value;
    case Op::Var:
      return a->name == b->name;
    default:
      return nodes_equal(a->lhs.get(), b->lhs.get()) && nodes_equal(a->rhs.get(), b->rhs.get());
  }
}

void collect_vars(const Node* n, std::set<std::string>& out) {
  if (!n) return;
  if (n->op == Op::Var) out.insert(n->name);
  collect_vars(n->lhs.get(), out);
  collect_vars(n->rhs.get(), out);
}

void print_node(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::Var:
      out += n.name;
      return;
    case Op::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
      out += '(';
      print_node(*n.lhs, out);
      out += ' ';
      out += op_name(n.op);
      out += ' ';
      print_node(*n.rhs, out);
      out += ')';
      return;
    }
    default:
      out += op_name(n.op);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Neg: return "-";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tanh: return "tanh";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
  }
  return "?";
}

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, const Expr& arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = arg.root_;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, const Expr& lhs, const Expr& rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = lhs.root_;
  n->rhs = rhs.root_;
  return Expr(std::move(n));
}

std::set<std::string> Expr::variables() const {
  std::set<std::string> out;
  collect_vars(root_.get(), out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return nodes_equal(a.root_.get(), b.root_.get()); }

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string print(const Expr& expr) {
  std::string out;
  if (!expr.empty()) print_node(expr.root(), out);
  return out;
}

namespace detail {

bool is_constant(const Node& node) {
  if (node.op == Op::Var) return false;
  if (node.lhs && !is_constant(*node.lhs)) return false;
  if (node.rhs && !is_constant(*node.rhs)) return false;
  return true;
}

double integer_or_nan(double p) { return (std::isfinite(p) && std::floor(p) == p) ? p : std::nan(""); }

}  // namespace detail

}  // namespace warpchen
