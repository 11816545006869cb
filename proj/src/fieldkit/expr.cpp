#include "offdiag/fieldkit/expr.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "offdiag/fieldkit/lexer.hpp"

namespace offdiag {

const char* var_name(Var v) {
  switch (v) {
    case Var::X1: return "x1";
    case Var::X2: return "x2";
    case Var::T: return "t";
    case Var::Y3: return "y3";
    case Var::Z: return "z";
    case Var::Zeta: return "zeta";
  }
  return "?";
}

JetBinding JetBinding::spacetime(double x1, double x2, double t) {
  JetBinding b;
  b.value[0] = x1;
  b.value[1] = x2;
  b.value[2] = t;
  return b;
}

JetBinding JetBinding::line(Var v, double s) {
  JetBinding b;
  b.dir = {-1, -1, -1, -1, -1, -1};
  b.value[static_cast<std::size_t>(v)] = s;
  b.dir[static_cast<std::size_t>(v)] = kX1;
  return b;
}

namespace {

NodePtr make(NodeKind k, NodePtr a = nullptr, NodePtr b = nullptr, std::size_t off = 0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->offset = off;
  return n;
}

NodePtr make_const(double v, std::size_t off = 0) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Const;
  n->value = v;
  n->offset = off;
  return n;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* func_name(NodeKind k) {
  switch (k) {
    case NodeKind::Neg: return "neg";
    case NodeKind::Exp: return "exp";
    case NodeKind::Ln: return "ln";
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Sqrt: return "sqrt";
    case NodeKind::Abs: return "abs";
    default: return nullptr;
  }
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Const:
      if (n.value < 0) {
        out += "(" + fmt_double(n.value) + ")";
      } else {
        out += fmt_double(n.value);
      }
      return;
    case NodeKind::Variable:
      out += var_name(n.var);
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      char op = n.kind == NodeKind::Add ? '+' : n.kind == NodeKind::Sub ? '-' : n.kind == NodeKind::Mul ? '*' : '/';
      out += "(";
      print(*n.a, out);
      out += ' ';
      out += op;
      out += ' ';
      print(*n.b, out);
      out += ")";
      return;
    }
    case NodeKind::Pow:
      out += "(";
      print(*n.a, out);
      out += "^(" + fmt_double(n.value) + "))";
      return;
    default:
      out += func_name(n.kind);
      out += "(";
      print(*n.a, out);
      out += ")";
      return;
  }
}

std::string node_text(const Node& n) {
  std::string s;
  print(n, s);
  return s;
}

[[noreturn]] void domain_fail(const Node& n, const std::string& why) {
  throw DomainError(why + " in node " + node_text(n) + " (byte " + std::to_string(n.offset) + ")");
}

double eval_node(const Node& n, const std::array<double, kNumVars>& v) {
  switch (n.kind) {
    case NodeKind::Const: return n.value;
    case NodeKind::Variable: return v[static_cast<std::size_t>(n.var)];
    case NodeKind::Neg: return -eval_node(*n.a, v);
    case NodeKind::Exp: return std::exp(eval_node(*n.a, v));
    case NodeKind::Ln: {
      double x = eval_node(*n.a, v);
      if (!(x > 0)) domain_fail(n, "ln of non-positive value " + fmt_double(x));
      return std::log(x);
    }
    case NodeKind::Sin: return std::sin(eval_node(*n.a, v));
    case NodeKind::Cos: return std::cos(eval_node(*n.a, v));
    case NodeKind::Sqrt: {
      double x = eval_node(*n.a, v);
      if (x < 0) domain_fail(n, "sqrt of negative value " + fmt_double(x));
      return std::sqrt(x);
    }
    case NodeKind::Abs: return std::fabs(eval_node(*n.a, v));
    case NodeKind::Add: return eval_node(*n.a, v) + eval_node(*n.b, v);
    case NodeKind::Sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
    case NodeKind::Mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
    case NodeKind::Div: {
      double d = eval_node(*n.b, v);
      if (d == 0) domain_fail(n, "division by zero");
      return eval_node(*n.a, v) / d;
    }
    case NodeKind::Pow: {
      double x = eval_node(*n.a, v);
      double p = n.value;
      if (x < 0 && std::floor(p) != p) domain_fail(n, "non-integer power of negative value");
      if (x == 0 && p < 0) domain_fail(n, "negative power of zero");
      return std::pow(x, p);
    }
  }
  return 0.0;
}

Jet jet_node(const Node& n, const JetBinding& b, int order) {
  try {
    switch (n.kind) {
      case NodeKind::Const: return Jet(n.value, order);
      case NodeKind::Variable: {
        auto i = static_cast<std::size_t>(n.var);
        if (b.dir[i] < 0) return Jet(b.value[i], order);
        return Jet::variable(b.dir[i], b.value[i], order);
      }
      case NodeKind::Neg: return -jet_node(*n.a, b, order);
      case NodeKind::Exp: return exp(jet_node(*n.a, b, order));
      case NodeKind::Ln: return log(jet_node(*n.a, b, order));
      case NodeKind::Sin: return sin(jet_node(*n.a, b, order));
      case NodeKind::Cos: return cos(jet_node(*n.a, b, order));
      case NodeKind::Sqrt: return sqrt(jet_node(*n.a, b, order));
      case NodeKind::Abs: return abs(jet_node(*n.a, b, order));
      case NodeKind::Add: return jet_node(*n.a, b, order) + jet_node(*n.b, b, order);
      case NodeKind::Sub: return jet_node(*n.a, b, order) - jet_node(*n.b, b, order);
      case NodeKind::Mul: return jet_node(*n.a, b, order) * jet_node(*n.b, b, order);
      case NodeKind::Div: return jet_node(*n.a, b, order) / jet_node(*n.b, b, order);
      case NodeKind::Pow: return pow(jet_node(*n.a, b, order), n.value);
    }
  } catch (const DomainError& e) {
    std::string msg = e.what();
    if (msg.find(" in node ") != std::string::npos) throw;
    domain_fail(n, msg);
  }
  return Jet(0.0, order);
}

bool depends(const Node& n, Var v) {
  if (n.kind == NodeKind::Variable) return n.var == v;
  if (n.kind == NodeKind::Const) return false;
  return (n.a && depends(*n.a, v)) || (n.b && depends(*n.b, v));
}

bool has_variables(const Node& n) {
  if (n.kind == NodeKind::Variable) return true;
  if (n.kind == NodeKind::Const) return false;
  return (n.a && has_variables(*n.a)) || (n.b && has_variables(*n.b));
}

class Parser {
 public:
  Parser(std::string_view text, VarSet allowed, const ConstantTable* constants)
      : toks_(tokenize(text)), allowed_(allowed), constants_(constants) {}

  NodePtr parse() {
    if (toks_.size() == 1) throw SyntaxError("empty expression", 0);
    NodePtr e = expr();
    if (peek().kind != TokKind::End)
      throw SyntaxError(std::string("unexpected ") + token_name(peek().kind), peek().offset);
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarSet allowed_;
  const ConstantTable* constants_;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  void expect(TokKind k) {
    if (peek().kind != k)
      throw SyntaxError(std::string("expected ") + token_name(k) + ", found " + token_name(peek().kind),
                        peek().offset);
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == TokKind::Plus || peek().kind == TokKind::Minus) {
      const Token& op = next();
      NodePtr rhs = term();
      lhs = make(op.kind == TokKind::Plus ? NodeKind::Add : NodeKind::Sub, lhs, rhs, op.offset);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == TokKind::Star || peek().kind == TokKind::Slash) {
      const Token& op = next();
      NodePtr rhs = unary();
      lhs = make(op.kind == TokKind::Star ? NodeKind::Mul : NodeKind::Div, lhs, rhs, op.offset);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == TokKind::Minus) {
      std::size_t off = next().offset;
      NodePtr a = unary();
      if (a->kind == NodeKind::Const) return make_const(-a->value, off);
      return make(NodeKind::Neg, a, nullptr, off);
    }
    if (peek().kind == TokKind::Plus) {
      next();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek().kind == TokKind::Caret) {
      const Token& op = next();
      std::size_t exp_off = peek().offset;
      NodePtr ex = unary();
      if (has_variables(*ex)) throw SyntaxError("exponent of '^' must be a constant", exp_off);
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Pow;
      n->a = base;
      n->value = eval_node(*ex, {});
      n->offset = op.offset;
      return n;
    }
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == TokKind::Number) {
      next();
      return make_const(t.number, t.offset);
    }
    if (t.kind == TokKind::LParen) {
      next();
      NodePtr e = expr();
      expect(TokKind::RParen);
      return e;
    }
    if (t.kind == TokKind::Ident) {
      next();
      if (peek().kind == TokKind::LParen) {
        NodeKind k;
        if (t.text == "neg") k = NodeKind::Neg;
        else if (t.text == "exp") k = NodeKind::Exp;
        else if (t.text == "ln") k = NodeKind::Ln;
        else if (t.text == "sin") k = NodeKind::Sin;
        else if (t.text == "cos") k = NodeKind::Cos;
        else if (t.text == "sqrt") k = NodeKind::Sqrt;
        else if (t.text == "abs") k = NodeKind::Abs;
        else throw SyntaxError("unknown function '" + t.text + "'", t.offset);
        next();
        NodePtr a = expr();
        expect(TokKind::RParen);
        return make(k, a, nullptr, t.offset);
      }
      static const std::pair<const char*, Var> vars[] = {{"x1", Var::X1}, {"x2", Var::X2}, {"t", Var::T},
                                                         {"y3", Var::Y3}, {"z", Var::Z},   {"zeta", Var::Zeta}};
      for (const auto& [name, v] : vars) {
        if (t.text == name) {
          if (!allowed_.contains(v)) throw SyntaxError("variable '" + t.text + "' is not allowed here", t.offset);
          auto n = std::make_shared<Node>();
          n->kind = NodeKind::Variable;
          n->var = v;
          n->offset = t.offset;
          return n;
        }
      }
      if (constants_) {
        auto it = constants_->find(t.text);
        if (it != constants_->end()) return make_const(it->second, t.offset);
      }
      if (t.text == "pi") return make_const(M_PI, t.offset);
      throw SyntaxError("unknown identifier '" + t.text + "'", t.offset);
    }
    if (t.kind == TokKind::End) throw SyntaxError("unexpected end of expression", t.offset);
    throw SyntaxError(std::string("unexpected ") + token_name(t.kind), t.offset);
  }
};

}  // namespace

double Expr::eval(const std::array<double, kNumVars>& values) const { return eval_node(*root_, values); }

double Expr::eval(double x1, double x2, double t) const {
  std::array<double, kNumVars> v{};
  v[0] = x1;
  v[1] = x2;
  v[2] = t;
  return eval_node(*root_, v);
}

Jet Expr::jet(const JetBinding& b, int order) const { return jet_node(*root_, b, order); }

std::string Expr::str() const { return node_text(*root_); }

bool Expr::depends_on(Var v) const { return depends(*root_, v); }

Expr Expr::constant(double v) { return Expr(make_const(v)); }

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->var = v;
  return Expr(n);
}

Expr parse_expression(std::string_view text, VarSet allowed, const ConstantTable* constants) {
  Parser p(text, allowed, constants);
  return Expr(p.parse());
}

Jet evaluate_jet(const Expr& e, const std::array<double, 3>& point, int order) {
  return e.jet(JetBinding::spacetime(point[0], point[1], point[2]), order);
}

}  // namespace offdiag
