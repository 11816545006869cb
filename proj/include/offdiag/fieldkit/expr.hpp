#pragma once
// Closed-form scalar fields written in the expression DSL.
//
// Grammar (see docs/grammar.md):
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]      exponent must fold to a constant
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "offdiag/fieldkit/jet.hpp"

namespace offdiag {

enum class Var : int { X1 = 0, X2 = 1, T = 2, Y3 = 3, Z = 4, Zeta = 5 };
inline constexpr int kNumVars = 6;

const char* var_name(Var v);

/// Bitmask of allowed variables.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vs) {
    for (Var v : vs) bits_ |= 1u << static_cast<int>(v);
  }
  constexpr bool contains(Var v) const { return bits_ & (1u << static_cast<int>(v)); }
  static constexpr VarSet spacetime() { return {Var::X1, Var::X2, Var::T}; }
  static constexpr VarSet all() { return {Var::X1, Var::X2, Var::T, Var::Y3, Var::Z, Var::Zeta}; }

 private:
  std::uint32_t bits_ = 0;
};

enum class NodeKind { Const, Variable, Neg, Exp, Ln, Sin, Cos, Sqrt, Abs, Add, Sub, Mul, Div, Pow };

struct Node {
  NodeKind kind;
  double value = 0.0;  // Const value, or the exponent for Pow
  Var var = Var::X1;
  std::shared_ptr<const Node> a, b;
  std::size_t offset = 0;  // byte offset of the node in the parsed text
};

using NodePtr = std::shared_ptr<const Node>;

/// Values and jet directions for every DSL variable. A variable with
/// dir < 0 enters as a constant.
struct JetBinding {
  std::array<double, kNumVars> value{};
  std::array<int, kNumVars> dir{{kX1, kX2, kT, -1, -1, -1}};

  static JetBinding spacetime(double x1, double x2, double t);
  /// One-dimensional binding: variable v is the only jet direction (kX1).
  static JetBinding line(Var v, double s);
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  bool empty() const { return !root_; }
  const NodePtr& root() const { return root_; }

  double eval(const std::array<double, kNumVars>& values) const;
  double eval(double x1, double x2, double t) const;
  Jet jet(const JetBinding& b, int order) const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string str() const;

  bool depends_on(Var v) const;

  static Expr constant(double v);
  static Expr variable(Var v);

 private:
  NodePtr root_;
};

using ConstantTable = std::map<std::string, double, std::less<>>;

/// Parse text over the allowed variables. Identifiers found in `constants`
/// are substituted as numeric constants.
Expr parse_expression(std::string_view text, VarSet allowed, const ConstantTable* constants = nullptr);

/// Value and all partials of total order <= order at (x1, x2, t).
Jet evaluate_jet(const Expr& e, const std::array<double, 3>& point, int order);

}  // namespace offdiag
