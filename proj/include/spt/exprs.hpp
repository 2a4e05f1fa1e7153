#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spt {

/// Coefficient expression language.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?                       right associative
///   atom   := number | 'pi' | 'x' | 'mu' | 'nu'
///           | ('sin' | 'cos' | 'exp' | 'abs') '(' expr ')'
///           | 'piecewise' '(' branch (',' branch)* ')'
///           | '(' expr ')'
///   branch := 'x' ('<=' | '>') constant ':' expr
///
/// Piecewise picks the first branch whose condition holds; the thresholds
/// double as spatial breakpoints for composite quadrature.
namespace ast {

enum class Var { x, mu, nu };
enum class Func { sin, cos, exp, abs };
enum class BinOp { add, sub, mul, div, pow };
enum class Cmp { le, gt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Pi {};
struct Variable {
  Var var;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Func func;
  NodePtr arg;
};
struct Branch {
  Cmp cmp;
  double threshold;
  NodePtr value;
};
struct Piecewise {
  std::vector<Branch> branches;
};

struct Node {
  std::variant<Number, Pi, Variable, Negate, Binary, Call, Piecewise> kind;
};

}  // namespace ast

/// Immutable, shareable expression tree.
class Expr {
 public:
  /// Constant zero.
  Expr();
  explicit Expr(ast::NodePtr root);

  static Expr constant(double value);

  /// Throws EvalError on division by zero or when no piecewise branch matches.
  double eval(double x, double mu = 0.0, double nu = 0.0) const;

  bool depends_on(ast::Var var) const;

  /// Sorted, de-duplicated piecewise thresholds.
  std::vector<double> breakpoints() const;

  /// Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;

  const ast::Node& root() const noexcept { return *root_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  ast::NodePtr root_;
};

/// Throws ParseError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view text);

}  // namespace spt
