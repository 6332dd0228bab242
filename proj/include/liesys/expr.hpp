#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace liesys::expr {

enum class Op { add, sub, mul, div, pow };
enum class Func { sin, cos, tan, exp, log, sqrt, abs };

const char* func_name(Func f);

// Immutable expression tree in one variable t. Trees are shared on copy;
// all operations are pure, so evaluation of the same (tree, t) pair is
// reproducible bit for bit.
class Expression {
 public:
  struct Node;  // defined in expr.cpp

  Expression();  // literal 0

  // Grammar: + - * / ^ with usual precedence, ^ right-associative and
  // binding tighter than unary minus; functions sin cos tan exp log sqrt
  // abs; constants pi and e; variable t. Throws Error(syntax) with a byte
  // offset, or Error(unknown_identifier).
  static Expression parse(std::string_view source);

  // Tree constructors, used by parse() and by callers composing
  // expressions programmatically. literal() requires a finite value >= 0
  // (negative constants are spelled negate(literal(...)) so that printing
  // round-trips).
  static Expression literal(double value);
  static Expression variable();
  static Expression pi();
  static Expression euler();
  static Expression negate(Expression operand);
  static Expression binary(Op op, Expression lhs, Expression rhs);
  static Expression call(Func f, Expression argument);

  // Evaluate at t. Throws Error(domain) for log/sqrt/pow/division domain
  // violations and Error(non_finite) when the result overflows.
  double operator()(double t) const;

  // Exact derivative by recursive differentiation rules. Correct wherever
  // both trees are defined; no simplification promises beyond trivial
  // zero/one folding.
  Expression derivative() const;

  // Canonical text with minimal parentheses; parse(str()) rebuilds a
  // structurally identical tree.
  std::string str() const;

  bool same_tree(const Expression& other) const;
  bool is_literal() const;
  double literal_value() const;  // throws unless is_literal()

 private:
  explicit Expression(std::shared_ptr<const Node> root);
  static Expression diff(const Node& n);

  std::shared_ptr<const Node> root_;
};

}  // namespace liesys::expr
