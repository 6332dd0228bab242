#include "liesys/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "liesys/error.hpp"

namespace liesys::expr {

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
  }
  return "?";
}

struct Expression::Node {
  enum class Kind { literal, variable, pi, euler, negate, binary, call };
  Kind kind;
  double value = 0.0;  // literal
  Op op = Op::add;     // binary
  Func func = Func::sin;
  std::shared_ptr<const Node> lhs;  // binary lhs, negate/call operand
  std::shared_ptr<const Node> rhs;  // binary rhs
};

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

namespace {

NodePtr make_node(Expression::Node n) {
  return std::make_shared<const Expression::Node>(std::move(n));
}

bool is_zero(const NodePtr& n) {
  return n->kind == Kind::literal && n->value == 0.0;
}

bool is_one(const NodePtr& n) {
  return n->kind == Kind::literal && n->value == 1.0;
}

}  // namespace

Expression::Expression() : root_(make_node({.kind = Kind::literal})) {}

Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::literal(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw Error(ErrorKind::usage, "literal must be finite and non-negative");
  return Expression(make_node({.kind = Kind::literal, .value = value}));
}

Expression Expression::variable() {
  return Expression(make_node({.kind = Kind::variable}));
}

Expression Expression::pi() {
  return Expression(make_node({.kind = Kind::pi}));
}

Expression Expression::euler() {
  return Expression(make_node({.kind = Kind::euler}));
}

Expression Expression::negate(Expression operand) {
  if (is_zero(operand.root_)) return operand;
  return Expression(make_node({.kind = Kind::negate, .lhs = operand.root_}));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  // Trivial folds keep derivative trees readable; anything fancier is out
  // of scope on purpose.
  switch (op) {
    case Op::add:
      if (is_zero(lhs.root_)) return rhs;
      if (is_zero(rhs.root_)) return lhs;
      break;
    case Op::sub:
      if (is_zero(rhs.root_)) return lhs;
      break;
    case Op::mul:
      if (is_zero(lhs.root_) || is_zero(rhs.root_)) return literal(0.0);
      if (is_one(lhs.root_)) return rhs;
      if (is_one(rhs.root_)) return lhs;
      break;
    case Op::div:
      if (is_zero(lhs.root_)) return lhs;
      if (is_one(rhs.root_)) return lhs;
      break;
    case Op::pow:
      if (is_one(rhs.root_)) return lhs;
      break;
  }
  return Expression(
      make_node({.kind = Kind::binary, .op = op, .lhs = lhs.root_, .rhs = rhs.root_}));
}

Expression Expression::call(Func f, Expression argument) {
  return Expression(make_node({.kind = Kind::call, .func = f, .lhs = argument.root_}));
}

bool Expression::is_literal() const { return root_->kind == Kind::literal; }

double Expression::literal_value() const {
  if (!is_literal()) throw Error(ErrorKind::usage, "expression is not a literal");
  return root_->value;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
  enum class Type { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Type type;
  size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    size_t at = pos_;
    if (pos_ >= src_.size()) return {Token::Type::end, at};
    char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Type::plus, at};
      case '-': ++pos_; return {Token::Type::minus, at};
      case '*': ++pos_; return {Token::Type::star, at};
      case '/': ++pos_; return {Token::Type::slash, at};
      case '^': ++pos_; return {Token::Type::caret, at};
      case '(': ++pos_; return {Token::Type::lparen, at};
      case ')': ++pos_; return {Token::Type::rparen, at};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      Token t{Token::Type::ident, at};
      t.ident = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    std::ostringstream os;
    os << "unexpected character '" << c << "' at offset " << at;
    throw Error(ErrorKind::syntax, os.str());
  }

 private:
  Token lex_number(size_t at) {
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) {
      std::ostringstream os;
      os << "malformed number at offset " << at;
      throw Error(ErrorKind::syntax, os.str());
    }
    pos_ += static_cast<size_t>(ptr - begin);
    Token t{Token::Type::number, at};
    t.number = value;
    return t;
  }

  std::string_view src_;
  size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  Expression run() {
    Expression e = parse_sum();
    if (current_.type != Token::Type::end)
      fail("expected an operator or end of input");
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& expected) {
    std::ostringstream os;
    os << expected << " at offset " << current_.offset;
    throw Error(ErrorKind::syntax, os.str());
  }

  Expression parse_sum() {
    Expression lhs = parse_product();
    for (;;) {
      if (current_.type == Token::Type::plus) {
        advance();
        lhs = Expression::binary(Op::add, lhs, parse_product());
      } else if (current_.type == Token::Type::minus) {
        advance();
        lhs = Expression::binary(Op::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_product() {
    Expression lhs = parse_factor();
    for (;;) {
      if (current_.type == Token::Type::star) {
        advance();
        lhs = Expression::binary(Op::mul, lhs, parse_factor());
      } else if (current_.type == Token::Type::slash) {
        advance();
        lhs = Expression::binary(Op::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  // '^' binds tighter than unary minus, so -t^2 is -(t^2).
  Expression parse_factor() {
    if (current_.type == Token::Type::minus) {
      advance();
      return Expression::negate(parse_factor());
    }
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_atom();
    if (current_.type == Token::Type::caret) {
      advance();
      return Expression::binary(Op::pow, base, parse_factor());  // right-assoc
    }
    return base;
  }

  Expression parse_atom() {
    switch (current_.type) {
      case Token::Type::number: {
        double v = current_.number;
        advance();
        return Expression::literal(v);
      }
      case Token::Type::lparen: {
        advance();
        Expression e = parse_sum();
        if (current_.type != Token::Type::rparen) fail("expected ')'");
        advance();
        return e;
      }
      case Token::Type::ident:
        return parse_ident();
      default:
        fail("expected a number, 't', 'pi', 'e', a function call, '(' or '-'");
    }
  }

  Expression parse_ident() {
    std::string name = current_.ident;
    size_t at = current_.offset;
    advance();
    if (name == "t") return Expression::variable();
    if (name == "pi") return Expression::pi();
    if (name == "e") return Expression::euler();
    Func f;
    if (name == "sin") f = Func::sin;
    else if (name == "cos") f = Func::cos;
    else if (name == "tan") f = Func::tan;
    else if (name == "exp") f = Func::exp;
    else if (name == "log") f = Func::log;
    else if (name == "sqrt") f = Func::sqrt;
    else if (name == "abs") f = Func::abs;
    else {
      std::ostringstream os;
      os << "'" << name << "' at offset " << at;
      throw Error(ErrorKind::unknown_identifier, os.str());
    }
    if (current_.type != Token::Type::lparen) fail("expected '(' after function name");
    advance();
    Expression arg = parse_sum();
    if (current_.type != Token::Type::rparen) fail("expected ')'");
    advance();
    return Expression::call(f, arg);
  }

  Lexer lexer_;
  Token current_{Token::Type::end, 0};
};

}  // namespace

Expression Expression::parse(std::string_view source) {
  return Parser(source).run();
}

// ------------------------------------------------------------- evaluation

namespace {

[[noreturn]] void domain_fail(const std::string& what, double t) {
  throw Error(ErrorKind::domain, what, t);
}

double eval_node(const Expression::Node& n, double t) {
  switch (n.kind) {
    case Kind::literal: return n.value;
    case Kind::variable: return t;
    case Kind::pi: return std::numbers::pi;
    case Kind::euler: return std::numbers::e;
    case Kind::negate: return -eval_node(*n.lhs, t);
    case Kind::binary: {
      double a = eval_node(*n.lhs, t);
      double b = eval_node(*n.rhs, t);
      switch (n.op) {
        case Op::add: return a + b;
        case Op::sub: return a - b;
        case Op::mul: return a * b;
        case Op::div:
          if (b == 0.0) domain_fail("division by zero", t);
          return a / b;
        case Op::pow: {
          if (a == 0.0 && b < 0.0) domain_fail("zero raised to a negative power", t);
          if (a < 0.0 && b != std::floor(b))
            domain_fail("negative base with non-integer exponent", t);
          return std::pow(a, b);
        }
      }
      break;
    }
    case Kind::call: {
      double a = eval_node(*n.lhs, t);
      switch (n.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::tan: return std::tan(a);
        case Func::exp: return std::exp(a);
        case Func::log:
          if (a <= 0.0) domain_fail("log of a non-positive value", t);
          return std::log(a);
        case Func::sqrt:
          if (a < 0.0) domain_fail("sqrt of a negative value", t);
          return std::sqrt(a);
        case Func::abs: return std::fabs(a);
      }
      break;
    }
  }
  throw Error(ErrorKind::internal, "corrupt expression node");
}

}  // namespace

double Expression::operator()(double t) const {
  double v = eval_node(*root_, t);
  if (!std::isfinite(v))
    throw Error(ErrorKind::non_finite, "expression value overflowed", t);
  return v;
}

// ---------------------------------------------------------- differentiation

Expression Expression::diff(const Node& n) {
  using E = Expression;
  switch (n.kind) {
    case Kind::literal:
    case Kind::pi:
    case Kind::euler:
      return E::literal(0.0);
    case Kind::variable:
      return E::literal(1.0);
    case Kind::negate:
      return E::negate(diff(*n.lhs));
    case Kind::binary: {
      E u{n.lhs}, v{n.rhs};
      E du = diff(*n.lhs), dv = diff(*n.rhs);
      switch (n.op) {
        case Op::add: return E::binary(Op::add, du, dv);
        case Op::sub: return E::binary(Op::sub, du, dv);
        case Op::mul:
          return E::binary(Op::add, E::binary(Op::mul, du, v),
                           E::binary(Op::mul, u, dv));
        case Op::div:
          return E::binary(
              Op::div,
              E::binary(Op::sub, E::binary(Op::mul, du, v),
                        E::binary(Op::mul, u, dv)),
              E::binary(Op::pow, v, E::literal(2.0)));
        case Op::pow: {
          if (n.rhs->kind == Kind::literal) {
            // d(u^c) = c u^(c-1) u'
            double c = n.rhs->value;
            E exponent = c >= 1.0 ? E::literal(c - 1.0)
                                  : E::binary(Op::sub, E::literal(c), E::literal(1.0));
            E factor = E::binary(Op::pow, u, exponent);
            return E::binary(Op::mul, E::binary(Op::mul, E::literal(c), factor), du);
          }
          // d(u^v) = u^v (v' log u + v u'/u)
          E self = E::binary(Op::pow, u, v);
          E term1 = E::binary(Op::mul, dv, E::call(Func::log, u));
          E term2 = E::binary(Op::mul, v, E::binary(Op::div, du, u));
          return E::binary(Op::mul, self, E::binary(Op::add, term1, term2));
        }
      }
      break;
    }
    case Kind::call: {
      E u{n.lhs};
      E du = diff(*n.lhs);
      switch (n.func) {
        case Func::sin:
          return E::binary(Op::mul, E::call(Func::cos, u), du);
        case Func::cos:
          return E::negate(E::binary(Op::mul, E::call(Func::sin, u), du));
        case Func::tan:
          return E::binary(Op::div, du,
                           E::binary(Op::pow, E::call(Func::cos, u), E::literal(2.0)));
        case Func::exp:
          return E::binary(Op::mul, E::call(Func::exp, u), du);
        case Func::log:
          return E::binary(Op::div, du, u);
        case Func::sqrt:
          return E::binary(Op::div, du,
                           E::binary(Op::mul, E::literal(2.0), E::call(Func::sqrt, u)));
        case Func::abs:
          // sign(u) u'; evaluating at u = 0 raises the division domain error.
          return E::binary(Op::mul, E::binary(Op::div, u, E::call(Func::abs, u)), du);
      }
      break;
    }
  }
  throw Error(ErrorKind::internal, "corrupt expression node");
}

Expression Expression::derivative() const { return diff(*root_); }

// ----------------------------------------------------------------- printing

namespace {

// Precedence levels used for minimal parenthesisation.
// 1: + -, 2: * /, 3: unary minus, 4: ^, 5: atoms.
int node_prec(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::binary:
      switch (n.op) {
        case Op::add:
        case Op::sub: return 1;
        case Op::mul:
        case Op::div: return 2;
        case Op::pow: return 4;
      }
      return 1;
    case Kind::negate: return 3;
    default: return 5;
  }
}

void print_number(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  os.write(buf, ptr - buf);
}

void print_node(std::ostream& os, const Expression::Node& n, int context) {
  int prec = node_prec(n);
  bool parens = prec < context;
  if (parens) os << '(';
  switch (n.kind) {
    case Kind::literal: print_number(os, n.value); break;
    case Kind::variable: os << 't'; break;
    case Kind::pi: os << "pi"; break;
    case Kind::euler: os << 'e'; break;
    case Kind::negate:
      os << '-';
      print_node(os, *n.lhs, 4);  // parenthesise anything looser than '^'
      break;
    case Kind::binary: {
      const char* sym = "";
      int lc = prec, rc = prec + 1;  // left-assoc default
      switch (n.op) {
        case Op::add: sym = " + "; break;
        case Op::sub: sym = " - "; break;
        case Op::mul: sym = "*"; break;
        case Op::div: sym = "/"; break;
        case Op::pow:
          sym = "^";
          lc = prec + 1;  // (a^b)^c keeps parens on the left
          rc = prec;      // right-associative
          break;
      }
      print_node(os, *n.lhs, lc);
      os << sym;
      print_node(os, *n.rhs, rc);
      break;
    }
    case Kind::call:
      os << func_name(n.func) << '(';
      print_node(os, *n.lhs, 0);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string Expression::str() const {
  std::ostringstream os;
  print_node(os, *root_, 0);
  return os.str();
}

bool Expression::same_tree(const Expression& other) const {
  struct Cmp {
    static bool eq(const Node& a, const Node& b) {
      if (a.kind != b.kind) return false;
      switch (a.kind) {
        case Kind::literal: return a.value == b.value;
        case Kind::variable:
        case Kind::pi:
        case Kind::euler: return true;
        case Kind::negate: return eq(*a.lhs, *b.lhs);
        case Kind::binary:
          return a.op == b.op && eq(*a.lhs, *b.lhs) && eq(*a.rhs, *b.rhs);
        case Kind::call: return a.func == b.func && eq(*a.lhs, *b.lhs);
      }
      return false;
    }
  };
  return Cmp::eq(*root_, *other.root_);
}

}  // namespace liesys::expr
