#pragma once

// A small expression language for congruence charts.
//
// Grammar (standard precedence; '^' binds tighter than unary minus):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer | '^' '(' ['-'] integer ')')?
//   primary := number ['i'] | 'i' | name | func '(' expr ')' | '(' expr ')'
//   func    := conj | exp | ln
//
// Variables: m1 (the chart coordinate), c1 (its conjugate), u and v (real and
// imaginary parts of the chart coordinate).  Extra names can be allowed when
// parsing, e.g. a profile variable; they behave as constants under
// differentiation unless substituted away.
//
// Error offsets are 1-based byte positions (the column where the problem was
// detected; end of input is reported as length + 1).

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "lh3/series.hpp"

namespace lh3 {

enum class ExprOp { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Conj, Exp, Ln };

enum class Wirtinger { D, Dbar };  // d/d m1 and d/d c1

class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(cd value);
  static Expr variable(const std::string& name);

  // Throws ParseError (SyntaxError / UnknownIdentifier).
  static Expr parse(std::string_view text);
  static Expr parse(std::string_view text,
                    const std::set<std::string>& extra_variables);

  ExprOp op() const { return node_->op; }
  cd constant_value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  int exponent() const { return node_->exponent; }
  const Expr& lhs() const { return *node_->a; }
  const Expr& rhs() const { return *node_->b; }

  bool is_constant() const { return node_->op == ExprOp::Const; }
  bool is_zero() const { return is_constant() && node_->value == cd(0.0); }
  bool is_one() const { return is_constant() && node_->value == cd(1.0); }

  Expr diff(Wirtinger which) const;
  // Derivatives along the real coordinate lines of m1 = u + i v.
  Expr diff_u() const;
  Expr diff_v() const;

  Expr substitute(const std::string& name, const Expr& replacement) const;

  // Names of the variables that occur in the tree.
  std::set<std::string> variables() const;

  // Throws UnknownIdentifier for unbound names, DivisionByZero, DomainError.
  cd eval(const std::map<std::string, cd>& bindings) const;
  // Binds m1 = nu, c1 = conj(nu), u = Re nu, v = Im nu.
  cd eval_at(cd nu) const;
  // Taylor expansion at nu of the given order (exact derivatives).
  Series eval_series(cd nu, int order) const;

  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int n);
  friend Expr conj(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr ln(const Expr& a);

 private:
  struct Node {
    ExprOp op = ExprOp::Const;
    cd value = 0.0;
    std::string name;
    int exponent = 0;
    std::shared_ptr<const Expr> a, b;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(ExprOp op, const Expr* a, const Expr* b, int exponent = 0);

  template <class T, class Leaf>
  T evaluate(const Leaf& leaf) const;

  std::shared_ptr<const Node> node_;
};

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double x);
std::string format_complex(cd z);

}  // namespace lh3
