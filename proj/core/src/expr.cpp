#include "lh3/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "lh3/errors.hpp"

namespace lh3 {

namespace {

const cd kI(0.0, 1.0);

bool is_conjugate_free_name(const std::string& name) {
  return name == "u" || name == "v";
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(cd z) {
  if (z.imag() == 0.0) return format_double(z.real());
  if (z.real() == 0.0) return format_double(z.imag()) + "i";
  std::string im = format_double(std::abs(z.imag()));
  return "(" + format_double(z.real()) + (z.imag() < 0 ? " - " : " + ") + im +
         "i)";
}

Expr Expr::constant(cd value) {
  auto n = std::make_shared<Node>();
  n->op = ExprOp::Const;
  n->value = value;
  return Expr(n);
}

Expr Expr::variable(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->op = ExprOp::Var;
  n->name = name;
  return Expr(n);
}

Expr Expr::make(ExprOp op, const Expr* a, const Expr* b, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->exponent = exponent;
  if (a) n->a = std::make_shared<const Expr>(*a);
  if (b) n->b = std::make_shared<const Expr>(*b);
  return Expr(n);
}

// Builders with constant folding and trivial identities only.

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() + b.constant_value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make(ExprOp::Add, &a, &b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() - b.constant_value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make(ExprOp::Sub, &a, &b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() * b.constant_value());
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::make(ExprOp::Mul, &a, &b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != cd(0.0))
    return Expr::constant(a.constant_value() / b.constant_value());
  if (a.is_zero() && !b.is_zero()) return Expr::constant(0.0);
  if (b.is_one()) return a;
  return Expr::make(ExprOp::Div, &a, &b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (a.op() == ExprOp::Neg) return a.lhs();
  return Expr::make(ExprOp::Neg, &a, nullptr);
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  if (a.is_constant() && !(a.is_zero() && n < 0))
    return Expr::constant(std::pow(a.constant_value(), n));
  return Expr::make(ExprOp::Pow, &a, nullptr, n);
}

Expr conj(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::conj(a.constant_value()));
  if (a.op() == ExprOp::Conj) return a.lhs();
  if (a.op() == ExprOp::Var && is_conjugate_free_name(a.name())) return a;
  return Expr::make(ExprOp::Conj, &a, nullptr);
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.constant_value()));
  return Expr::make(ExprOp::Exp, &a, nullptr);
}

Expr ln(const Expr& a) {
  if (a.is_constant() && a.constant_value() != cd(0.0))
    return Expr::constant(std::log(a.constant_value()));
  return Expr::make(ExprOp::Ln, &a, nullptr);
}

Expr Expr::diff(Wirtinger which) const {
  const bool d = which == Wirtinger::D;
  switch (op()) {
    case ExprOp::Const:
      return constant(0.0);
    case ExprOp::Var:
      if (name() == "m1") return constant(d ? 1.0 : 0.0);
      if (name() == "c1") return constant(d ? 0.0 : 1.0);
      if (name() == "u") return constant(0.5);
      if (name() == "v") return constant(d ? -0.5 * kI : 0.5 * kI);
      return constant(0.0);
    case ExprOp::Neg:
      return -lhs().diff(which);
    case ExprOp::Add:
      return lhs().diff(which) + rhs().diff(which);
    case ExprOp::Sub:
      return lhs().diff(which) - rhs().diff(which);
    case ExprOp::Mul:
      return lhs().diff(which) * rhs() + lhs() * rhs().diff(which);
    case ExprOp::Div:
      return (lhs().diff(which) * rhs() - lhs() * rhs().diff(which)) /
             pow(rhs(), 2);
    case ExprOp::Pow:
      return constant(double(exponent())) * pow(lhs(), exponent() - 1) *
             lhs().diff(which);
    case ExprOp::Conj:
      // d conj(f) = conj(dbar f) and dbar conj(f) = conj(d f).
      return conj(lhs().diff(d ? Wirtinger::Dbar : Wirtinger::D));
    case ExprOp::Exp:
      return *this * lhs().diff(which);
    case ExprOp::Ln:
      return lhs().diff(which) / lhs();
  }
  return constant(0.0);
}

Expr Expr::diff_u() const { return diff(Wirtinger::D) + diff(Wirtinger::Dbar); }

Expr Expr::diff_v() const {
  return constant(kI) * (diff(Wirtinger::D) - diff(Wirtinger::Dbar));
}

Expr Expr::substitute(const std::string& var, const Expr& replacement) const {
  switch (op()) {
    case ExprOp::Const:
      return *this;
    case ExprOp::Var:
      return name() == var ? replacement : *this;
    case ExprOp::Neg:
      return -lhs().substitute(var, replacement);
    case ExprOp::Add:
      return lhs().substitute(var, replacement) + rhs().substitute(var, replacement);
    case ExprOp::Sub:
      return lhs().substitute(var, replacement) - rhs().substitute(var, replacement);
    case ExprOp::Mul:
      return lhs().substitute(var, replacement) * rhs().substitute(var, replacement);
    case ExprOp::Div:
      return lhs().substitute(var, replacement) / rhs().substitute(var, replacement);
    case ExprOp::Pow:
      return pow(lhs().substitute(var, replacement), exponent());
    case ExprOp::Conj:
      return conj(lhs().substitute(var, replacement));
    case ExprOp::Exp:
      return exp(lhs().substitute(var, replacement));
    case ExprOp::Ln:
      return ln(lhs().substitute(var, replacement));
  }
  return *this;
}

std::set<std::string> Expr::variables() const {
  std::set<std::string> out;
  std::vector<const Expr*> stack{this};
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    if (e->op() == ExprOp::Var) out.insert(e->name());
    if (e->node_->a) stack.push_back(e->node_->a.get());
    if (e->node_->b) stack.push_back(e->node_->b.get());
  }
  return out;
}

namespace {

cd checked_divide(cd a, cd b) {
  if (std::abs(b) <= 1e-300)
    throw Error(ErrorKind::DivisionByZero, "division by zero in expression");
  return a / b;
}

Series checked_divide(const Series& a, const Series& b) {
  if (std::abs(b.value()) <= 1e-300)
    throw Error(ErrorKind::DivisionByZero, "division by zero in expression");
  return a / b;
}

cd checked_log(cd a) {
  if (std::abs(a) == 0.0)
    throw Error(ErrorKind::DomainError, "ln(0) in expression");
  return std::log(a);
}

Series checked_log(const Series& a) {
  if (std::abs(a.value()) == 0.0)
    throw Error(ErrorKind::DomainError, "ln(0) in expression");
  return log(a);
}

cd int_power(cd a, int n) {
  if (n < 0) return checked_divide(1.0, int_power(a, -n));
  cd r = 1.0;
  for (int k = 0; k < n; ++k) r *= a;
  return r;
}

Series int_power(const Series& a, int n) {
  if (n < 0) return checked_divide(Series(1.0, a.order()), int_power(a, -n));
  return pow(a, n);
}

}  // namespace

template <class T, class Leaf>
T Expr::evaluate(const Leaf& leaf) const {
  switch (op()) {
    case ExprOp::Const:
      return T(constant_value());
    case ExprOp::Var:
      return leaf(name());
    case ExprOp::Neg:
      return -lhs().evaluate<T>(leaf);
    case ExprOp::Add:
      return lhs().evaluate<T>(leaf) + rhs().evaluate<T>(leaf);
    case ExprOp::Sub:
      return lhs().evaluate<T>(leaf) - rhs().evaluate<T>(leaf);
    case ExprOp::Mul:
      return lhs().evaluate<T>(leaf) * rhs().evaluate<T>(leaf);
    case ExprOp::Div:
      return checked_divide(lhs().evaluate<T>(leaf), rhs().evaluate<T>(leaf));
    case ExprOp::Pow:
      return int_power(lhs().evaluate<T>(leaf), exponent());
    case ExprOp::Conj: {
      using std::conj;
      return conj(lhs().evaluate<T>(leaf));
    }
    case ExprOp::Exp: {
      using std::exp;
      return exp(lhs().evaluate<T>(leaf));
    }
    case ExprOp::Ln:
      return checked_log(lhs().evaluate<T>(leaf));
  }
  return T(0.0);
}

cd Expr::eval(const std::map<std::string, cd>& bindings) const {
  return evaluate<cd>([&](const std::string& name) -> cd {
    auto it = bindings.find(name);
    if (it != bindings.end()) return it->second;
    // Derived bindings from m1 when only the chart coordinate is given.
    auto m1 = bindings.find("m1");
    if (m1 != bindings.end()) {
      if (name == "c1") return std::conj(m1->second);
      if (name == "u") return m1->second.real();
      if (name == "v") return m1->second.imag();
    }
    throw Error(ErrorKind::UnknownIdentifier, "unbound variable '" + name + "'");
  });
}

cd Expr::eval_at(cd nu) const { return eval({{"m1", nu}}); }

Series Expr::eval_series(cd nu, int order) const {
  const Series m1 = Series::variable(nu, order);
  const Series c1 = m1.conj();
  const Series u = Series::real_coordinate(nu, order, false);
  const Series v = Series::real_coordinate(nu, order, true);
  return evaluate<Series>([&](const std::string& name) -> Series {
    if (name == "m1") return m1;
    if (name == "c1") return c1;
    if (name == "u") return u;
    if (name == "v") return v;
    throw Error(ErrorKind::UnknownIdentifier, "unbound variable '" + name + "'");
  });
}

std::string Expr::to_string() const {
  auto wrap = [](const Expr& e) {
    const ExprOp o = e.op();
    const bool atomic = o == ExprOp::Var || o == ExprOp::Conj ||
                        o == ExprOp::Exp || o == ExprOp::Ln ||
                        (o == ExprOp::Const && e.constant_value().imag() == 0.0 &&
                         e.constant_value().real() >= 0.0);
    return atomic ? e.to_string() : "(" + e.to_string() + ")";
  };
  switch (op()) {
    case ExprOp::Const: {
      const cd z = constant_value();
      if (z.real() == 0.0 && z.imag() != 0.0 && z.imag() < 0.0)
        return "(" + format_complex(z) + ")";
      return format_complex(z);
    }
    case ExprOp::Var:
      return name();
    case ExprOp::Neg:
      return "-" + wrap(lhs());
    case ExprOp::Add:
      return lhs().to_string() + " + " + wrap(rhs());
    case ExprOp::Sub:
      return lhs().to_string() + " - " + wrap(rhs());
    case ExprOp::Mul:
      return wrap(lhs()) + "*" + wrap(rhs());
    case ExprOp::Div:
      return wrap(lhs()) + "/" + wrap(rhs());
    case ExprOp::Pow:
      return wrap(lhs()) + "^" +
             (exponent() < 0 ? "(" + std::to_string(exponent()) + ")"
                             : std::to_string(exponent()));
    case ExprOp::Conj:
      return "conj(" + lhs().to_string() + ")";
    case ExprOp::Exp:
      return "exp(" + lhs().to_string() + ")";
    case ExprOp::Ln:
      return "ln(" + lhs().to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& extra)
      : text_(text), extra_(extra) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ < text_.size())
      fail(ErrorKind::SyntaxError,
           std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& msg) const {
    throw ParseError(kind, msg, pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        fail(ErrorKind::SyntaxError,
             std::string("expected '") + c + "' before end of input");
      fail(ErrorKind::SyntaxError, std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*'))
        e = e * unary();
      else if (accept('/'))
        e = e / unary();
      else
        return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  int integer_exponent() {
    skip_space();
    const bool paren = accept('(');
    bool negative = accept('-');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail(ErrorKind::SyntaxError, "expected integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e'))
      fail(ErrorKind::SyntaxError, "exponent must be an integer");
    const int n = std::atoi(std::string(text_.substr(start, pos_ - start)).c_str());
    if (paren) expect(')');
    return negative ? -n : n;
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, integer_exponent());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size())
      fail(ErrorKind::SyntaxError, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(ErrorKind::SyntaxError, std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") {
      pos_ = start;
      fail(ErrorKind::SyntaxError, "malformed number");
    }
    const double x = std::strtod(literal.c_str(), nullptr);
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        !(pos_ + 1 < text_.size() &&
          std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return Expr::constant(cd(0.0, x));
    }
    return Expr::constant(x);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string id(text_.substr(start, pos_ - start));
    if (id == "conj" || id == "exp" || id == "ln") {
      expect('(');
      Expr arg = expr();
      expect(')');
      if (id == "conj") return conj(arg);
      if (id == "exp") return exp(arg);
      return ln(arg);
    }
    if (id == "i") return Expr::constant(kI);
    if (id == "m1" || id == "c1" || id == "u" || id == "v" || extra_.count(id))
      return Expr::variable(id);
    pos_ = start;
    fail(ErrorKind::UnknownIdentifier, "unknown identifier '" + id + "'");
  }

  std::string_view text_;
  const std::set<std::string>& extra_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(std::string_view text) { return parse(text, {}); }

Expr Expr::parse(std::string_view text,
                 const std::set<std::string>& extra_variables) {
  return Parser(text, extra_variables).parse();
}

}  // namespace lh3
