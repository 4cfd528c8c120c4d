#include "ncball/ncexpr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include <Eigen/LU>

#include "ncball/matcore.hpp"

namespace ncball {

ExprPtr NcExpr::constant(Complex v) {
  auto e = std::make_shared<NcExpr>();
  e->kind = ExprKind::Const;
  e->value = v;
  return e;
}

ExprPtr NcExpr::var(int index) {
  if (index < 1) throw Error(ErrorCode::InvalidInput, "variable indices start at 1");
  auto e = std::make_shared<NcExpr>();
  e->kind = ExprKind::Var;
  e->index = index;
  return e;
}

namespace {

ExprPtr make(ExprKind kind, ExprPtr a, ExprPtr b = nullptr, Complex v = 0.0) {
  if (!a || ((kind == ExprKind::Add || kind == ExprKind::Mul) && !b))
    throw Error(ErrorCode::InvalidInput, "expression node is missing an operand");
  auto e = std::make_shared<NcExpr>();
  e->kind = kind;
  e->left = std::move(a);
  e->right = std::move(b);
  e->value = v;
  return e;
}

}  // namespace

ExprPtr NcExpr::neg(ExprPtr e) { return make(ExprKind::Neg, std::move(e)); }
ExprPtr NcExpr::add(ExprPtr a, ExprPtr b) { return make(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr NcExpr::mul(ExprPtr a, ExprPtr b) { return make(ExprKind::Mul, std::move(a), std::move(b)); }
ExprPtr NcExpr::inv(ExprPtr e) { return make(ExprKind::Inv, std::move(e)); }
ExprPtr NcExpr::scale(Complex factor, ExprPtr e) { return make(ExprKind::Scale, std::move(e), nullptr, factor); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, int d) : text_(text), d_(d) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(pos_, "syntax error at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool is_const(const ExprPtr& e) { return e->kind == ExprKind::Const; }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = fold_add(lhs, term());
      } else if (accept('-')) {
        ExprPtr rhs = term();
        lhs = fold_add(lhs, is_const(rhs) ? NcExpr::constant(-rhs->value) : NcExpr::neg(rhs));
      } else {
        return lhs;
      }
    }
  }

  static ExprPtr fold_add(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a) && is_const(b)) return NcExpr::constant(a->value + b->value);
    return NcExpr::add(a, b);
  }

  ExprPtr term() {
    ExprPtr first = unary();
    if (is_const(first)) {
      if (!accept('*')) return first;
      ExprPtr rest = term();
      if (is_const(rest)) return NcExpr::constant(first->value * rest->value);
      return NcExpr::scale(first->value, rest);
    }
    ExprPtr lhs = first;
    while (accept('*')) lhs = NcExpr::mul(lhs, unary());
    return lhs;
  }

  ExprPtr unary() {
    if (accept('-')) {
      ExprPtr e = unary();
      return is_const(e) ? NcExpr::constant(-e->value) : NcExpr::neg(e);
    }
    return primary();
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return NcExpr::constant(Complex(0.0, value));
    }
    return NcExpr::constant(Complex(value, 0.0));
  }

  ExprPtr word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "inv") {
      if (!accept('(')) fail("expected '(' after inv");
      ExprPtr e = expr();
      if (!accept(')')) fail("expected ')' closing inv(");
      return NcExpr::inv(e);
    }
    if (name == "i") return NcExpr::constant(Complex(0.0, 1.0));
    if (name == "x") {
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) {
        pos_ = start;
        fail("variable 'x' needs an index");
      }
      int index = 0;
      std::from_chars(text_.data() + digits, text_.data() + pos_, index);
      if (index < 1) {
        pos_ = start;
        fail("variable indices start at 1");
      }
      if (index > d_) {
        throw Error(ErrorCode::Dimension, "variable x" + std::to_string(index) + " at offset " +
                                              std::to_string(start) + " exceeds d=" + std::to_string(d_));
      }
      return NcExpr::var(index);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  int d_;
  std::size_t pos_ = 0;
};

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return z.real() < 0.0 ? "(" + format_real(z.real()) + ")" : format_real(z.real());
  return "(" + format_real(z.real()) + "+" + format_real(z.imag()) + "i)";
}

}  // namespace

ExprPtr parse_expr(std::string_view text, int d) {
  if (d < 1) throw Error(ErrorCode::Dimension, "number of variables must be >= 1");
  return Parser(text, d).parse();
}

std::string to_string(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const: return format_complex(e->value);
    case ExprKind::Var: return "x" + std::to_string(e->index);
    case ExprKind::Neg: return "(-" + to_string(e->left) + ")";
    case ExprKind::Add: return "(" + to_string(e->left) + " + " + to_string(e->right) + ")";
    case ExprKind::Mul: return "(" + to_string(e->left) + "*" + to_string(e->right) + ")";
    case ExprKind::Inv: return "inv(" + to_string(e->left) + ")";
    case ExprKind::Scale: return "(" + format_complex(e->value) + "*" + to_string(e->left) + ")";
  }
  return "";
}

std::string to_tree_string(const ExprPtr& e) {
  std::ostringstream os;
  switch (e->kind) {
    case ExprKind::Const:
      os << "Const " << (e->value.imag() == 0.0 ? format_real(e->value.real()) : format_complex(e->value));
      break;
    case ExprKind::Var: os << "Var " << e->index; break;
    case ExprKind::Neg: os << "Neg(" << to_tree_string(e->left) << ")"; break;
    case ExprKind::Add: os << "Add(" << to_tree_string(e->left) << ", " << to_tree_string(e->right) << ")"; break;
    case ExprKind::Mul: os << "Mul(" << to_tree_string(e->left) << ", " << to_tree_string(e->right) << ")"; break;
    case ExprKind::Inv: os << "Inv(" << to_tree_string(e->left) << ")"; break;
    case ExprKind::Scale: os << "Scale(" << format_complex(e->value) << ", " << to_tree_string(e->left) << ")"; break;
  }
  return os.str();
}

int max_variable(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const: return 0;
    case ExprKind::Var: return e->index;
    case ExprKind::Add:
    case ExprKind::Mul: return std::max(max_variable(e->left), max_variable(e->right));
    default: return max_variable(e->left);
  }
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const: return a->value == b->value;
    case ExprKind::Var: return a->index == b->index;
    case ExprKind::Add:
    case ExprKind::Mul: return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    case ExprKind::Scale: return a->value == b->value && structurally_equal(a->left, b->left);
    default: return structurally_equal(a->left, b->left);
  }
}

CMatrix eval_expr(const ExprPtr& e, const MatTuple& X) {
  const int n = X.n();
  switch (e->kind) {
    case ExprKind::Const: return e->value * CMatrix::Identity(n, n);
    case ExprKind::Var:
      if (e->index > X.d())
        throw Error(ErrorCode::Dimension, "x" + std::to_string(e->index) + " is not defined for d=" + std::to_string(X.d()));
      return X[e->index - 1];
    case ExprKind::Neg: return -eval_expr(e->left, X);
    case ExprKind::Add: return eval_expr(e->left, X) + eval_expr(e->right, X);
    case ExprKind::Mul: return eval_expr(e->left, X) * eval_expr(e->right, X);
    case ExprKind::Scale: return e->value * eval_expr(e->left, X);
    case ExprKind::Inv: {
      const CMatrix m = eval_expr(e->left, X);
      const double smin = smallest_singular_value(m);
      if (smin <= kSingularRelTol * (1.0 + operator_norm(m)))
        throw OutsideDomainError(smin, "inv(" + to_string(e->left) + ") is singular at this point");
      return m.partialPivLu().inverse();
    }
  }
  return {};
}

}  // namespace ncball
