#ifndef NCBALL_NCEXPR_HPP
#define NCBALL_NCEXPR_HPP

#include <memory>
#include <string>
#include <string_view>

#include "ncball/types.hpp"

namespace ncball {

enum class ExprKind { Const, Var, Neg, Add, Mul, Inv, Scale };

struct NcExpr;
using ExprPtr = std::shared_ptr<const NcExpr>;

/// Noncommutative rational expression. Operand order is significant for Mul.
struct NcExpr {
  ExprKind kind = ExprKind::Const;
  Complex value{0.0, 0.0};  // Const value, or the factor of Scale
  int index = 0;            // Var: 1-based variable index
  ExprPtr left;             // Neg/Inv/Scale operand, or left operand
  ExprPtr right;

  static ExprPtr constant(Complex v);
  static ExprPtr var(int index);
  static ExprPtr neg(ExprPtr e);
  static ExprPtr add(ExprPtr a, ExprPtr b);
  static ExprPtr mul(ExprPtr a, ExprPtr b);
  static ExprPtr inv(ExprPtr e);
  static ExprPtr scale(Complex factor, ExprPtr e);
};

/// Parses the expression grammar
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := number ['i'] | 'i' | 'x' digits | 'inv' '(' expr ')' | '(' expr ')'
/// A sum of two literals folds into one complex constant (so "1+2i" is a
/// literal), a negated literal folds into a literal, and a product that starts
/// with a literal becomes Scale(literal, rest). Throws SyntaxError with the
/// 0-based offset, or Dimension when a variable index exceeds d.
ExprPtr parse_expr(std::string_view text, int d);

/// Canonical text that parses back to an equivalent tree.
std::string to_string(const ExprPtr& e);

/// Structural (tree-shape) debug rendering, e.g. "Inv(Add(Const 1, ...))".
std::string to_tree_string(const ExprPtr& e);

/// Largest variable index used (0 for constant expressions).
int max_variable(const ExprPtr& e);

/// Direct evaluation at a matrix point. Throws OutsideDomainError when an
/// inverse meets a (numerically) singular matrix.
CMatrix eval_expr(const ExprPtr& e, const MatTuple& X);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace ncball

#endif  // NCBALL_NCEXPR_HPP
