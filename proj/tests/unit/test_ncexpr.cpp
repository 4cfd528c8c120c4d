#include <doctest.h>

#include "ncball/ncexpr.hpp"
#include "oracles.hpp"

using namespace ncball;
using oracle::Mat;

namespace {

std::size_t syntax_offset(const std::string& text, int d = 2) {
  try {
    parse_expr(text, d);
  } catch (const SyntaxError& e) {
    return e.position();
  }
  FAIL("expected a syntax error for '" << text << "'");
  return 0;
}

}  // namespace

TEST_CASE("tree shapes") {
  CHECK(to_tree_string(parse_expr("inv(1 - x1*x2) ", 2)) == "Inv(Add(Const 1, Neg(Mul(Var 1, Var 2))))");
  CHECK(to_tree_string(parse_expr("(2*x1*x2 - x1 - x2) * inv(2 - x1 - x2)", 2)) ==
        "Mul(Add(Add(Scale(2, Mul(Var 1, Var 2)), Neg(Var 1)), Neg(Var 2)), Inv(Add(Add(Const 2, Neg(Var 1)), Neg(Var 2))))");
  CHECK(to_tree_string(parse_expr("1 + 2i", 1)) == "Const (1+2i)");
  CHECK(to_tree_string(parse_expr("i*x1", 1)) == "Scale((0+1i), Var 1)");
  CHECK(to_tree_string(parse_expr("-3", 1)) == "Const -3");
  CHECK(to_tree_string(parse_expr("2*3", 1)) == "Const 6");
}

TEST_CASE("products keep their order") {
  const ExprPtr e = parse_expr("x1*x2 - x2*x1", 2);
  oracle::Gen g(71);
  const MatTuple X(g.tuple(2, 3));
  const Mat v = eval_expr(e, X);
  CHECK((v - (X[0] * X[1] - X[1] * X[0])).norm() < 1e-12);
  CHECK(v.norm() > 1e-3);
  CHECK(eval_expr(e, MatTuple::scalars({0.3, 0.7}))(0, 0) == Complex(0.0));
}

TEST_CASE("canonical text parses back to the same tree") {
  const char* inputs[] = {"inv(1 - x1*x2)", "(2*x1*x2 - x1 - x2) * inv(2 - x1 - x2)", "-x1 + (0.5-0.25i)*x2*x1",
                          "inv(inv(x1 + 1)) * x2", "1e-3 * x1", "-(x1 - -2)"};
  for (const char* text : inputs) {
    const ExprPtr e = parse_expr(text, 2);
    const ExprPtr again = parse_expr(to_string(e), 2);
    CHECK_MESSAGE(structurally_equal(e, again), text << " -> " << to_string(e));
  }
  CHECK_FALSE(structurally_equal(parse_expr("x1*x2", 2), parse_expr("x2*x1", 2)));
}

TEST_CASE("syntax errors carry offsets") {
  CHECK(syntax_offset("x1 + * x2") == 5);
  CHECK(syntax_offset("inv x1") == 4);
  CHECK(syntax_offset("(x1 + x2") == 8);
  CHECK(syntax_offset("x1 x2") == 3);
  CHECK(syntax_offset("x0") == 0);
  CHECK(syntax_offset("y1") == 0);
  CHECK(syntax_offset("") == 0);
  CHECK(syntax_offset("x") == 0);
  try {
    parse_expr("x1 + x3", 2);
    FAIL("x3 should not parse for d = 2");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Dimension);
  }
}

TEST_CASE("variables and evaluation") {
  CHECK(max_variable(parse_expr("x1 + x7*x2", 8)) == 7);
  CHECK(max_variable(parse_expr("3", 1)) == 0);
  const ExprPtr e = parse_expr("inv(1 - x1)", 1);
  Mat X(2, 2);
  X << 0.2, 0.1, 0.0, -0.3;
  const Mat expected = (Mat::Identity(2, 2) - X).inverse();
  CHECK((eval_expr(e, MatTuple({X})) - expected).norm() < 1e-12);
  try {
    eval_expr(e, MatTuple::scalars({1.0}));
    FAIL("singular inverse");
  } catch (const OutsideDomainError& err) {
    CHECK(err.sigma_min() <= 1e-12);
  }
  CHECK_THROWS_AS(eval_expr(parse_expr("x2", 2), MatTuple::scalars({1.0})), Error);
}
