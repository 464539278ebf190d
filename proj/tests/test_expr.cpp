#include <doctest.h>

#include "expr.hpp"
#include "parse.hpp"
#include "test_util.hpp"

using namespace gpil;
using namespace gpil::test;

TEST_CASE("eval_expr basics") {
  Interp I{{"x", 7}};
  CHECK(eval_expr(parse_expr("x+1"), I) == 8);
  CHECK(eval_expr(parse_expr("1/0"), I) == std::nullopt);
  // Example 1's interpretation: I(x) = I(y) = 8
  Interp I2{{"x", 8}, {"y", 8}};
  CHECK(eval_expr(parse_expr("-(x*y)"), I2) == -64);
  // unmapped variable is undefined, not defaulted
  CHECK(eval_expr(parse_expr("q"), I) == std::nullopt);
  // undefined propagates upward
  CHECK(eval_expr(parse_expr("1 + 1/0"), I) == std::nullopt);
  // division truncates toward zero
  CHECK(eval_expr(parse_expr("(-7)/2"), I) == -3);
  CHECK(eval_expr(parse_expr("7/(-2)"), I) == -3);
}

TEST_CASE("eval_constraint basics") {
  Interp I{{"x", 1}, {"y", 2}};
  CHECK(eval_constraint(mk_cmp(CmpOp::Ne, mk_var("x"), mk_var("y")), I));
  Interp I5{{"x", 5}};
  CHECK(eval_constraint(mk_cmp(CmpOp::Eq, mk_var("x"), mk_var("x")), I5));
  // comparison with an undefined operand is false
  Interp I3{{"x", 3}};
  auto div0 = mk_cmp(CmpOp::Eq, parse_expr("x/0"), mk_const(1));
  CHECK_FALSE(eval_constraint(div0, I3));
  // ... and so its negation is true
  CHECK(eval_constraint(mk_not(div0), I3));
}

TEST_CASE("apply_subst") {
  Subst s{{"x", parse_expr("y+1")}};
  CHECK(expr_equal(apply_subst(parse_expr("x*2"), s), parse_expr("(y+1)*2")));
  Label l = parse_label("5:x");
  Subst z{{"x", mk_const(0)}};
  CHECK(label_equal(apply_subst(l, z), parse_label("5:0")));
  CHECK(expr_equal(apply_subst(parse_expr("x"), Subst{}), parse_expr("x")));
}

TEST_CASE("normalize canonicalises and folds") {
  CHECK(expr_equal(normalize(parse_expr("1+x")), normalize(parse_expr("x+1"))));
  CHECK(expr_equal(normalize(parse_expr("2*3")), mk_const(6)));
  CHECK(expr_equal(normalize(parse_expr("x*y")), normalize(parse_expr("y*x"))));
  CHECK(expr_equal(normalize(parse_expr("x-x+0")), normalize(parse_expr("x-x"))));
  // 0 * e keeps a division that may be undefined
  Expr e = normalize(parse_expr("0*(1/x)"));
  CHECK_FALSE(expr_equal(e, mk_const(0)));
  CHECK(expr_equal(normalize(parse_expr("0*(1+x)")), mk_const(0)));
}

TEST_CASE("normalize is idempotent on random expressions") {
  ExprGen gen(2024);
  for (int i = 0; i < 100; i++) {
    Expr e = gen.gen(4);
    Expr n1 = normalize(e);
    Expr n2 = normalize(n1);
    CAPTURE(to_string(e));
    CHECK(expr_equal(n1, n2));
  }
}

TEST_CASE("normalize preserves evaluation on random pairs") {
  ExprGen gen(77);
  for (int i = 0; i < 1000; i++) {
    Expr e = gen.gen(4);
    Interp I = gen.interp();
    CAPTURE(to_string(e));
    CHECK(eval_expr(e, I) == eval_expr(normalize(e), I));
  }
}

TEST_CASE("substitution composition on disjoint domains") {
  ExprGen gen(5);
  for (int i = 0; i < 200; i++) {
    Expr e = gen.gen(3);
    // s1: x -> a+1, y -> 2 ; s2: z -> 3 (ranges avoid domains)
    Subst s1{{"x", parse_expr("a+1")}, {"y", mk_const(2)}};
    Subst s2{{"z", mk_const(3)}};
    Expr lhs = apply_subst(apply_subst(e, s1), s2);
    Subst s12 = s1;
    for (auto& [k, v] : s2) s12[k] = v;  // disjoint: composition is union
    Expr rhs = apply_subst(e, s12);
    CHECK(expr_equal(lhs, rhs));
  }
}

TEST_CASE("evaluation and substitution commute for constants") {
  ExprGen gen(6);
  for (int i = 0; i < 200; i++) {
    Expr e = gen.gen(3);
    Interp I = gen.interp();
    long long k = static_cast<long long>(i % 5) - 2;
    Subst s{{"x", mk_const(k)}};
    Interp I2 = I;
    I2["x"] = k;
    CHECK(eval_expr(apply_subst(e, s), I2) == eval_expr(e, I2));
  }
}

TEST_CASE("expression printing round-trips through the parser") {
  ExprGen gen(99);
  for (int i = 0; i < 300; i++) {
    Expr e = gen.gen(4);
    Expr back = parse_expr(to_string(e));
    CHECK(expr_equal(normalize(e), normalize(back)));
  }
  Label l = parse_label("x+1:y:3");
  CHECK(label_equal(parse_label(to_string(l)), l));
}
