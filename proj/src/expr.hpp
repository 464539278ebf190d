#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gpil {

// Integer expressions: the label alphabet is built from nonempty lists of
// these. Variables are integer-typed only.
enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  long long value = 0;  // Const
  std::string name;     // Var
  Expr lhs, rhs;        // binary ops; Neg uses lhs only
};

Expr mk_const(long long v);
Expr mk_var(const std::string& name);
Expr mk_neg(Expr e);
Expr mk_bin(ExprKind op, Expr l, Expr r);

// A node label: nonempty list of integer expressions, rendered a:b:c.
using Label = std::vector<Expr>;

// Finite partial map Var -> Z. Lookup outside the domain yields
// "undefined", never a default value.
using Interp = std::map<std::string, long long>;

// Finite map Var -> Expr.
using Subst = std::map<std::string, Expr>;

// Boolean formulas over comparisons of integer expressions.
enum class ConstrKind { True, False, Cmp, Not, And, Or };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct ConstrNode;
using Constraint = std::shared_ptr<const ConstrNode>;

struct ConstrNode {
  ConstrKind kind;
  CmpOp op = CmpOp::Eq;  // Cmp
  Expr el, er;           // Cmp
  Constraint a, b;       // Not uses a only
};

Constraint mk_true();
Constraint mk_false();
Constraint mk_cmp(CmpOp op, Expr l, Expr r);
Constraint mk_not(Constraint c);
Constraint mk_and(Constraint l, Constraint r);
Constraint mk_or(Constraint l, Constraint r);

// Evaluation. "undefined" (unmapped variable, zero divisor, overflow) is a
// value that propagates upward, not a fault.
std::optional<long long> eval_expr(const Expr& e, const Interp& I);
std::optional<Label> eval_label(const Label& l, const Interp& I);

// Comparisons with an undefined operand evaluate to false; connectives are
// standard and total.
bool eval_constraint(const Constraint& c, const Interp& I);

// Simultaneous substitution of mapped variables. Not binder-aware; capture
// is handled one level up, in the condition language.
Expr apply_subst(const Expr& e, const Subst& s);
Label apply_subst(const Label& l, const Subst& s);
Constraint apply_subst(const Constraint& c, const Subst& s);

// Deterministic canonical form: constant folding, flattening and sorting of
// commutative operators, a - b rewritten as a + (-b). Idempotent, and
// preserves eval_expr for every interpretation.
Expr normalize(const Expr& e);
Label normalize(const Label& l);
Constraint normalize(const Constraint& c);

// Total order on expressions (used for canonical sorting). 0 iff
// structurally equal.
int compare(const Expr& a, const Expr& b);
bool expr_equal(const Expr& a, const Expr& b);
bool label_equal(const Label& a, const Label& b);  // after normalize
int compare(const Constraint& a, const Constraint& b);

void collect_vars(const Expr& e, std::set<std::string>& out);
void collect_vars(const Label& l, std::set<std::string>& out);
void collect_vars(const Constraint& c, std::set<std::string>& out);
void collect_consts(const Expr& e, std::set<long long>& out);
void collect_consts(const Constraint& c, std::set<long long>& out);

bool is_constant(const Expr& e);     // no variables
bool is_constant(const Label& l);
bool division_free(const Expr& e);

std::string to_string(const Expr& e);
std::string to_string(const Label& l);
std::string to_string(const Constraint& c);

// Fresh name not present in `avoid`; candidates base, base1, base2, ...
std::string fresh_var(const std::string& base, const std::set<std::string>& avoid);

}  // namespace gpil
