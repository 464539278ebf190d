#include "expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace gpil {

Expr mk_const(long long v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Const;
  n->value = v;
  return n;
}

Expr mk_var(const std::string& name) {
  assert(!name.empty());
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Var;
  n->name = name;
  return n;
}

Expr mk_neg(Expr e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Neg;
  n->lhs = std::move(e);
  return n;
}

Expr mk_bin(ExprKind op, Expr l, Expr r) {
  assert(op == ExprKind::Add || op == ExprKind::Sub || op == ExprKind::Mul ||
         op == ExprKind::Div);
  auto n = std::make_shared<ExprNode>();
  n->kind = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

Constraint mk_true() {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::True;
  return n;
}

Constraint mk_false() {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::False;
  return n;
}

Constraint mk_cmp(CmpOp op, Expr l, Expr r) {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::Cmp;
  n->op = op;
  n->el = std::move(l);
  n->er = std::move(r);
  return n;
}

Constraint mk_not(Constraint c) {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::Not;
  n->a = std::move(c);
  return n;
}

Constraint mk_and(Constraint l, Constraint r) {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::And;
  n->a = std::move(l);
  n->b = std::move(r);
  return n;
}

Constraint mk_or(Constraint l, Constraint r) {
  auto n = std::make_shared<ConstrNode>();
  n->kind = ConstrKind::Or;
  n->a = std::move(l);
  n->b = std::move(r);
  return n;
}

// --- checked arithmetic -----------------------------------------------

static std::optional<long long> ck_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
  return r;
}
static std::optional<long long> ck_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) return std::nullopt;
  return r;
}
static std::optional<long long> ck_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}
static std::optional<long long> ck_div(long long a, long long b) {
  if (b == 0) return std::nullopt;
  if (a == INT64_MIN && b == -1) return std::nullopt;
  return a / b;  // truncation toward zero
}
static std::optional<long long> ck_neg(long long a) {
  if (a == INT64_MIN) return std::nullopt;
  return -a;
}

std::optional<long long> eval_expr(const Expr& e, const Interp& I) {
  switch (e->kind) {
    case ExprKind::Const:
      return e->value;
    case ExprKind::Var: {
      auto it = I.find(e->name);
      if (it == I.end()) return std::nullopt;
      return it->second;
    }
    case ExprKind::Neg: {
      auto v = eval_expr(e->lhs, I);
      if (!v) return std::nullopt;
      return ck_neg(*v);
    }
    default: {
      auto l = eval_expr(e->lhs, I), r = eval_expr(e->rhs, I);
      if (!l || !r) return std::nullopt;
      switch (e->kind) {
        case ExprKind::Add: return ck_add(*l, *r);
        case ExprKind::Sub: return ck_sub(*l, *r);
        case ExprKind::Mul: return ck_mul(*l, *r);
        case ExprKind::Div: return ck_div(*l, *r);
        default: return std::nullopt;
      }
    }
  }
}

std::optional<Label> eval_label(const Label& l, const Interp& I) {
  Label out;
  out.reserve(l.size());
  for (auto& e : l) {
    auto v = eval_expr(e, I);
    if (!v) return std::nullopt;
    out.push_back(mk_const(*v));
  }
  return out;
}

bool eval_constraint(const Constraint& c, const Interp& I) {
  switch (c->kind) {
    case ConstrKind::True: return true;
    case ConstrKind::False: return false;
    case ConstrKind::Cmp: {
      auto l = eval_expr(c->el, I), r = eval_expr(c->er, I);
      if (!l || !r) return false;  // undefined comparison is false
      switch (c->op) {
        case CmpOp::Eq: return *l == *r;
        case CmpOp::Ne: return *l != *r;
        case CmpOp::Lt: return *l < *r;
        case CmpOp::Le: return *l <= *r;
        case CmpOp::Gt: return *l > *r;
        case CmpOp::Ge: return *l >= *r;
      }
      return false;
    }
    case ConstrKind::Not: return !eval_constraint(c->a, I);
    case ConstrKind::And: return eval_constraint(c->a, I) && eval_constraint(c->b, I);
    case ConstrKind::Or: return eval_constraint(c->a, I) || eval_constraint(c->b, I);
  }
  return false;
}

Expr apply_subst(const Expr& e, const Subst& s) {
  switch (e->kind) {
    case ExprKind::Const: return e;
    case ExprKind::Var: {
      auto it = s.find(e->name);
      return it == s.end() ? e : it->second;
    }
    case ExprKind::Neg: return mk_neg(apply_subst(e->lhs, s));
    default:
      return mk_bin(e->kind, apply_subst(e->lhs, s), apply_subst(e->rhs, s));
  }
}

Label apply_subst(const Label& l, const Subst& s) {
  Label out;
  out.reserve(l.size());
  for (auto& e : l) out.push_back(apply_subst(e, s));
  return out;
}

Constraint apply_subst(const Constraint& c, const Subst& s) {
  switch (c->kind) {
    case ConstrKind::True:
    case ConstrKind::False: return c;
    case ConstrKind::Cmp:
      return mk_cmp(c->op, apply_subst(c->el, s), apply_subst(c->er, s));
    case ConstrKind::Not: return mk_not(apply_subst(c->a, s));
    case ConstrKind::And:
      return mk_and(apply_subst(c->a, s), apply_subst(c->b, s));
    case ConstrKind::Or:
      return mk_or(apply_subst(c->a, s), apply_subst(c->b, s));
  }
  return c;
}

// --- comparison ---------------------------------------------------------

static int kind_rank(ExprKind k) { return static_cast<int>(k); }

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case ExprKind::Const:
      return a->value < b->value ? -1 : (a->value > b->value ? 1 : 0);
    case ExprKind::Var:
      return a->name < b->name ? -1 : (a->name > b->name ? 1 : 0);
    case ExprKind::Neg: return compare(a->lhs, b->lhs);
    default: {
      int c = compare(a->lhs, b->lhs);
      if (c != 0) return c;
      return compare(a->rhs, b->rhs);
    }
  }
}

bool expr_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

bool label_equal(const Label& a, const Label& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); i++)
    if (!expr_equal(normalize(a[i]), normalize(b[i]))) return false;
  return true;
}

int compare(const Constraint& a, const Constraint& b) {
  int ra = static_cast<int>(a->kind), rb = static_cast<int>(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case ConstrKind::True:
    case ConstrKind::False: return 0;
    case ConstrKind::Cmp: {
      int oa = static_cast<int>(a->op), ob = static_cast<int>(b->op);
      if (oa != ob) return oa < ob ? -1 : 1;
      int c = compare(a->el, b->el);
      if (c != 0) return c;
      return compare(a->er, b->er);
    }
    case ConstrKind::Not: return compare(a->a, b->a);
    default: {
      int c = compare(a->a, b->a);
      if (c != 0) return c;
      return compare(a->b, b->b);
    }
  }
}

// --- normalize ----------------------------------------------------------

bool division_free(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var: return true;
    case ExprKind::Div: return false;
    case ExprKind::Neg: return division_free(e->lhs);
    default: return division_free(e->lhs) && division_free(e->rhs);
  }
}

static void flatten(ExprKind op, const Expr& e, std::vector<Expr>& out) {
  if (e->kind == op) {
    flatten(op, e->lhs, out);
    flatten(op, e->rhs, out);
  } else {
    out.push_back(e);
  }
}

// Rebuild a sorted operand list left-associatively.
static Expr rebuild(ExprKind op, std::vector<Expr> ops, long long unit) {
  if (ops.empty()) return mk_const(unit);
  std::sort(ops.begin(), ops.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  Expr acc = ops[0];
  for (size_t i = 1; i < ops.size(); i++) acc = mk_bin(op, acc, ops[i]);
  return acc;
}

Expr normalize(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var: return e;
    case ExprKind::Neg: {
      Expr n = normalize(e->lhs);
      if (n->kind == ExprKind::Const) {
        if (auto v = ck_neg(n->value)) return mk_const(*v);
        return mk_neg(n);
      }
      if (n->kind == ExprKind::Neg) return n->lhs;
      return mk_neg(n);
    }
    case ExprKind::Sub:
      return normalize(mk_bin(ExprKind::Add, e->lhs, mk_neg(e->rhs)));
    case ExprKind::Add: {
      std::vector<Expr> raw, terms, ops;
      flatten(ExprKind::Add, e, raw);
      for (auto& t : raw) {
        Expr n = normalize(t);
        if (n->kind == ExprKind::Add) flatten(ExprKind::Add, n, terms);
        else terms.push_back(n);
      }
      std::optional<long long> acc;
      bool folded_ok = true;
      for (auto& n : terms) {
        if (n->kind == ExprKind::Const && folded_ok) {
          auto next = ck_add(acc.value_or(0), n->value);
          if (next) {
            acc = *next;
          } else {
            folded_ok = false;
            ops.push_back(n);
          }
        } else {
          ops.push_back(n);
        }
      }
      if (acc && (*acc != 0 || ops.empty())) ops.push_back(mk_const(*acc));
      return rebuild(ExprKind::Add, std::move(ops), 0);
    }
    case ExprKind::Mul: {
      std::vector<Expr> raw, terms, ops;
      flatten(ExprKind::Mul, e, raw);
      for (auto& t : raw) {
        Expr n = normalize(t);
        if (n->kind == ExprKind::Mul) flatten(ExprKind::Mul, n, terms);
        else terms.push_back(n);
      }
      std::optional<long long> acc;
      bool folded_ok = true;
      for (auto& n : terms) {
        if (n->kind == ExprKind::Const && folded_ok) {
          auto next = ck_mul(acc.value_or(1), n->value);
          if (next) {
            acc = *next;
          } else {
            folded_ok = false;
            ops.push_back(n);
          }
        } else {
          ops.push_back(n);
        }
      }
      if (acc && *acc == 0 && folded_ok) {
        // 0 * e = 0 only when e cannot be undefined.
        bool all_total = true;
        for (auto& t : ops)
          if (!division_free(t)) all_total = false;
        if (all_total) return mk_const(0);
        ops.push_back(mk_const(0));
        return rebuild(ExprKind::Mul, std::move(ops), 1);
      }
      if (acc && (*acc != 1 || ops.empty())) ops.push_back(mk_const(*acc));
      return rebuild(ExprKind::Mul, std::move(ops), 1);
    }
    case ExprKind::Div: {
      Expr l = normalize(e->lhs), r = normalize(e->rhs);
      if (l->kind == ExprKind::Const && r->kind == ExprKind::Const) {
        if (auto v = ck_div(l->value, r->value)) return mk_const(*v);
      }
      if (r->kind == ExprKind::Const && r->value == 1) return l;
      return mk_bin(ExprKind::Div, l, r);
    }
  }
  return e;
}

Label normalize(const Label& l) {
  Label out;
  out.reserve(l.size());
  for (auto& e : l) out.push_back(normalize(e));
  return out;
}

Constraint normalize(const Constraint& c) {
  switch (c->kind) {
    case ConstrKind::True:
    case ConstrKind::False: return c;
    case ConstrKind::Cmp: return mk_cmp(c->op, normalize(c->el), normalize(c->er));
    case ConstrKind::Not: return mk_not(normalize(c->a));
    case ConstrKind::And: return mk_and(normalize(c->a), normalize(c->b));
    case ConstrKind::Or: return mk_or(normalize(c->a), normalize(c->b));
  }
  return c;
}

// --- variable / constant collection --------------------------------------

void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::Const: return;
    case ExprKind::Var: out.insert(e->name); return;
    case ExprKind::Neg: collect_vars(e->lhs, out); return;
    default:
      collect_vars(e->lhs, out);
      collect_vars(e->rhs, out);
  }
}

void collect_vars(const Label& l, std::set<std::string>& out) {
  for (auto& e : l) collect_vars(e, out);
}

void collect_vars(const Constraint& c, std::set<std::string>& out) {
  switch (c->kind) {
    case ConstrKind::True:
    case ConstrKind::False: return;
    case ConstrKind::Cmp:
      collect_vars(c->el, out);
      collect_vars(c->er, out);
      return;
    case ConstrKind::Not: collect_vars(c->a, out); return;
    default:
      collect_vars(c->a, out);
      collect_vars(c->b, out);
  }
}

void collect_consts(const Expr& e, std::set<long long>& out) {
  switch (e->kind) {
    case ExprKind::Const: out.insert(e->value); return;
    case ExprKind::Var: return;
    case ExprKind::Neg: collect_consts(e->lhs, out); return;
    default:
      collect_consts(e->lhs, out);
      collect_consts(e->rhs, out);
  }
}

void collect_consts(const Constraint& c, std::set<long long>& out) {
  switch (c->kind) {
    case ConstrKind::True:
    case ConstrKind::False: return;
    case ConstrKind::Cmp:
      collect_consts(c->el, out);
      collect_consts(c->er, out);
      return;
    case ConstrKind::Not: collect_consts(c->a, out); return;
    default:
      collect_consts(c->a, out);
      collect_consts(c->b, out);
  }
}

bool is_constant(const Expr& e) {
  std::set<std::string> vs;
  collect_vars(e, vs);
  return vs.empty();
}

bool is_constant(const Label& l) {
  for (auto& e : l)
    if (!is_constant(e)) return false;
  return true;
}

// --- printing -----------------------------------------------------------

// Precedence: + - (1) < * / (2) < unary - (3) < atom (4).
static void render(const Expr& e, int need, std::ostringstream& os) {
  switch (e->kind) {
    case ExprKind::Const:
      if (e->value < 0) {
        if (need > 3) os << "(" << e->value << ")";
        else os << e->value;
      } else {
        os << e->value;
      }
      return;
    case ExprKind::Var: os << e->name; return;
    case ExprKind::Neg: {
      bool paren = need > 3;
      if (paren) os << "(";
      os << "-";
      render(e->lhs, 4, os);
      if (paren) os << ")";
      return;
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      bool paren = need > 1;
      if (paren) os << "(";
      render(e->lhs, 1, os);
      // a + (-b) prints as a - b; after "-" force parens on anything that
      // could start with another '-', or the lexer would see "--"
      if (e->kind == ExprKind::Add && e->rhs->kind == ExprKind::Neg) {
        os << "-";
        render(e->rhs->lhs, 4, os);
      } else if (e->kind == ExprKind::Sub) {
        os << "-";
        render(e->rhs, 4, os);
      } else {
        os << "+";
        render(e->rhs, 2, os);
      }
      if (paren) os << ")";
      return;
    }
    case ExprKind::Mul:
    case ExprKind::Div: {
      bool paren = need > 2;
      if (paren) os << "(";
      render(e->lhs, 2, os);
      os << (e->kind == ExprKind::Mul ? "*" : "/");
      render(e->rhs, 3, os);
      if (paren) os << ")";
      return;
    }
  }
}

std::string to_string(const Expr& e) {
  std::ostringstream os;
  render(e, 0, os);
  return os.str();
}

std::string to_string(const Label& l) {
  std::ostringstream os;
  for (size_t i = 0; i < l.size(); i++) {
    if (i) os << ":";
    render(l[i], 2, os);  // parenthesise +/- items so ':' stays unambiguous
  }
  return os.str();
}

static const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

// Precedence: or (1) < and (2) < not (3) < atom.
static void render_constr(const Constraint& c, int need, std::ostringstream& os) {
  switch (c->kind) {
    case ConstrKind::True: os << "true"; return;
    case ConstrKind::False: os << "false"; return;
    case ConstrKind::Cmp: {
      bool paren = need >= 3;  // under "not"
      if (paren) os << "(";
      render(c->el, 0, os);
      os << " " << cmp_str(c->op) << " ";
      render(c->er, 0, os);
      if (paren) os << ")";
      return;
    }
    case ConstrKind::Not:
      os << "not ";
      render_constr(c->a, 3, os);
      return;
    case ConstrKind::And: {
      bool paren = need > 2;
      if (paren) os << "(";
      render_constr(c->a, 2, os);
      os << " and ";
      render_constr(c->b, 2, os);
      if (paren) os << ")";
      return;
    }
    case ConstrKind::Or: {
      bool paren = need > 1;
      if (paren) os << "(";
      render_constr(c->a, 1, os);
      os << " or ";
      render_constr(c->b, 1, os);
      if (paren) os << ")";
      return;
    }
  }
}

std::string to_string(const Constraint& c) {
  std::ostringstream os;
  render_constr(c, 0, os);
  return os.str();
}

std::string fresh_var(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; i++) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace gpil
