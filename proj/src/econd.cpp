#include "econd.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace gpil {

CondPtr cond_true() {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::True;
  return c;
}

CondPtr cond_constr(Constraint g) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::Constr;
  c->gamma = std::move(g);
  return c;
}

CondPtr cond_exists_int(std::string var, CondPtr body) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::ExistsInt;
  c->var = std::move(var);
  c->body = std::move(body);
  return c;
}

CondPtr cond_exists_morph(GraphPtr cod, CondPtr body) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::ExistsMorph;
  c->cod = std::move(cod);
  c->body = std::move(body);
  return c;
}

CondPtr cond_not(CondPtr inner) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::Not;
  c->body = std::move(inner);
  return c;
}

CondPtr cond_false() { return cond_not(cond_true()); }

CondPtr cond_and(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::And;
  c->l = std::move(l);
  c->r = std::move(r);
  return c;
}

CondPtr cond_or(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Cond>();
  c->kind = CondKind::Or;
  c->l = std::move(l);
  c->r = std::move(r);
  return c;
}

CondPtr cond_and_all(std::vector<CondPtr> cs) {
  if (cs.empty()) return cond_true();
  CondPtr acc = cs[0];
  for (size_t i = 1; i < cs.size(); i++) acc = cond_and(acc, cs[i]);
  return acc;
}

CondPtr cond_or_all(std::vector<CondPtr> cs) {
  if (cs.empty()) return cond_false();
  CondPtr acc = cs[0];
  for (size_t i = 1; i < cs.size(); i++) acc = cond_or(acc, cs[i]);
  return acc;
}

static bool is_cond_true(const CondPtr& c) { return c->kind == CondKind::True; }

bool is_cond_false(const CondPtr& c) {
  return c->kind == CondKind::Not && c->body->kind == CondKind::True;
}

// --- well-formedness ------------------------------------------------------

static bool embeds_by_id(const GraphPtr& context, const GraphPtr& d, std::string* why) {
  for (auto& n : context->nodes) {
    const Node* m = d->node(n.id);
    if (!m) {
      if (why) *why = "codomain drops context node " + std::to_string(n.id);
      return false;
    }
    bool both = n.label.has_value() == m->label.has_value();
    if (!both || (n.label && !label_equal(*n.label, *m->label))) {
      if (why) *why = "codomain changes label of context node " + std::to_string(n.id);
      return false;
    }
  }
  for (auto& e : context->edges) {
    const Edge* f = d->edge(e.id);
    if (!f || f->src != e.src || f->tgt != e.tgt) {
      if (why) *why = "codomain drops or rewires context edge " + std::to_string(e.id);
      return false;
    }
  }
  return true;
}

bool check_condition(const CondPtr& c, const GraphPtr& context, std::string* why) {
  switch (c->kind) {
    case CondKind::True:
    case CondKind::Constr: return true;
    case CondKind::ExistsInt: return check_condition(c->body, context, why);
    case CondKind::ExistsMorph: {
      if (!c->cod->totally_labelled()) {
        if (why) *why = "condition graph not totally labelled";
        return false;
      }
      if (!embeds_by_id(context, c->cod, why)) return false;
      return check_condition(c->body, c->cod, why);
    }
    case CondKind::Not: return check_condition(c->body, context, why);
    case CondKind::And:
    case CondKind::Or:
      return check_condition(c->l, context, why) && check_condition(c->r, context, why);
  }
  return true;
}

// --- variables -------------------------------------------------------------

static void fv(const CondPtr& c, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (c->kind) {
    case CondKind::True: return;
    case CondKind::Constr: {
      std::set<std::string> vs;
      collect_vars(c->gamma, vs);
      for (auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case CondKind::ExistsInt: {
      bool fresh = bound.insert(c->var).second;
      fv(c->body, bound, out);
      if (fresh) bound.erase(c->var);
      return;
    }
    case CondKind::ExistsMorph: {
      std::set<std::string> vs;
      for (auto& n : c->cod->nodes)
        if (n.label) collect_vars(*n.label, vs);
      for (auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      fv(c->body, bound, out);
      return;
    }
    case CondKind::Not: fv(c->body, bound, out); return;
    case CondKind::And:
    case CondKind::Or:
      fv(c->l, bound, out);
      fv(c->r, bound, out);
      return;
  }
}

std::set<std::string> free_vars(const CondPtr& c) {
  std::set<std::string> bound, out;
  fv(c, bound, out);
  return out;
}

std::set<std::string> all_vars(const CondPtr& c) {
  std::set<std::string> out;
  switch (c->kind) {
    case CondKind::True: break;
    case CondKind::Constr: collect_vars(c->gamma, out); break;
    case CondKind::ExistsInt: {
      out = all_vars(c->body);
      out.insert(c->var);
      break;
    }
    case CondKind::ExistsMorph: {
      out = all_vars(c->body);
      for (auto& n : c->cod->nodes)
        if (n.label) collect_vars(*n.label, out);
      break;
    }
    case CondKind::Not: out = all_vars(c->body); break;
    case CondKind::And:
    case CondKind::Or: {
      out = all_vars(c->l);
      auto o2 = all_vars(c->r);
      out.insert(o2.begin(), o2.end());
      break;
    }
  }
  return out;
}

void collect_consts(const CondPtr& c, std::set<long long>& out) {
  switch (c->kind) {
    case CondKind::True: return;
    case CondKind::Constr: collect_consts(c->gamma, out); return;
    case CondKind::ExistsInt: collect_consts(c->body, out); return;
    case CondKind::ExistsMorph:
      for (auto& n : c->cod->nodes)
        if (n.label)
          for (auto& e : *n.label) collect_consts(e, out);
      collect_consts(c->body, out);
      return;
    case CondKind::Not: collect_consts(c->body, out); return;
    case CondKind::And:
    case CondKind::Or:
      collect_consts(c->l, out);
      collect_consts(c->r, out);
      return;
  }
}

// --- substitution ------------------------------------------------------------

static GraphPtr subst_graph(const GraphPtr& g, const Subst& s) {
  GraphBuilder b(g->mode);
  for (auto& n : g->nodes)
    b.node(n.id, n.label ? std::optional<Label>(apply_subst(*n.label, s)) : std::nullopt);
  for (auto& e : g->edges) b.edge(e.id, e.src, e.tgt);
  return b.build();
}

CondPtr subst_condition(const CondPtr& c, const Subst& s) {
  if (s.empty()) return c;
  switch (c->kind) {
    case CondKind::True: return c;
    case CondKind::Constr: return cond_constr(apply_subst(c->gamma, s));
    case CondKind::ExistsInt: {
      Subst inner = s;
      inner.erase(c->var);  // binder shadows
      for (auto& [v, e] : inner) {
        std::set<std::string> vs;
        collect_vars(e, vs);
        if (vs.count(c->var))
          throw std::runtime_error("substitution would capture variable " + c->var);
      }
      return cond_exists_int(c->var, subst_condition(c->body, inner));
    }
    case CondKind::ExistsMorph:
      return cond_exists_morph(subst_graph(c->cod, s), subst_condition(c->body, s));
    case CondKind::Not: return cond_not(subst_condition(c->body, s));
    case CondKind::And:
      return cond_and(subst_condition(c->l, s), subst_condition(c->r, s));
    case CondKind::Or:
      return cond_or(subst_condition(c->l, s), subst_condition(c->r, s));
  }
  return c;
}

static CondPtr rename_bound(const CondPtr& c, Subst& map, std::set<std::string>& taken) {
  switch (c->kind) {
    case CondKind::True: return c;
    case CondKind::Constr: return cond_constr(apply_subst(c->gamma, map));
    case CondKind::ExistsInt: {
      std::string nv = fresh_var(c->var, taken);
      taken.insert(nv);
      auto saved = map.count(c->var) ? std::optional<Expr>(map[c->var]) : std::nullopt;
      map[c->var] = mk_var(nv);
      CondPtr body = rename_bound(c->body, map, taken);
      if (saved) map[c->var] = *saved;
      else map.erase(c->var);
      return cond_exists_int(nv, body);
    }
    case CondKind::ExistsMorph:
      return cond_exists_morph(subst_graph(c->cod, map), rename_bound(c->body, map, taken));
    case CondKind::Not: return cond_not(rename_bound(c->body, map, taken));
    case CondKind::And:
      return cond_and(rename_bound(c->l, map, taken), rename_bound(c->r, map, taken));
    case CondKind::Or:
      return cond_or(rename_bound(c->l, map, taken), rename_bound(c->r, map, taken));
  }
  return c;
}

CondPtr rename_bound_vars(const CondPtr& c, const std::set<std::string>& avoid) {
  std::set<std::string> taken = avoid;
  auto fvs = free_vars(c);
  taken.insert(fvs.begin(), fvs.end());
  Subst map;
  return rename_bound(c, map, taken);
}

// --- satisfaction --------------------------------------------------------------

namespace {

void int_candidates(const GraphPtr& G, const CondPtr& body, long long window,
                    std::set<long long>& out) {
  for (auto& n : G->nodes) {
    if (!n.label) continue;
    for (auto& e : *n.label)
      if (e->kind == ExprKind::Const) out.insert(e->value);
  }
  collect_consts(body, out);
  for (long long v = -window; v <= window; v++) out.insert(v);
}

bool sat_at(const Morphism& p, const Interp& I, const CondPtr& c, const SatConfig& cfg) {
  switch (c->kind) {
    case CondKind::True: return true;
    case CondKind::Constr: return eval_constraint(c->gamma, I);
    case CondKind::ExistsInt: {
      std::set<long long> cands;
      int_candidates(p.cod, c->body, cfg.int_window, cands);
      for (long long v : cands) {
        Interp I2 = I;
        I2[c->var] = v;
        if (sat_at(p, I2, c->body, cfg)) return true;
      }
      return false;
    }
    case CondKind::ExistsMorph: {
      auto inst = instantiate_graph(c->cod, I);
      if (!inst) return false;  // undefined label: no instantiation exists
      auto qs = find_injective_morphisms(*inst, p.cod, p.node_map, p.edge_map);
      for (auto& q : qs)
        if (sat_at(q, I, c->body, cfg)) return true;
      return false;
    }
    case CondKind::Not: return !sat_at(p, I, c->body, cfg);
    case CondKind::And: return sat_at(p, I, c->l, cfg) && sat_at(p, I, c->r, cfg);
    case CondKind::Or: return sat_at(p, I, c->l, cfg) || sat_at(p, I, c->r, cfg);
  }
  return false;
}

// Does x occur as a bare label item in some morphism codomain within c,
// without being re-bound on the way?
bool anchored(const std::string& x, const CondPtr& c) {
  switch (c->kind) {
    case CondKind::True:
    case CondKind::Constr: return false;
    case CondKind::ExistsInt:
      if (c->var == x) return false;  // shadowed below
      return anchored(x, c->body);
    case CondKind::ExistsMorph: {
      for (auto& n : c->cod->nodes)
        if (n.label)
          for (auto& e : *n.label)
            if (e->kind == ExprKind::Var && e->name == x) return true;
      return anchored(x, c->body);
    }
    case CondKind::Not: return anchored(x, c->body);
    case CondKind::And:
    case CondKind::Or: return anchored(x, c->l) || anchored(x, c->r);
  }
  return false;
}

void unanchored_walk(const CondPtr& c, std::vector<std::string>& out) {
  switch (c->kind) {
    case CondKind::True:
    case CondKind::Constr: return;
    case CondKind::ExistsInt:
      if (!anchored(c->var, c->body)) out.push_back(c->var);
      unanchored_walk(c->body, out);
      return;
    case CondKind::ExistsMorph:
    case CondKind::Not: unanchored_walk(c->body, out); return;
    case CondKind::And:
    case CondKind::Or:
      unanchored_walk(c->l, out);
      unanchored_walk(c->r, out);
      return;
  }
}

}  // namespace

std::vector<std::string> unanchored_vars(const CondPtr& c) {
  std::vector<std::string> out;
  unanchored_walk(c, out);
  return out;
}

bool satisfies_at(const Morphism& p, const Interp& I, const CondPtr& c,
                  const SatConfig& cfg) {
  return sat_at(p, I, c, cfg);
}

SatResult satisfies(const GraphPtr& G, const CondPtr& c, const SatConfig& cfg) {
  auto fvs = free_vars(c);
  if (!fvs.empty())
    throw std::runtime_error("satisfies: condition has free variables (" + *fvs.begin() + ")");
  if (G->mode != GraphMode::Concrete)
    throw std::runtime_error("satisfies: host graph must be concrete");
  SatResult r;
  Morphism p;
  p.dom = empty_graph(GraphMode::Concrete);
  p.cod = G;
  r.value = sat_at(p, {}, c, cfg);
  if (cfg.warn_unanchored) {
    for (auto& v : unanchored_vars(c))
      r.warnings.push_back("quantified variable '" + v +
                           "' has no bare label occurrence; its integer search is "
                           "window-bounded");
  }
  return r;
}

// --- structural equality and simplification --------------------------------------

static bool graph_identical(const GraphPtr& a, const GraphPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->nodes.size() != b->nodes.size() || a->edges.size() != b->edges.size())
    return false;
  for (size_t i = 0; i < a->nodes.size(); i++) {
    if (a->nodes[i].id != b->nodes[i].id) return false;
    auto &la = a->nodes[i].label, &lb = b->nodes[i].label;
    if (la.has_value() != lb.has_value()) return false;
    if (la && !label_equal(*la, *lb)) return false;
  }
  for (size_t i = 0; i < a->edges.size(); i++)
    if (a->edges[i].id != b->edges[i].id || a->edges[i].src != b->edges[i].src ||
        a->edges[i].tgt != b->edges[i].tgt)
      return false;
  return true;
}

static bool cond_identical(const CondPtr& a, const CondPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case CondKind::True: return true;
    case CondKind::Constr:
      return compare(normalize(a->gamma), normalize(b->gamma)) == 0;
    case CondKind::ExistsInt:
      return a->var == b->var && cond_identical(a->body, b->body);
    case CondKind::ExistsMorph:
      return graph_identical(a->cod, b->cod) && cond_identical(a->body, b->body);
    case CondKind::Not: return cond_identical(a->body, b->body);
    case CondKind::And:
    case CondKind::Or:
      return cond_identical(a->l, b->l) && cond_identical(a->r, b->r);
  }
  return false;
}

static void flatten_juncts(CondKind k, const CondPtr& c, std::vector<CondPtr>& out) {
  if (c->kind == k) {
    flatten_juncts(k, c->l, out);
    flatten_juncts(k, c->r, out);
  } else {
    out.push_back(c);
  }
}

CondPtr simplify(const CondPtr& c) {
  switch (c->kind) {
    case CondKind::True: return c;
    case CondKind::Constr: {
      Constraint g = normalize(c->gamma);
      switch (g->kind) {
        case ConstrKind::True: return cond_true();
        case ConstrKind::False: return cond_false();
        case ConstrKind::Not: return simplify(cond_not(cond_constr(g->a)));
        case ConstrKind::And:
          return simplify(cond_and(cond_constr(g->a), cond_constr(g->b)));
        case ConstrKind::Or:
          return simplify(cond_or(cond_constr(g->a), cond_constr(g->b)));
        case ConstrKind::Cmp: {
          std::set<std::string> vs;
          collect_vars(g, vs);
          if (vs.empty())
            return eval_constraint(g, {}) ? cond_true() : cond_false();
          return cond_constr(g);
        }
      }
      return cond_constr(g);
    }
    case CondKind::ExistsInt: {
      CondPtr body = simplify(c->body);
      if (is_cond_false(body)) return cond_false();
      if (!free_vars(body).count(c->var)) return body;
      return cond_exists_int(c->var, body);
    }
    case CondKind::ExistsMorph: {
      CondPtr body = simplify(c->body);
      if (is_cond_false(body)) return cond_false();
      return cond_exists_morph(c->cod, body);
    }
    case CondKind::Not: {
      CondPtr body = simplify(c->body);
      if (body->kind == CondKind::True) return cond_false();
      if (is_cond_false(body)) return cond_true();
      if (body->kind == CondKind::Not) return body->body;
      return cond_not(body);
    }
    case CondKind::And:
    case CondKind::Or: {
      bool conj = c->kind == CondKind::And;
      std::vector<CondPtr> raw, juncts;
      flatten_juncts(c->kind, c, raw);
      for (auto& j : raw) {
        CondPtr s = simplify(j);
        if (conj) {
          if (is_cond_true(s)) continue;
          if (is_cond_false(s)) return cond_false();
        } else {
          if (is_cond_false(s)) continue;
          if (is_cond_true(s)) return cond_true();
        }
        std::vector<CondPtr> inner;
        flatten_juncts(c->kind, s, inner);
        for (auto& i : inner) {
          bool dup = false;
          for (auto& have : juncts)
            if (cond_identical(i, have)) {
              dup = true;
              break;
            }
          if (!dup) juncts.push_back(i);
        }
      }
      if (juncts.empty()) return conj ? cond_true() : cond_false();
      CondPtr acc = juncts[0];
      for (size_t i = 1; i < juncts.size(); i++)
        acc = conj ? cond_and(acc, juncts[i]) : cond_or(acc, juncts[i]);
      return acc;
    }
  }
  return c;
}

// --- canonical form ---------------------------------------------------------------

namespace {

// Canonical serialisation: bound integer variables indexed in traversal
// order (runs permuted, min taken), nodes indexed per chain (new-node
// orderings permuted, min taken), And/Or juncts sorted.
struct Canon {
  struct Ctx {
    Subst var_map;                  // bound var -> $k placeholder
    int next_var = 0;
    std::map<NodeId, int> node_idx; // current context node id -> canonical index
    int next_node = 0;
  };

  std::string run(const CondPtr& c, const Ctx& ctx) {
    switch (c->kind) {
      case CondKind::True: return "T";
      case CondKind::Constr:
        return "C[" + to_string(normalize(apply_subst(c->gamma, ctx.var_map))) + "]";
      case CondKind::ExistsInt: {
        // maximal run of integer binders
        std::vector<std::string> vars;
        CondPtr body = c;
        while (body->kind == CondKind::ExistsInt) {
          vars.push_back(body->var);
          body = body->body;
        }
        std::vector<size_t> order(vars.size());
        for (size_t i = 0; i < order.size(); i++) order[i] = i;
        std::string best;
        bool have = false;
        std::sort(order.begin(), order.end());
        do {
          Ctx c2 = ctx;
          // later binders of the same name shadow earlier ones
          for (size_t i : order)
            c2.var_map[vars[i]] = mk_var("$" + std::to_string(c2.next_var++));
          std::string s = run(body, c2);
          if (!have || s < best) {
            best = std::move(s);
            have = true;
          }
        } while (std::next_permutation(order.begin(), order.end()));
        return "X" + std::to_string(vars.size()) + "(" + best + ")";
      }
      case CondKind::ExistsMorph: {
        std::vector<NodeId> fresh;
        for (auto& n : c->cod->nodes)
          if (!ctx.node_idx.count(n.id)) fresh.push_back(n.id);
        std::sort(fresh.begin(), fresh.end());
        std::string best;
        bool have = false;
        std::vector<NodeId> perm = fresh;
        do {
          Ctx c2 = ctx;
          for (NodeId v : perm) c2.node_idx[v] = c2.next_node++;
          std::string s = serialize_graph(c->cod, c2) + run(c->body, c2);
          if (!have || s < best) {
            best = std::move(s);
            have = true;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return "M(" + best + ")";
      }
      case CondKind::Not: return "N(" + run(c->body, ctx) + ")";
      case CondKind::And:
      case CondKind::Or: {
        std::vector<CondPtr> juncts;
        flatten_juncts(c->kind, c, juncts);
        std::vector<std::string> ss;
        ss.reserve(juncts.size());
        for (auto& j : juncts) ss.push_back(run(j, ctx));
        std::sort(ss.begin(), ss.end());
        ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
        std::ostringstream os;
        os << (c->kind == CondKind::And ? "A{" : "O{");
        for (auto& s : ss) os << s << ",";
        os << "}";
        return os.str();
      }
    }
    return "?";
  }

  std::string serialize_graph(const GraphPtr& g, const Ctx& ctx) {
    std::ostringstream os;
    os << "g<";
    std::vector<std::pair<int, std::string>> nodes;
    for (auto& n : g->nodes) {
      std::string lbl = n.label
          ? to_string(normalize(apply_subst(*n.label, ctx.var_map)))
          : "_";
      nodes.emplace_back(ctx.node_idx.at(n.id), lbl);
    }
    std::sort(nodes.begin(), nodes.end());
    for (auto& [i, l] : nodes) os << i << ":" << l << ";";
    os << "|";
    std::vector<std::pair<int, int>> es;
    for (auto& e : g->edges)
      es.emplace_back(ctx.node_idx.at(e.src), ctx.node_idx.at(e.tgt));
    std::sort(es.begin(), es.end());
    for (auto& [s, t] : es) os << s << ">" << t << ";";
    os << ">";
    return os.str();
  }
};

}  // namespace

std::string canonical_cond(const CondPtr& c, const GraphPtr& context) {
  Canon cn;
  Canon::Ctx ctx;
  for (auto& n : context->nodes) ctx.node_idx[n.id] = ctx.next_node++;
  CondPtr s = simplify(c);
  return cn.run(s, ctx);
}

// --- printing ----------------------------------------------------------------------

namespace {

// Printed-form precedence: quantifiers 0 (swallow everything rightward),
// or 1, and 2, atoms/not 3.
struct CondPrinter {
  int next_graph = 0;

  enum class Form { Atom, Quant, UnivQuant, NotForm, AndForm, OrForm };

  static Form classify(const CondPtr& c) {
    switch (c->kind) {
      case CondKind::True:
      case CondKind::Constr: return Form::Atom;
      case CondKind::ExistsInt:
      case CondKind::ExistsMorph: return Form::Quant;
      case CondKind::And: return Form::AndForm;
      case CondKind::Or: return Form::OrForm;
      case CondKind::Not:
        if (c->body->kind == CondKind::True) return Form::Atom;  // false
        if (c->body->kind == CondKind::ExistsInt ||
            c->body->kind == CondKind::ExistsMorph)
          return Form::UnivQuant;  // not ex ... printed as all ...
        return Form::NotForm;
    }
    return Form::Atom;
  }

  static int prec(Form f) {
    switch (f) {
      case Form::Quant:
      case Form::UnivQuant: return 0;
      case Form::OrForm: return 1;
      case Form::AndForm: return 2;
      default: return 3;
    }
  }

  void print(const CondPtr& c, const GraphPtr& context, const std::string& ctx_name,
             int need, std::ostringstream& os) {
    Form f = classify(c);
    bool paren = prec(f) < need;
    if (paren) os << "(";
    int inner_need = paren ? 0 : need;
    switch (f) {
      case Form::Atom:
        if (c->kind == CondKind::True) os << "true";
        else if (c->kind == CondKind::Not) os << "false";
        else {
          bool cp = c->gamma->kind == ConstrKind::And || c->gamma->kind == ConstrKind::Or;
          if (cp) os << "(";
          os << to_string(c->gamma);
          if (cp) os << ")";
        }
        break;
      case Form::NotForm:
        os << "not ";
        print(c->body, context, ctx_name, 4, os);
        break;
      case Form::Quant:
        print_quant(c, context, ctx_name, false, os);
        break;
      case Form::UnivQuant:
        print_quant(c->body, context, ctx_name, true, os);
        break;
      case Form::AndForm:
      case Form::OrForm: {
        bool conj = f == Form::AndForm;
        int my = conj ? 2 : 1;
        std::vector<CondPtr> juncts;
        flatten_juncts(c->kind, c, juncts);
        for (size_t i = 0; i < juncts.size(); i++) {
          if (i) os << (conj ? " and " : " or ");
          // the last operand may be a quantifier without parens
          int opneed = my + (i + 1 < juncts.size() ? 0 : 0);
          print(juncts[i], context, ctx_name, std::max(opneed, my), os);
        }
        (void)inner_need;
        break;
      }
    }
    if (paren) os << ")";
  }

  // q is the quantifier under the negation when universal: not(ex Q. B)
  // prints as all Q. print(not B), with double negation collapsed.
  void print_quant(const CondPtr& q, const GraphPtr& context, const std::string& ctx_name,
                   bool universal, std::ostringstream& os) {
    CondPtr body = q->body;
    if (universal) body = body->kind == CondKind::Not ? body->body : cond_not(body);
    if (q->kind == CondKind::ExistsInt) {
      os << (universal ? "all int " : "ex int ") << q->var;
      // collapse a same-polarity run
      while (body->kind == CondKind::ExistsInt && !universal) {
        os << ", " << body->var;
        body = body->body;
      }
      if (universal) {
        // ¬∃x.∃y.¬b == ∀x,y.b : collapse while the pattern continues
        while (body->kind == CondKind::Not && body->body->kind == CondKind::ExistsInt) {
          os << ", " << body->body->var;
          CondPtr nb = body->body->body;
          body = nb->kind == CondKind::Not ? nb->body : cond_not(nb);
        }
      }
      os << ". ";
      print(body, context, ctx_name, 0, os);
      return;
    }
    std::string name = "g" + std::to_string(++next_graph);
    os << (universal ? "all " : "ex ") << name << " " << graph_items(q->cod);
    if (!context->nodes.empty() || !context->edges.empty())
      os << " extends " << ctx_name;
    if (!universal && body->kind == CondKind::True) return;  // ex C shorthand
    os << ". ";
    print(body, q->cod, name, 0, os);
  }

  static std::string graph_items(const GraphPtr& g) {
    std::ostringstream os;
    os << "{";
    for (auto& n : g->nodes) {
      os << " node n" << n.id;
      if (n.label) os << " " << to_string(*n.label);
      os << ";";
    }
    // opposite pairs print as the undirected shorthand
    std::map<std::pair<NodeId, NodeId>, int> count;
    for (auto& e : g->edges) count[{e.src, e.tgt}]++;
    for (auto& [st, cnt] : count) {
      auto [s, t] = st;
      if (s == t) {
        for (int i = 0; i < cnt; i++) os << " edge n" << s << " -> n" << t << ";";
        continue;
      }
      int rev = count.count({t, s}) ? count[{t, s}] : 0;
      int pairs = std::min(cnt, rev);
      if (s < t)
        for (int i = 0; i < pairs; i++) os << " edge n" << s << " -- n" << t << ";";
      for (int i = pairs; i < cnt; i++) os << " edge n" << s << " -> n" << t << ";";
    }
    os << " }";
    return os.str();
  }
};

}  // namespace

std::string to_string(const CondPtr& c) {
  CondPrinter p;
  std::ostringstream os;
  p.print(c, empty_graph(GraphMode::Symbolic), "", 0, os);
  return os.str();
}

}  // namespace gpil
