#include "transform.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace gpil {

// --- freshen -----------------------------------------------------------------

namespace {

struct Freshener {
  std::set<std::string> taken;
  int counter = 0;

  std::string next_fresh() {
    for (;;) {
      std::string cand = "v" + std::to_string(++counter);
      if (taken.insert(cand).second) return cand;
    }
  }

  // rewrites: node id -> replacement label, threaded down each branch
  CondPtr walk(const CondPtr& c, std::map<NodeId, Label> rewrites) {
    switch (c->kind) {
      case CondKind::True:
      case CondKind::Constr: return c;
      case CondKind::ExistsInt:
        return cond_exists_int(c->var, walk(c->body, std::move(rewrites)));
      case CondKind::ExistsMorph: {
        GraphBuilder b(GraphMode::Symbolic);
        std::vector<std::string> fresh_vars;
        std::vector<Constraint> equalities;
        for (auto& n : c->cod->nodes) {
          auto it = rewrites.find(n.id);
          if (it != rewrites.end()) {
            b.node(n.id, it->second);
            continue;
          }
          Label out;
          bool changed = false;
          for (auto& item : *n.label) {
            if (item->kind == ExprKind::Var) {
              out.push_back(item);
              continue;
            }
            std::string w = next_fresh();
            fresh_vars.push_back(w);
            equalities.push_back(mk_cmp(CmpOp::Eq, mk_var(w), item));
            out.push_back(mk_var(w));
            changed = true;
          }
          if (changed) rewrites[n.id] = out;
          b.node(n.id, out);
        }
        for (auto& e : c->cod->edges) b.edge(e.id, e.src, e.tgt);
        CondPtr body = walk(c->body, std::move(rewrites));
        for (auto it = equalities.rbegin(); it != equalities.rend(); ++it)
          body = cond_and(cond_constr(*it), body);
        CondPtr out = cond_exists_morph(b.build(), body);
        for (auto it = fresh_vars.rbegin(); it != fresh_vars.rend(); ++it)
          out = cond_exists_int(*it, out);
        return out;
      }
      case CondKind::Not: return cond_not(walk(c->body, std::move(rewrites)));
      case CondKind::And:
        return cond_and(walk(c->l, rewrites), walk(c->r, std::move(rewrites)));
      case CondKind::Or:
        return cond_or(walk(c->l, rewrites), walk(c->r, std::move(rewrites)));
    }
    return c;
  }
};

}  // namespace

CondPtr freshen(const CondPtr& c, const RuleSchema& r) {
  if (!free_vars(c).empty())
    throw std::runtime_error("freshen: condition must be an E-constraint");
  std::set<std::string> avoid(r.lhs_vars.begin(), r.lhs_vars.end());
  avoid.insert(r.rhs_vars.begin(), r.rhs_vars.end());
  CondPtr renamed = rename_bound_vars(c, avoid);
  Freshener f;
  f.taken = avoid;
  auto used = all_vars(renamed);
  f.taken.insert(used.begin(), used.end());
  return f.walk(renamed, {});
}

// --- dang ----------------------------------------------------------------------

CondPtr dang(const RuleSchema& r) {
  const GraphPtr& L = r.lhs;
  std::set<NodeId> deleted;
  for (auto& n : L->nodes)
    if (!r.preserved.count(n.id)) deleted.insert(n.id);
  if (deleted.empty()) return cond_true();

  std::set<std::string> taken(r.lhs_vars.begin(), r.lhs_vars.end());
  int counter = 0;
  auto fresh = [&]() {
    for (;;) {
      std::string cand = "w" + std::to_string(++counter);
      if (taken.insert(cand).second) return cand;
    }
  };

  NodeId new_node = L->max_node_id() + 1;
  auto extend = [&](NodeId s, NodeId t, const std::optional<std::string>& var) {
    GraphBuilder b(GraphMode::Symbolic);
    for (auto& n : L->nodes) b.node(n.id, n.label);
    if (var) b.node(new_node, Label{mk_var(*var)});
    for (auto& e : L->edges) b.edge(e.id, e.src, e.tgt);
    b.edge(L->max_edge_id() + 1, s, t);
    return b.build();
  };

  std::vector<CondPtr> conjuncts;
  // (1) a loop on a deleted node
  for (auto& n : L->nodes)
    if (deleted.count(n.id))
      conjuncts.push_back(cond_not(cond_exists_morph(extend(n.id, n.id, std::nullopt),
                                                     cond_true())));
  // (2) an edge between distinct nodes, touching a deleted one
  for (auto& u : L->nodes)
    for (auto& v : L->nodes) {
      if (u.id == v.id) continue;
      if (!deleted.count(u.id) && !deleted.count(v.id)) continue;
      conjuncts.push_back(cond_not(cond_exists_morph(extend(u.id, v.id, std::nullopt),
                                                     cond_true())));
    }
  // (3) a fresh-variable node with one incident edge at a deleted node
  for (auto& n : L->nodes) {
    if (!deleted.count(n.id)) continue;
    std::string w1 = fresh();
    conjuncts.push_back(cond_not(cond_exists_int(
        w1, cond_exists_morph(extend(n.id, new_node, w1), cond_true()))));
    std::string w2 = fresh();
    conjuncts.push_back(cond_not(cond_exists_int(
        w2, cond_exists_morph(extend(new_node, n.id, w2), cond_true()))));
  }
  return cond_and_all(std::move(conjuncts));
}

// --- app -----------------------------------------------------------------------

CondPtr app_rule(const RuleSchema& r, const TransformOptions& opts) {
  CondPtr body = opts.corrupt == Corrupt::AppDropDang ? cond_true() : dang(r);
  CondPtr c = cond_exists_morph(r.lhs, body);
  for (auto it = r.lhs_vars.rbegin(); it != r.lhs_vars.rend(); ++it)
    c = cond_exists_int(*it, c);
  return simplify(c);
}

CondPtr app(const std::vector<RulePtr>& rules, const TransformOptions& opts) {
  std::vector<CondPtr> disjuncts;
  for (auto& r : rules) disjuncts.push_back(app_rule(*r, opts));
  if (opts.corrupt == Corrupt::AppDropRule && !disjuncts.empty())
    disjuncts.pop_back();
  return simplify(cond_or_all(std::move(disjuncts)));
}

// --- shift ----------------------------------------------------------------------

namespace {

// Re-identify E so that b: P' -> E becomes an id-inclusion; returns the
// renamed graph and the adjusted s: C -> E.
struct RebasedQuotient {
  GraphPtr object;
  Morphism from_c;
};

RebasedQuotient rebase_quotient(const OverlapQuotient& oq) {
  const GraphPtr& Pp = oq.from_p.dom;
  const GraphPtr& E = oq.object;
  std::map<NodeId, NodeId> node_ren;  // E id -> new id
  std::map<EdgeId, EdgeId> edge_ren;
  for (auto& [v, w] : oq.from_p.node_map) node_ren[w] = v;
  for (auto& [e, f] : oq.from_p.edge_map) edge_ren[f] = e;
  NodeId next_node = Pp->max_node_id() + 1;
  EdgeId next_edge = Pp->max_edge_id() + 1;
  for (auto& n : E->nodes)
    if (!node_ren.count(n.id)) node_ren[n.id] = next_node++;
  for (auto& e : E->edges)
    if (!edge_ren.count(e.id)) edge_ren[e.id] = next_edge++;
  GraphBuilder b(E->mode);
  for (auto& n : E->nodes) b.node(node_ren[n.id], n.label);
  for (auto& e : E->edges) b.edge(edge_ren[e.id], node_ren[e.src], node_ren[e.tgt]);
  RebasedQuotient out;
  out.object = b.build();
  out.from_c.dom = oq.from_c.dom;
  out.from_c.cod = out.object;
  for (auto& [v, w] : oq.from_c.node_map) out.from_c.node_map[v] = node_ren[w];
  for (auto& [e, f] : oq.from_c.edge_map) out.from_c.edge_map[e] = edge_ren[f];
  return out;
}

struct Shifter {
  const TransformOptions& opts;

  // components of the node labels of P', deduplicated after normalize
  std::vector<Expr> sigma(const GraphPtr& Pp) {
    std::vector<Expr> out;
    for (auto& n : Pp->nodes) {
      if (!n.label) continue;
      for (auto& item : *n.label) {
        Expr e = normalize(item);
        bool dup = false;
        for (auto& have : out)
          if (expr_equal(have, e)) {
            dup = true;
            break;
          }
        if (!dup) out.push_back(e);
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return out;
  }

  CondPtr run(const Morphism& p, const CondPtr& c) {
    switch (c->kind) {
      case CondKind::True:
      case CondKind::Constr: return c;
      case CondKind::ExistsInt: {
        std::vector<CondPtr> disjuncts;
        disjuncts.push_back(cond_exists_int(c->var, run(p, c->body)));
        for (auto& l : sigma(p.cod)) {
          Subst s{{c->var, l}};
          disjuncts.push_back(run(p, subst_condition(c->body, s)));
        }
        return cond_or_all(std::move(disjuncts));
      }
      case CondKind::ExistsMorph: {
        Morphism incl = inclusion_morphism(p.dom, c->cod);
        Pushout po = pushout(p, incl);
        auto quotients = enumerate_overlap_quotients(po.left, po.right);
        std::vector<CondPtr> disjuncts;
        for (size_t i = 0; i < quotients.size(); i++) {
          if (opts.corrupt == Corrupt::ShiftIdentityQuotientOnly && i > 0) break;
          RebasedQuotient rq = rebase_quotient(quotients[i]);
          disjuncts.push_back(
              cond_exists_morph(rq.object, run(rq.from_c, c->body)));
        }
        return cond_or_all(std::move(disjuncts));
      }
      case CondKind::Not: return cond_not(run(p, c->body));
      case CondKind::And: return cond_and(run(p, c->l), run(p, c->r));
      case CondKind::Or: return cond_or(run(p, c->l), run(p, c->r));
    }
    return c;
  }
};

void require_freshened(const RuleSchema& r, const CondPtr& c) {
  auto vs = all_vars(c);
  for (auto& v : r.lhs_vars)
    if (vs.count(v))
      throw std::runtime_error("shift: condition shares variable '" + v +
                               "' with the rule (freshen first)");
  // labels must be lists of variables
  std::function<void(const CondPtr&)> walk = [&](const CondPtr& cc) {
    switch (cc->kind) {
      case CondKind::True:
      case CondKind::Constr: return;
      case CondKind::ExistsInt: walk(cc->body); return;
      case CondKind::ExistsMorph:
        for (auto& n : cc->cod->nodes)
          for (auto& item : *n.label)
            if (item->kind != ExprKind::Var)
              throw std::runtime_error(
                  "shift: condition labels must be variable lists (freshen first)");
        walk(cc->body);
        return;
      case CondKind::Not: walk(cc->body); return;
      case CondKind::And:
      case CondKind::Or:
        walk(cc->l);
        walk(cc->r);
        return;
    }
  };
  walk(c);
}

}  // namespace

CondPtr shift(const RuleSchema& r, const CondPtr& c, const TransformOptions& opts) {
  require_freshened(r, c);
  Morphism p;
  p.dom = empty_graph(GraphMode::Symbolic);
  p.cod = r.lhs;
  Shifter sh{opts};
  return simplify(sh.run(p, c));
}

// --- right ----------------------------------------------------------------------

namespace {

struct SpanRule {
  GraphPtr L, K, R;
  Morphism kl;  // K -> L
  Morphism kr;  // K -> R
};

struct Righter {
  const TransformOptions& opts;

  CondPtr run(const SpanRule& rr, const CondPtr& c) {
    switch (c->kind) {
      case CondKind::True:
      case CondKind::Constr: return c;
      case CondKind::ExistsInt:
        return cond_exists_int(c->var, run(rr, c->body));
      case CondKind::ExistsMorph: {
        Morphism incl = inclusion_morphism(rr.L, c->cod);
        auto poc = pushout_complement(rr.kl, incl);
        if (!poc)
          return opts.corrupt == Corrupt::RightNoComplementTrue ? cond_true()
                                                               : cond_false();
        Pushout po = pushout(poc->to_z, rr.kr);  // Y with Z -> Y, R -> Y
        // re-id Y so b: R -> Y is an id-inclusion
        std::map<NodeId, NodeId> node_ren;
        std::map<EdgeId, EdgeId> edge_ren;
        for (auto& [v, w] : po.right.node_map) node_ren[w] = v;
        for (auto& [e, f] : po.right.edge_map) edge_ren[f] = e;
        NodeId next_node = rr.R->max_node_id() + 1;
        EdgeId next_edge = rr.R->max_edge_id() + 1;
        for (auto& n : po.object->nodes)
          if (!node_ren.count(n.id)) node_ren[n.id] = next_node++;
        for (auto& e : po.object->edges)
          if (!edge_ren.count(e.id)) edge_ren[e.id] = next_edge++;
        GraphBuilder b(GraphMode::Symbolic);
        for (auto& n : po.object->nodes) b.node(node_ren[n.id], n.label);
        for (auto& e : po.object->edges)
          b.edge(edge_ren[e.id], node_ren[e.src], node_ren[e.tgt]);
        GraphPtr Y = b.build();
        Morphism zy;  // Z -> Y
        zy.dom = poc->object;
        zy.cod = Y;
        for (auto& [v, w] : po.left.node_map) zy.node_map[v] = node_ren[w];
        for (auto& [e, f] : po.left.edge_map) zy.edge_map[e] = edge_ren[f];
        SpanRule derived{c->cod, poc->object, Y, poc->embed, zy};
        return cond_exists_morph(Y, run(derived, c->body));
      }
      case CondKind::Not: return cond_not(run(rr, c->body));
      case CondKind::And: return cond_and(run(rr, c->l), run(rr, c->r));
      case CondKind::Or: return cond_or(run(rr, c->l), run(rr, c->r));
    }
    return c;
  }
};

SpanRule initial_span(const RuleSchema& r) {
  SpanRule s;
  s.L = r.lhs;
  s.R = r.rhs;
  s.K = rule_interface(r);
  s.kl.dom = s.K;
  s.kl.cod = s.L;
  s.kr.dom = s.K;
  s.kr.cod = s.R;
  for (auto& [l, rr] : r.preserved) {
    s.kl.node_map[l] = l;
    s.kr.node_map[l] = rr;
  }
  return s;
}

}  // namespace

CondPtr right(const RuleSchema& r, const CondPtr& c, const TransformOptions& opts) {
  std::string why;
  if (!check_condition(c, r.lhs, &why))
    throw std::runtime_error("right: condition not over the left-hand side: " + why);
  Righter ri{opts};
  return simplify(ri.run(initial_span(r), c));
}

// --- wpost ----------------------------------------------------------------------

CondPtr wpost_rule(const RuleSchema& r, const CondPtr& c, const TransformOptions& opts) {
  CondPtr cf = freshen(c, r);
  CondPtr sh = shift(r, cf, opts);
  CondPtr rg = right(r, sh, opts);
  CondPtr dg = opts.corrupt == Corrupt::WpostDropInverseDang ? cond_true()
                                                            : dang(*invert(r));
  CondPtr body = cond_exists_morph(r.rhs, cond_and(dg, rg));
  // vars(L) bound outermost: Shift substitution branches may mention them
  for (auto it = r.lhs_vars.rbegin(); it != r.lhs_vars.rend(); ++it)
    body = cond_exists_int(*it, body);
  return simplify(body);
}

CondPtr wpost(const std::vector<RulePtr>& rules, const CondPtr& c,
              const TransformOptions& opts) {
  std::vector<CondPtr> disjuncts;
  for (auto& r : rules) disjuncts.push_back(wpost_rule(*r, c, opts));
  return simplify(cond_or_all(std::move(disjuncts)));
}

}  // namespace gpil
