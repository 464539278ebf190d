#include "rules.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace gpil {

static std::vector<std::string> sorted_vars(const GraphPtr& g) {
  std::set<std::string> vs;
  for (auto& n : g->nodes)
    if (n.label) collect_vars(*n.label, vs);
  return {vs.begin(), vs.end()};
}

RulePtr make_rule(std::string name, GraphPtr lhs, GraphPtr rhs,
                  std::map<NodeId, NodeId> preserved, bool for_matching) {
  auto r = std::make_shared<RuleSchema>();
  r->name = std::move(name);
  r->lhs = std::move(lhs);
  r->rhs = std::move(rhs);
  r->preserved = std::move(preserved);
  if (!r->lhs->totally_labelled() || !r->rhs->totally_labelled())
    throw std::runtime_error("rule " + r->name + ": sides must be totally labelled");
  r->lhs_vars = sorted_vars(r->lhs);
  r->rhs_vars = sorted_vars(r->rhs);
  if (!std::includes(r->lhs_vars.begin(), r->lhs_vars.end(), r->rhs_vars.begin(),
                     r->rhs_vars.end()))
    throw std::runtime_error("rule " + r->name + ": vars(rhs) not within vars(lhs)");
  std::set<NodeId> rhs_seen;
  for (auto& [l, rr] : r->preserved) {
    if (!r->lhs->has_node(l) || !r->rhs->has_node(rr))
      throw std::runtime_error("rule " + r->name + ": preserved node missing");
    if (!rhs_seen.insert(rr).second)
      throw std::runtime_error("rule " + r->name + ": preserved map not injective");
  }
  if (for_matching) {
    // every variable must occur somewhere as a bare list item in lhs
    std::set<std::string> bare;
    for (auto& n : r->lhs->nodes)
      for (auto& item : *n.label)
        if (item->kind == ExprKind::Var) bare.insert(item->name);
    for (auto& v : r->lhs_vars)
      if (!bare.count(v))
        throw std::runtime_error("rule " + r->name + ": variable " + v +
                                 " never occurs bare in the left-hand side");
  }
  return r;
}

RulePtr invert(const RuleSchema& r) {
  auto inv = std::make_shared<RuleSchema>();
  inv->name = r.name + "_inv";
  inv->lhs = r.rhs;
  inv->rhs = r.lhs;
  for (auto& [l, rr] : r.preserved) inv->preserved[rr] = l;
  inv->lhs_vars = r.rhs_vars;
  inv->rhs_vars = r.lhs_vars;
  return inv;
}

static bool graph_identical(const GraphPtr& a, const GraphPtr& b) {
  if (a->nodes.size() != b->nodes.size() || a->edges.size() != b->edges.size())
    return false;
  for (size_t i = 0; i < a->nodes.size(); i++) {
    if (a->nodes[i].id != b->nodes[i].id) return false;
    auto &la = a->nodes[i].label, &lb = b->nodes[i].label;
    if (la.has_value() != lb.has_value()) return false;
    if (la && !label_equal(*la, *lb)) return false;
  }
  for (size_t i = 0; i < a->edges.size(); i++) {
    if (a->edges[i].id != b->edges[i].id || a->edges[i].src != b->edges[i].src ||
        a->edges[i].tgt != b->edges[i].tgt)
      return false;
  }
  return true;
}

bool rule_equal(const RulePtr& a, const RulePtr& b) {
  return graph_identical(a->lhs, b->lhs) && graph_identical(a->rhs, b->rhs) &&
         a->preserved == b->preserved;
}

GraphPtr rule_interface(const RuleSchema& r) {
  GraphBuilder b(GraphMode::Symbolic);
  for (auto& [l, rr] : r.preserved) b.node(l, std::nullopt);
  return b.build();
}

std::optional<ConcreteRule> instantiate(const RuleSchema& r, const Interp& I) {
  for (auto& v : r.lhs_vars)
    if (!I.count(v)) throw std::runtime_error("interpretation domain mismatch");
  auto li = instantiate_graph(r.lhs, I);
  if (!li) return std::nullopt;
  auto ri = instantiate_graph(r.rhs, I);
  if (!ri) return std::nullopt;
  ConcreteRule c;
  c.lhs = *li;
  c.rhs = *ri;
  GraphBuilder kb(GraphMode::Concrete);
  for (auto& [l, rr] : r.preserved) kb.node(l, std::nullopt);
  c.interface = kb.build();
  c.to_lhs.dom = c.interface;
  c.to_lhs.cod = c.lhs;
  c.to_rhs.dom = c.interface;
  c.to_rhs.cod = c.rhs;
  for (auto& [l, rr] : r.preserved) {
    c.to_lhs.node_map[l] = l;
    c.to_rhs.node_map[l] = rr;
  }
  return c;
}

bool dangling_ok(const ConcreteRule& rule, const Morphism& g) {
  std::set<NodeId> deleted;  // images of L - K
  std::set<NodeId> k_lhs;
  for (auto& [k, l] : rule.to_lhs.node_map) k_lhs.insert(l);
  for (auto& n : rule.lhs->nodes)
    if (!k_lhs.count(n.id)) deleted.insert(g.node_map.at(n.id));
  std::set<EdgeId> l_edges;
  for (auto& [e, f] : g.edge_map) l_edges.insert(f);
  for (auto& e : g.cod->edges) {
    if (l_edges.count(e.id)) continue;
    if (deleted.count(e.src) || deleted.count(e.tgt)) return false;
  }
  return true;
}

namespace {

// Unification-based match search: assign lhs nodes to G nodes in id order,
// deriving the interpretation from bare variable items; compound items are
// checked once the interpretation is complete.
struct RuleMatcher {
  const RuleSchema& r;
  const GraphPtr& G;
  std::vector<MatchCandidate> out;
  std::map<NodeId, NodeId> node_map;
  std::set<NodeId> used;
  Interp interp;

  bool unify_label(const Label& pat, const Label& val, Interp& bound,
                   std::vector<std::pair<Expr, long long>>& deferred) {
    if (pat.size() != val.size()) return false;
    for (size_t i = 0; i < pat.size(); i++) {
      long long v = val[i]->value;
      const Expr& item = pat[i];
      if (item->kind == ExprKind::Var) {
        auto it = bound.find(item->name);
        if (it != bound.end()) {
          if (it->second != v) return false;
        } else {
          bound[item->name] = v;
        }
      } else if (item->kind == ExprKind::Const) {
        if (item->value != v) return false;
      } else {
        deferred.emplace_back(item, v);
      }
    }
    return true;
  }

  void finish(std::vector<std::pair<Expr, long long>>& deferred) {
    for (auto& v : r.lhs_vars)
      if (!interp.count(v)) return;  // cannot happen with bare-occurrence rule
    for (auto& [e, want] : deferred) {
      auto got = eval_expr(e, interp);
      if (!got || *got != want) return;
    }
    auto conc = instantiate(r, interp);
    if (!conc) return;
    // enumerate injective edge maps for the fixed node assignment
    auto ms = find_injective_morphisms(conc->lhs, G, node_map, {});
    for (auto& m : ms) {
      if (!dangling_ok(*conc, m)) continue;
      out.push_back(MatchCandidate{interp, m, *conc});
    }
  }

  void assign(size_t ni, std::vector<std::pair<Expr, long long>> deferred) {
    if (ni == r.lhs->nodes.size()) {
      finish(deferred);
      return;
    }
    const Node& pn = r.lhs->nodes[ni];
    for (auto& gn : G->nodes) {
      if (used.count(gn.id)) continue;
      Interp saved = interp;
      auto def_saved = deferred;
      if (!unify_label(*pn.label, *gn.label, interp, deferred)) {
        interp = std::move(saved);
        deferred = std::move(def_saved);
        continue;
      }
      node_map[pn.id] = gn.id;
      used.insert(gn.id);
      assign(ni + 1, deferred);
      used.erase(gn.id);
      node_map.erase(pn.id);
      interp = std::move(saved);
      deferred = std::move(def_saved);
    }
  }
};

}  // namespace

std::vector<MatchCandidate> find_matches(const RuleSchema& r, const GraphPtr& G) {
  if (G->mode != GraphMode::Concrete)
    throw std::runtime_error("find_matches: host graph must be concrete");
  RuleMatcher m{r, G, {}, {}, {}, {}};
  if (r.lhs->nodes.empty()) {
    // empty lhs: single empty match, interpretation empty
    std::vector<std::pair<Expr, long long>> d;
    m.finish(d);
  } else {
    m.assign(0, {});
  }
  return std::move(m.out);
}

DerivationResult apply_rule(const RuleSchema& r, const GraphPtr& G,
                            const MatchCandidate& m) {
  const ConcreteRule& cr = m.concrete;
  if (m.match.cod.get() != G.get())
    throw std::runtime_error("apply_rule: match not over this graph");
  std::string why;
  if (!check_morphism(m.match, &why) || !m.match.injective() ||
      !dangling_ok(cr, m.match))
    throw std::runtime_error("apply_rule: invalid match (" + why + ")");

  std::set<NodeId> k_lhs;  // preserved node ids on the lhs
  for (auto& [k, l] : cr.to_lhs.node_map) k_lhs.insert(l);
  std::set<NodeId> del_nodes;
  for (auto& n : cr.lhs->nodes)
    if (!k_lhs.count(n.id)) del_nodes.insert(m.match.node_map.at(n.id));
  std::set<EdgeId> del_edges;  // all lhs edges: the interface has none
  for (auto& [e, f] : m.match.edge_map) del_edges.insert(f);

  // relabelling for preserved nodes: l_H(g(v)) becomes l_R(v)
  std::map<NodeId, Label> relabel;
  std::map<NodeId, NodeId> rhs_preserved_to_g;  // rhs node id -> G node id
  for (auto& [l, rr] : r.preserved) {
    NodeId gv = m.match.node_map.at(l);
    relabel[gv] = *cr.rhs->node(rr)->label;
    rhs_preserved_to_g[rr] = gv;
  }

  GraphBuilder b(GraphMode::Concrete);
  for (auto& n : G->nodes) {
    if (del_nodes.count(n.id)) continue;
    auto it = relabel.find(n.id);
    b.node(n.id, it != relabel.end() ? std::optional<Label>(it->second) : n.label);
  }
  NodeId next_node = G->max_node_id() + 1;
  Morphism comatch;
  for (auto& n : cr.rhs->nodes) {
    auto it = rhs_preserved_to_g.find(n.id);
    if (it != rhs_preserved_to_g.end()) {
      comatch.node_map[n.id] = it->second;
    } else {
      NodeId id = next_node++;
      b.node(id, n.label);
      comatch.node_map[n.id] = id;
    }
  }
  EdgeId next_edge = G->max_edge_id() + 1;
  for (auto& e : G->edges) {
    if (del_edges.count(e.id)) continue;
    if (del_nodes.count(e.src) || del_nodes.count(e.tgt))
      throw std::runtime_error("apply_rule: dangling edge survived");
    b.edge(e.id, e.src, e.tgt);
  }
  for (auto& e : cr.rhs->edges) {
    EdgeId id = next_edge++;
    b.edge(id, comatch.node_map.at(e.src), comatch.node_map.at(e.tgt));
    comatch.edge_map[e.id] = id;
  }

  DerivationResult res;
  res.result = b.build();
  comatch.dom = cr.rhs;
  comatch.cod = res.result;
  res.comatch = std::move(comatch);
  return res;
}

}  // namespace gpil
