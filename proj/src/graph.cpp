#include "graph.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace gpil {

const Node* Graph::node(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes.end() || it->id != id) return nullptr;
  return &*it;
}

const Edge* Graph::edge(EdgeId id) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), id,
                             [](const Edge& e, EdgeId v) { return e.id < v; });
  if (it == edges.end() || it->id != id) return nullptr;
  return &*it;
}

NodeId Graph::max_node_id() const {
  NodeId m = -1;
  for (auto& n : nodes) m = std::max(m, n.id);
  return m;
}

EdgeId Graph::max_edge_id() const {
  EdgeId m = -1;
  for (auto& e : edges) m = std::max(m, e.id);
  return m;
}

bool Graph::totally_labelled() const {
  for (auto& n : nodes)
    if (!n.label) return false;
  return true;
}

GraphBuilder& GraphBuilder::node(NodeId id, std::optional<Label> label) {
  if (label && label->empty()) throw std::runtime_error("empty label");
  g_.nodes.push_back(Node{id, std::move(label)});
  return *this;
}

GraphBuilder& GraphBuilder::edge(EdgeId id, NodeId src, NodeId tgt) {
  g_.edges.push_back(Edge{id, src, tgt});
  next_edge_ = std::max(next_edge_, id + 1);
  return *this;
}

EdgeId GraphBuilder::add_edge(NodeId src, NodeId tgt) {
  EdgeId id = next_edge_++;
  g_.edges.push_back(Edge{id, src, tgt});
  return id;
}

GraphPtr GraphBuilder::build() {
  auto g = std::make_shared<Graph>(std::move(g_));
  auto mg = const_cast<Graph*>(g.get());
  std::sort(mg->nodes.begin(), mg->nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(mg->edges.begin(), mg->edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (size_t i = 1; i < mg->nodes.size(); i++)
    if (mg->nodes[i].id == mg->nodes[i - 1].id)
      throw std::runtime_error("duplicate node id " + std::to_string(mg->nodes[i].id));
  for (size_t i = 1; i < mg->edges.size(); i++)
    if (mg->edges[i].id == mg->edges[i - 1].id)
      throw std::runtime_error("duplicate edge id " + std::to_string(mg->edges[i].id));
  for (auto& e : mg->edges)
    if (!g->has_node(e.src) || !g->has_node(e.tgt))
      throw std::runtime_error("edge endpoint missing");
  if (g->mode == GraphMode::Concrete) {
    for (auto& n : mg->nodes)
      if (n.label && !is_constant(*n.label))
        throw std::runtime_error("concrete graph with non-constant label");
  }
  return g;
}

GraphPtr empty_graph(GraphMode mode) {
  GraphBuilder b(mode);
  return b.build();
}

bool Morphism::injective_on_nodes() const {
  std::map<NodeId, int> seen;
  for (auto& [v, w] : node_map)
    if (++seen[w] > 1) return false;
  return true;
}

bool Morphism::injective() const {
  if (!injective_on_nodes()) return false;
  std::map<EdgeId, int> seen;
  for (auto& [e, f] : edge_map)
    if (++seen[f] > 1) return false;
  return true;
}

Morphism identity_morphism(const GraphPtr& g) {
  Morphism m;
  m.dom = m.cod = g;
  for (auto& n : g->nodes) m.node_map[n.id] = n.id;
  for (auto& e : g->edges) m.edge_map[e.id] = e.id;
  return m;
}

Morphism compose(const Morphism& first, const Morphism& then) {
  Morphism m;
  m.dom = first.dom;
  m.cod = then.cod;
  for (auto& [v, w] : first.node_map) m.node_map[v] = then.node_map.at(w);
  for (auto& [e, f] : first.edge_map) m.edge_map[e] = then.edge_map.at(f);
  return m;
}

Morphism inclusion_morphism(const GraphPtr& dom, const GraphPtr& cod) {
  Morphism m;
  m.dom = dom;
  m.cod = cod;
  for (auto& n : dom->nodes) {
    if (!cod->has_node(n.id))
      throw std::runtime_error("inclusion: node " + std::to_string(n.id) +
                               " missing in codomain");
    m.node_map[n.id] = n.id;
  }
  for (auto& e : dom->edges) {
    if (!cod->has_edge(e.id))
      throw std::runtime_error("inclusion: edge " + std::to_string(e.id) +
                               " missing in codomain");
    m.edge_map[e.id] = e.id;
  }
  return m;
}

static bool opt_label_equal(const std::optional<Label>& a,
                            const std::optional<Label>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return label_equal(*a, *b);
}

bool labels_compatible(const std::optional<Label>& dom_label,
                       const std::optional<Label>& cod_label) {
  if (!dom_label) return true;  // unlabelled matches anything
  if (!cod_label) return false;
  return label_equal(*dom_label, *cod_label);
}

bool check_morphism(const Morphism& m, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  for (auto& n : m.dom->nodes) {
    auto it = m.node_map.find(n.id);
    if (it == m.node_map.end()) return fail("node map not total");
    const Node* img = m.cod->node(it->second);
    if (!img) return fail("node image missing");
    if (!labels_compatible(n.label, img->label)) return fail("label not preserved");
  }
  for (auto& e : m.dom->edges) {
    auto it = m.edge_map.find(e.id);
    if (it == m.edge_map.end()) return fail("edge map not total");
    const Edge* img = m.cod->edge(it->second);
    if (!img) return fail("edge image missing");
    if (img->src != m.node_map.at(e.src) || img->tgt != m.node_map.at(e.tgt))
      return fail("sources/targets not preserved");
  }
  return true;
}

// --- morphism search -----------------------------------------------------

namespace {

struct MatchSearch {
  const Graph& P;
  const Graph& G;
  bool injective;
  bool strict_labels;  // require equal labelledness (isomorphism search)
  std::map<NodeId, NodeId> node_map;
  std::map<EdgeId, EdgeId> edge_map;
  std::map<NodeId, int> used_nodes;
  std::map<EdgeId, int> used_edges;
  const std::function<bool(const std::map<NodeId, NodeId>&,
                           const std::map<EdgeId, EdgeId>&)>& emit;

  bool node_ok(const Node& pn, const Node& gn) const {
    if (strict_labels) return opt_label_equal(pn.label, gn.label);
    return labels_compatible(pn.label, gn.label);
  }

  // true = stop the whole search
  bool assign_edges(size_t ei) {
    if (ei == P.edges.size()) return emit(node_map, edge_map);
    const Edge& pe = P.edges[ei];
    NodeId s = node_map.at(pe.src), t = node_map.at(pe.tgt);
    auto fixed = edge_map.find(pe.id);
    if (fixed != edge_map.end()) {
      const Edge* ge = G.edge(fixed->second);
      if (!ge || ge->src != s || ge->tgt != t) return false;
      return assign_edges(ei + 1);
    }
    for (auto& ge : G.edges) {
      if (ge.src != s || ge.tgt != t) continue;
      if (injective && used_edges[ge.id]) continue;
      edge_map[pe.id] = ge.id;
      used_edges[ge.id]++;
      bool stop = assign_edges(ei + 1);
      used_edges[ge.id]--;
      edge_map.erase(pe.id);
      if (stop) return true;
    }
    return false;
  }

  bool assign_nodes(size_t ni) {
    if (ni == P.nodes.size()) return assign_edges(0);
    const Node& pn = P.nodes[ni];
    auto fixed = node_map.find(pn.id);
    if (fixed != node_map.end()) {
      const Node* gn = G.node(fixed->second);
      if (!gn || !node_ok(pn, *gn)) return false;
      return assign_nodes(ni + 1);
    }
    for (auto& gn : G.nodes) {
      if (injective && used_nodes[gn.id]) continue;
      if (!node_ok(pn, gn)) continue;
      node_map[pn.id] = gn.id;
      used_nodes[gn.id]++;
      bool stop = assign_nodes(ni + 1);
      used_nodes[gn.id]--;
      node_map.erase(pn.id);
      if (stop) return true;
    }
    return false;
  }
};

void search_morphisms(const GraphPtr& P, const GraphPtr& G, bool injective,
                      bool strict_labels,
                      const std::map<NodeId, NodeId>& fixed_nodes,
                      const std::map<EdgeId, EdgeId>& fixed_edges,
                      const std::function<bool(const std::map<NodeId, NodeId>&,
                                               const std::map<EdgeId, EdgeId>&)>& emit) {
  MatchSearch s{*P, *G, injective, strict_labels, fixed_nodes, fixed_edges,
                {},  {},        emit};
  // seed used-counters for pre-assigned images
  for (auto& [v, w] : fixed_nodes) s.used_nodes[w]++;
  for (auto& [e, f] : fixed_edges) s.used_edges[f]++;
  if (injective) {
    for (auto& [w, c] : s.used_nodes)
      if (c > 1) return;
    for (auto& [f, c] : s.used_edges)
      if (c > 1) return;
  }
  s.assign_nodes(0);
}

}  // namespace

std::vector<Morphism> find_injective_morphisms(
    const GraphPtr& P, const GraphPtr& G,
    const std::map<NodeId, NodeId>& fixed_nodes,
    const std::map<EdgeId, EdgeId>& fixed_edges) {
  std::vector<Morphism> out;
  search_morphisms(P, G, true, false, fixed_nodes, fixed_edges,
                   [&](const std::map<NodeId, NodeId>& nm,
                       const std::map<EdgeId, EdgeId>& em) {
                     Morphism m;
                     m.dom = P;
                     m.cod = G;
                     m.node_map = nm;
                     m.edge_map = em;
                     out.push_back(std::move(m));
                     return false;
                   });
  return out;
}

std::vector<Morphism> find_all_morphisms(const GraphPtr& P, const GraphPtr& G) {
  std::vector<Morphism> out;
  search_morphisms(P, G, false, false, {}, {},
                   [&](const std::map<NodeId, NodeId>& nm,
                       const std::map<EdgeId, EdgeId>& em) {
                     Morphism m;
                     m.dom = P;
                     m.cod = G;
                     m.node_map = nm;
                     m.edge_map = em;
                     out.push_back(std::move(m));
                     return false;
                   });
  return out;
}

bool isomorphic(const GraphPtr& G, const GraphPtr& H) {
  if (G.get() == H.get()) return true;
  if (G->nodes.size() != H->nodes.size() || G->edges.size() != H->edges.size())
    return false;
  bool found = false;
  search_morphisms(G, H, true, true, {}, {},
                   [&](const std::map<NodeId, NodeId>&,
                       const std::map<EdgeId, EdgeId>&) {
                     found = true;
                     return true;
                   });
  return found;
}

std::optional<GraphPtr> instantiate_graph(const GraphPtr& G, const Interp& I) {
  GraphBuilder b(GraphMode::Concrete);
  for (auto& n : G->nodes) {
    if (!n.label) {
      b.node(n.id, std::nullopt);
      continue;
    }
    auto v = eval_label(*n.label, I);
    if (!v) return std::nullopt;
    b.node(n.id, *v);
  }
  for (auto& e : G->edges) b.edge(e.id, e.src, e.tgt);
  return b.build();
}

// --- pushout --------------------------------------------------------------

Pushout pushout(const Morphism& p, const Morphism& a) {
  if (!p.injective() || !a.injective())
    throw std::runtime_error("pushout requires injective morphisms");
  if (p.dom.get() != a.dom.get())
    throw std::runtime_error("pushout requires a common domain");
  const GraphPtr& P = p.dom;
  const GraphPtr& Pp = p.cod;  // P'
  const GraphPtr& C = a.cod;

  // Classes: all of C, plus P' items outside the p-image.
  std::map<NodeId, NodeId> p_to_c_node;  // P' node -> C node, via P
  std::map<EdgeId, EdgeId> p_to_c_edge;
  for (auto& n : P->nodes) p_to_c_node[p.node_map.at(n.id)] = a.node_map.at(n.id);
  for (auto& e : P->edges) p_to_c_edge[p.edge_map.at(e.id)] = a.edge_map.at(e.id);

  GraphBuilder b(Pp->mode);
  Morphism aq;  // a': P' -> C'
  Morphism q;   // q: C -> C'
  NodeId next_node = 0;
  std::map<NodeId, NodeId> c_node_out;

  for (auto& n : C->nodes) {
    std::optional<Label> lbl = n.label;
    // a shared node may take its label from the P' side
    for (auto& [pn, cn] : p_to_c_node) {
      if (cn != n.id) continue;
      const Node* pnode = Pp->node(pn);
      if (pnode->label) {
        if (lbl && !label_equal(*lbl, *pnode->label))
          throw std::runtime_error("pushout label clash");
        if (!lbl) lbl = pnode->label;
      }
    }
    NodeId id = next_node++;
    b.node(id, lbl);
    c_node_out[n.id] = id;
  }
  q.node_map = c_node_out;
  std::map<NodeId, NodeId> pp_node_out;
  for (auto& [pn, cn] : p_to_c_node) pp_node_out[pn] = c_node_out[cn];
  for (auto& n : Pp->nodes) {
    if (pp_node_out.count(n.id)) continue;
    NodeId id = next_node++;
    b.node(id, n.label);
    pp_node_out[n.id] = id;
  }

  EdgeId next_edge = 0;
  std::map<EdgeId, EdgeId> c_edge_out, pp_edge_out;
  for (auto& e : C->edges) {
    EdgeId id = next_edge++;
    b.edge(id, c_node_out[e.src], c_node_out[e.tgt]);
    c_edge_out[e.id] = id;
  }
  for (auto& [pe, ce] : p_to_c_edge) pp_edge_out[pe] = c_edge_out[ce];
  for (auto& e : Pp->edges) {
    if (pp_edge_out.count(e.id)) continue;
    EdgeId id = next_edge++;
    b.edge(id, pp_node_out[e.src], pp_node_out[e.tgt]);
    pp_edge_out[e.id] = id;
  }

  GraphPtr obj = b.build();
  aq.dom = Pp;
  aq.cod = obj;
  aq.node_map = std::move(pp_node_out);
  aq.edge_map = std::move(pp_edge_out);
  q.dom = C;
  q.cod = obj;
  q.edge_map = std::move(c_edge_out);
  return Pushout{obj, std::move(aq), std::move(q)};
}

std::optional<PushoutComplement> pushout_complement(const Morphism& k,
                                                    const Morphism& a) {
  if (!k.injective() || !a.injective())
    throw std::runtime_error("pushout complement requires injective morphisms");
  if (k.cod.get() != a.dom.get())
    throw std::runtime_error("pushout complement: morphisms do not compose");
  const GraphPtr& K = k.dom;
  const GraphPtr& L = k.cod;
  const GraphPtr& X = a.cod;

  std::map<NodeId, NodeId> k_img_node;  // L node in k-image -> K node
  std::map<EdgeId, EdgeId> k_img_edge;
  for (auto& n : K->nodes) k_img_node[k.node_map.at(n.id)] = n.id;
  for (auto& e : K->edges) k_img_edge[k.edge_map.at(e.id)] = e.id;

  std::set<NodeId> del_nodes;  // in X
  std::set<EdgeId> del_edges;
  std::set<EdgeId> l_edges_in_x;
  for (auto& n : L->nodes)
    if (!k_img_node.count(n.id)) del_nodes.insert(a.node_map.at(n.id));
  for (auto& e : L->edges) {
    l_edges_in_x.insert(a.edge_map.at(e.id));
    if (!k_img_edge.count(e.id)) del_edges.insert(a.edge_map.at(e.id));
  }

  // dangling condition in X
  for (auto& e : X->edges) {
    if (l_edges_in_x.count(e.id)) continue;
    if (del_nodes.count(e.src) || del_nodes.count(e.tgt)) return std::nullopt;
  }

  // Z = X minus deleted items; K-image nodes keep K's labels.
  std::map<NodeId, std::optional<Label>> z_labels;
  for (auto& n : K->nodes)
    z_labels[a.node_map.at(k.node_map.at(n.id))] = n.label;

  GraphBuilder b(X->mode);
  for (auto& n : X->nodes) {
    if (del_nodes.count(n.id)) continue;
    auto it = z_labels.find(n.id);
    b.node(n.id, it != z_labels.end() ? it->second : n.label);
  }
  for (auto& e : X->edges) {
    if (del_edges.count(e.id)) continue;
    if (del_nodes.count(e.src) || del_nodes.count(e.tgt)) return std::nullopt;
    b.edge(e.id, e.src, e.tgt);
  }
  GraphPtr Z = b.build();

  PushoutComplement out;
  out.object = Z;
  out.to_z.dom = K;
  out.to_z.cod = Z;
  for (auto& n : K->nodes)
    out.to_z.node_map[n.id] = a.node_map.at(k.node_map.at(n.id));
  for (auto& e : K->edges)
    out.to_z.edge_map[e.id] = a.edge_map.at(k.edge_map.at(e.id));
  out.embed = inclusion_morphism(Z, X);
  return out;
}

// --- overlap quotients -----------------------------------------------------

namespace {

struct QuotientBuild {
  const Morphism& ap;  // a': P' -> C''
  const Morphism& q;   // q: C -> C''
  GraphPtr cpp;        // C''
  std::set<NodeId> shared_nodes, p_nodes, c_nodes;  // partition of C'' nodes
  std::set<EdgeId> shared_edges, p_edges, c_edges;
  std::vector<OverlapQuotient> out;

  void emit(const std::map<NodeId, NodeId>& node_merge,   // onlyP -> onlyC
            const std::map<EdgeId, EdgeId>& edge_merge) {  // onlyP -> onlyC
    // class representative: merged onlyP items point at their onlyC partner
    auto node_rep = [&](NodeId v) {
      auto it = node_merge.find(v);
      return it == node_merge.end() ? v : it->second;
    };
    auto edge_rep = [&](EdgeId e) {
      auto it = edge_merge.find(e);
      return it == edge_merge.end() ? e : it->second;
    };
    GraphBuilder b(cpp->mode);
    std::map<NodeId, NodeId> node_out;
    NodeId next_node = 0;
    for (auto& n : cpp->nodes) {
      if (node_rep(n.id) != n.id) continue;
      NodeId id = next_node++;
      node_out[n.id] = id;
      b.node(id, n.label);
    }
    std::map<EdgeId, EdgeId> edge_out;
    EdgeId next_edge = 0;
    for (auto& e : cpp->edges) {
      if (edge_rep(e.id) != e.id) continue;
      EdgeId id = next_edge++;
      edge_out[e.id] = id;
      b.edge(id, node_out[node_rep(e.src)], node_out[node_rep(e.tgt)]);
    }
    GraphPtr E = b.build();
    OverlapQuotient oq;
    oq.object = E;
    oq.from_p.dom = ap.dom;
    oq.from_p.cod = E;
    for (auto& [v, w] : ap.node_map) oq.from_p.node_map[v] = node_out[node_rep(w)];
    for (auto& [e, f] : ap.edge_map) oq.from_p.edge_map[e] = edge_out[edge_rep(f)];
    oq.from_c.dom = q.dom;
    oq.from_c.cod = E;
    for (auto& [v, w] : q.node_map) oq.from_c.node_map[v] = node_out[node_rep(w)];
    for (auto& [e, f] : q.edge_map) oq.from_c.edge_map[e] = edge_out[edge_rep(f)];
    out.push_back(std::move(oq));
  }

  void edge_choices(std::vector<EdgeId>::const_iterator it,
                    std::vector<EdgeId>::const_iterator end,
                    const std::map<NodeId, NodeId>& node_merge,
                    std::map<EdgeId, EdgeId>& edge_merge,
                    std::set<EdgeId>& used_c_edges) {
    if (it == end) {
      emit(node_merge, edge_merge);
      return;
    }
    EdgeId pe = *it;
    // unmerged
    edge_choices(it + 1, end, node_merge, edge_merge, used_c_edges);
    auto node_rep = [&](NodeId v) {
      auto m = node_merge.find(v);
      return m == node_merge.end() ? v : m->second;
    };
    const Edge* e1 = cpp->edge(pe);
    for (EdgeId ce : c_edges) {
      if (used_c_edges.count(ce)) continue;
      const Edge* e2 = cpp->edge(ce);
      if (node_rep(e1->src) != node_rep(e2->src)) continue;
      if (node_rep(e1->tgt) != node_rep(e2->tgt)) continue;
      edge_merge[pe] = ce;
      used_c_edges.insert(ce);
      edge_choices(it + 1, end, node_merge, edge_merge, used_c_edges);
      used_c_edges.erase(ce);
      edge_merge.erase(pe);
    }
  }

  void node_choices(std::vector<NodeId>::const_iterator it,
                    std::vector<NodeId>::const_iterator end,
                    std::map<NodeId, NodeId>& node_merge,
                    std::set<NodeId>& used_c_nodes) {
    if (it == end) {
      std::vector<EdgeId> pedges(p_edges.begin(), p_edges.end());
      std::map<EdgeId, EdgeId> edge_merge;
      std::set<EdgeId> used_c_edges;
      edge_choices(pedges.begin(), pedges.end(), node_merge, edge_merge,
                   used_c_edges);
      return;
    }
    NodeId pv = *it;
    // unmerged
    node_choices(it + 1, end, node_merge, used_c_nodes);
    const Node* n1 = cpp->node(pv);
    for (NodeId cv : c_nodes) {
      if (used_c_nodes.count(cv)) continue;
      const Node* n2 = cpp->node(cv);
      if (!opt_label_equal(n1->label, n2->label)) continue;
      node_merge[pv] = cv;
      used_c_nodes.insert(cv);
      node_choices(it + 1, end, node_merge, used_c_nodes);
      used_c_nodes.erase(cv);
      node_merge.erase(pv);
    }
  }
};

}  // namespace

std::vector<OverlapQuotient> enumerate_overlap_quotients(const Morphism& a_prime,
                                                         const Morphism& q) {
  if (a_prime.cod.get() != q.cod.get())
    throw std::runtime_error("overlap quotients: codomains differ");
  QuotientBuild qb{a_prime, q, a_prime.cod, {}, {}, {}, {}, {}, {}, {}};
  std::set<NodeId> in_p, in_c;
  std::set<EdgeId> ep, ec;
  for (auto& [v, w] : a_prime.node_map) in_p.insert(w);
  for (auto& [v, w] : q.node_map) in_c.insert(w);
  for (auto& [e, f] : a_prime.edge_map) ep.insert(f);
  for (auto& [e, f] : q.edge_map) ec.insert(f);
  for (auto& n : qb.cpp->nodes) {
    bool p = in_p.count(n.id), c = in_c.count(n.id);
    if (p && c) qb.shared_nodes.insert(n.id);
    else if (p) qb.p_nodes.insert(n.id);
    else if (c) qb.c_nodes.insert(n.id);
    else qb.shared_nodes.insert(n.id);  // unreachable for pushout objects
  }
  for (auto& e : qb.cpp->edges) {
    bool p = ep.count(e.id), c = ec.count(e.id);
    if (p && c) qb.shared_edges.insert(e.id);
    else if (p) qb.p_edges.insert(e.id);
    else if (c) qb.c_edges.insert(e.id);
    else qb.shared_edges.insert(e.id);
  }
  std::vector<NodeId> pnodes(qb.p_nodes.begin(), qb.p_nodes.end());
  std::map<NodeId, NodeId> node_merge;
  std::set<NodeId> used;
  qb.node_choices(pnodes.begin(), pnodes.end(), node_merge, used);
  return std::move(qb.out);
}

// --- canonical forms --------------------------------------------------------

static std::string label_key(const std::optional<Label>& l) {
  if (!l) return "_";
  return to_string(normalize(*l));
}

std::string invariant_key(const GraphPtr& g) {
  std::ostringstream os;
  os << (g->mode == GraphMode::Concrete ? "c" : "s");
  os << "|v" << g->nodes.size() << "|e" << g->edges.size() << "|";
  std::vector<std::string> props;
  for (auto& n : g->nodes) {
    int indeg = 0, outdeg = 0, loops = 0;
    for (auto& e : g->edges) {
      if (e.src == n.id && e.tgt == n.id) loops++;
      else if (e.src == n.id) outdeg++;
      else if (e.tgt == n.id) indeg++;
    }
    props.push_back(label_key(n.label) + "#" + std::to_string(indeg) + "," +
                    std::to_string(outdeg) + "," + std::to_string(loops));
  }
  std::sort(props.begin(), props.end());
  for (auto& p : props) os << p << ";";
  return os.str();
}

namespace {

// Node groups ordered by (invariant); permutations explored within groups.
struct CanonSearch {
  const Graph& g;
  std::vector<std::vector<NodeId>> groups;
  std::vector<NodeId> order;
  std::string best;
  bool have_best = false;

  void serialize_and_keep() {
    std::map<NodeId, int> pos;
    for (size_t i = 0; i < order.size(); i++) pos[order[i]] = static_cast<int>(i);
    std::ostringstream os;
    for (NodeId v : order) os << label_key(g.node(v)->label) << ";";
    std::vector<std::pair<int, int>> es;
    es.reserve(g.edges.size());
    for (auto& e : g.edges) es.emplace_back(pos[e.src], pos[e.tgt]);
    std::sort(es.begin(), es.end());
    os << "|";
    for (auto& [s, t] : es) os << s << ">" << t << ";";
    std::string s = os.str();
    if (!have_best || s < best) {
      best = std::move(s);
      have_best = true;
    }
  }

  void rec(size_t gi) {
    if (gi == groups.size()) {
      serialize_and_keep();
      return;
    }
    auto& grp = groups[gi];
    std::sort(grp.begin(), grp.end());
    do {
      size_t base = order.size();
      for (NodeId v : grp) order.push_back(v);
      rec(gi + 1);
      order.resize(base);
    } while (std::next_permutation(grp.begin(), grp.end()));
  }
};

}  // namespace

std::string canonical_string(const GraphPtr& g) {
  // group nodes by invariant; any isomorphism respects these groups
  std::map<std::string, std::vector<NodeId>> by_inv;
  for (auto& n : g->nodes) {
    int indeg = 0, outdeg = 0, loops = 0;
    for (auto& e : g->edges) {
      if (e.src == n.id && e.tgt == n.id) loops++;
      else if (e.src == n.id) outdeg++;
      else if (e.tgt == n.id) indeg++;
    }
    std::string k = label_key(n.label) + "#" + std::to_string(indeg) + "," +
                    std::to_string(outdeg) + "," + std::to_string(loops);
    by_inv[k].push_back(n.id);
  }
  CanonSearch cs{*g, {}, {}, {}, false};
  std::ostringstream head;
  head << (g->mode == GraphMode::Concrete ? "c" : "s") << "|";
  for (auto& [k, ids] : by_inv) {
    head << k << "*" << ids.size() << "|";
    cs.groups.push_back(ids);
  }
  cs.rec(0);
  return head.str() + cs.best;
}

bool IsoStore::insert(const GraphPtr& g) {
  std::string key = invariant_key(g);
  auto& bucket = buckets_[key];
  for (auto& h : bucket)
    if (isomorphic(g, h)) return false;
  bucket.push_back(g);
  order_.push_back(g);
  return true;
}

bool IsoStore::contains(const GraphPtr& g) const {
  auto it = buckets_.find(invariant_key(g));
  if (it == buckets_.end()) return false;
  for (auto& h : it->second)
    if (isomorphic(g, h)) return true;
  return false;
}

std::string to_string(const GraphPtr& g) {
  std::ostringstream os;
  os << "graph {";
  bool first = true;
  for (auto& n : g->nodes) {
    os << (first ? " " : " ");
    first = false;
    os << "node n" << n.id;
    if (n.label) os << " " << to_string(*n.label);
    os << ";";
  }
  // collapse opposite edge pairs into the undirected shorthand
  std::map<std::pair<NodeId, NodeId>, int> count;
  for (auto& e : g->edges) count[{e.src, e.tgt}]++;
  for (auto& [st, c] : count) {
    auto [s, t] = st;
    if (s == t) {
      for (int i = 0; i < c; i++) os << " edge n" << s << " -> n" << t << ";";
      continue;
    }
    if (s < t) {
      int rev = count.count({t, s}) ? count[{t, s}] : 0;
      int pairs = std::min(c, rev);
      for (int i = 0; i < pairs; i++) os << " edge n" << s << " -- n" << t << ";";
      for (int i = pairs; i < c; i++) os << " edge n" << s << " -> n" << t << ";";
    } else {
      int rev = count.count({t, s}) ? count[{t, s}] : 0;
      int pairs = std::min(c, rev);
      for (int i = pairs; i < c; i++) os << " edge n" << s << " -> n" << t << ";";
    }
  }
  os << " }";
  return os.str();
}

}  // namespace gpil
