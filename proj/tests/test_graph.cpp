#include <doctest.h>

#include <functional>

#include "graph.hpp"
#include "parse.hpp"
#include "test_util.hpp"

using namespace gpil;
using namespace gpil::test;

namespace {

// every set partition of {0..n-1}, as block-index assignments
void set_partitions(int n, const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> assign(n, 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      emit(assign);
      return;
    }
    for (int b = 0; b <= blocks; b++) {
      assign[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) emit(assign);
  else rec(0, 0);
}

// Brute-force quotient count over all node/edge partitions, independent of
// enumerate_overlap_quotients' pair-merging construction.
long long brute_force_quotients(const Morphism& ap, const Morphism& q) {
  const GraphPtr& cpp = ap.cod;
  std::vector<NodeId> nodes;
  for (auto& n : cpp->nodes) nodes.push_back(n.id);
  std::vector<EdgeId> edges;
  for (auto& e : cpp->edges) edges.push_back(e.id);

  std::set<NodeId> pn, cn;
  std::set<EdgeId> pe, ce;
  for (auto& [v, w] : ap.node_map) pn.insert(w);
  for (auto& [v, w] : q.node_map) cn.insert(w);
  for (auto& [e, f] : ap.edge_map) pe.insert(f);
  for (auto& [e, f] : q.edge_map) ce.insert(f);

  long long count = 0;
  set_partitions(static_cast<int>(nodes.size()), [&](const std::vector<int>& nassign) {
    // node blocks: labels equal, at most one p-image and one c-image
    int nblocks = 0;
    for (int b : nassign) nblocks = std::max(nblocks, b + 1);
    for (int b = 0; b < nblocks; b++) {
      int pc = 0, cc = 0;
      const Node* first = nullptr;
      for (size_t i = 0; i < nodes.size(); i++) {
        if (nassign[i] != b) continue;
        const Node* nd = cpp->node(nodes[i]);
        if (pn.count(nodes[i])) pc++;
        if (cn.count(nodes[i])) cc++;
        if (!first) first = nd;
        else {
          bool same = first->label.has_value() == nd->label.has_value() &&
                      (!first->label || label_equal(*first->label, *nd->label));
          if (!same) return;
        }
      }
      if (pc > 1 || cc > 1) return;
    }
    auto nblock = [&](NodeId id) {
      for (size_t i = 0; i < nodes.size(); i++)
        if (nodes[i] == id) return nassign[i];
      return -1;
    };
    set_partitions(static_cast<int>(edges.size()), [&](const std::vector<int>& eassign) {
      int eblocks = 0;
      for (int b : eassign) eblocks = std::max(eblocks, b + 1);
      for (int b = 0; b < eblocks; b++) {
        int pc = 0, cc = 0;
        const Edge* first = nullptr;
        for (size_t i = 0; i < edges.size(); i++) {
          if (eassign[i] != b) continue;
          const Edge* ed = cpp->edge(edges[i]);
          if (pe.count(edges[i])) pc++;
          if (ce.count(edges[i])) cc++;
          if (!first) first = ed;
          else if (nblock(first->src) != nblock(ed->src) ||
                   nblock(first->tgt) != nblock(ed->tgt))
            return;
        }
        if (pc > 1 || cc > 1) return;
      }
      count++;
    });
  });
  return count;
}

GraphPtr sym(const std::string& text) { return parse_graph(text); }

}  // namespace

TEST_CASE("find_injective_morphisms examples") {
  // one node labelled 5 into two nodes labelled 5, 5
  auto P = cgraph({lbl({5})}, {});
  auto G = cgraph({lbl({5}), lbl({5})}, {});
  CHECK(find_injective_morphisms(P, G).size() == 2);

  // the empty pattern has exactly one morphism anywhere
  auto E = empty_graph();
  CHECK(find_injective_morphisms(E, G).size() == 1);
  CHECK(find_injective_morphisms(E, E).size() == 1);

  // edge a->b (both labelled 1) into a directed 3-cycle, all labelled 1
  auto P2 = cgraph({lbl({1}), lbl({1})}, {{0, 1}});
  auto C3 = cgraph({lbl({1}), lbl({1}), lbl({1})}, {{0, 1}, {1, 2}, {2, 0}});
  long long brute = brute_force_morphisms(P2, C3, true);
  CHECK(find_injective_morphisms(P2, C3).size() == static_cast<size_t>(brute));
  CHECK(brute == 3);
}

TEST_CASE("morphism search agrees with brute force on random graphs") {
  ExprGen gen(41);
  for (int i = 0; i < 40; i++) {
    std::vector<Label> pool{lbl({0}), lbl({1})};
    auto rnd = [&](int maxn) {
      GraphBuilder b(GraphMode::Concrete);
      int n = static_cast<int>(gen.pick(maxn + 1));
      for (int k = 0; k < n; k++) b.node(k, pool[gen.pick(2)]);
      for (int s = 0; s < n; s++)
        for (int t = 0; t < n; t++)
          if (gen.pick(3) == 0) b.add_edge(s, t);
      return b.build();
    };
    auto P = rnd(2), G = rnd(3);
    CHECK(find_injective_morphisms(P, G).size() ==
          static_cast<size_t>(brute_force_morphisms(P, G, true)));
    CHECK(find_all_morphisms(P, G).size() ==
          static_cast<size_t>(brute_force_morphisms(P, G, false)));
  }
}

TEST_CASE("morphism results satisfy the morphism conditions") {
  auto P = cgraph({lbl({1}), lbl({1})}, {{0, 1}});
  auto G = cgraph({lbl({1}), lbl({1}), lbl({1})}, {{0, 1}, {1, 2}, {2, 0}});
  for (auto& m : find_injective_morphisms(P, G)) {
    std::string why;
    CHECK(check_morphism(m, &why));
    CHECK(m.injective());
  }
}

TEST_CASE("isomorphic") {
  auto G = cgraph({lbl({1}), lbl({2})}, {{0, 1}});
  CHECK(isomorphic(G, G));
  auto loop = cgraph({lbl({1})}, {{0, 0}});
  auto noloop = cgraph({lbl({1})}, {});
  CHECK_FALSE(isomorphic(loop, noloop));
  // same graphs with reversed id numbering
  GraphBuilder b(GraphMode::Concrete);
  b.node(7, lbl({2}));
  b.node(9, lbl({1}));
  b.edge(0, 9, 7);
  CHECK(isomorphic(G, b.build()));
  // unlabelledness must be reflected
  GraphBuilder u1(GraphMode::Symbolic), u2(GraphMode::Symbolic);
  u1.node(0, std::nullopt);
  u2.node(0, Label{mk_const(1)});
  CHECK_FALSE(isomorphic(u1.build(), u2.build()));
}

TEST_CASE("match count invariant under isomorphic replacement") {
  auto P = cgraph({lbl({1})}, {});
  auto G = cgraph({lbl({1}), lbl({1}), lbl({2})}, {{0, 1}});
  GraphBuilder b(GraphMode::Concrete);  // same graph, scrambled ids
  b.node(5, lbl({2}));
  b.node(3, lbl({1}));
  b.node(8, lbl({1}));
  b.edge(0, 8, 3);
  auto G2 = b.build();
  REQUIRE(isomorphic(G, G2));
  CHECK(find_injective_morphisms(P, G).size() == find_injective_morphisms(P, G2).size());
}

TEST_CASE("pushout basics") {
  // P empty: disjoint union
  auto P = empty_graph(GraphMode::Symbolic);
  auto Pp = sym("graph { node a x; }");
  auto C = sym("graph { node b y; node c z; }");
  Morphism p{P, Pp, {}, {}};
  Morphism a{P, C, {}, {}};
  Pushout po = pushout(p, a);
  CHECK(po.object->nodes.size() == 3);
  CHECK(check_morphism(po.left));
  CHECK(check_morphism(po.right));

  // p = a = identity: pushout is P itself
  Morphism idp = identity_morphism(Pp);
  Pushout po2 = pushout(idp, idp);
  CHECK(isomorphic(po2.object, Pp));

  // P = one node; P' adds a loop; C adds a second node
  auto P1 = sym("graph { node v x; }");
  auto Ploop = sym("graph { node v x; edge v -> v; }");
  auto Cnode = sym("graph { node v x; node w y; }");
  Morphism pl = inclusion_morphism(P1, Ploop);
  Morphism pc = inclusion_morphism(P1, Cnode);
  Pushout po3 = pushout(pl, pc);
  CHECK(po3.object->nodes.size() == 2);
  CHECK(po3.object->edges.size() == 1);
  const Edge& e = po3.object->edges[0];
  CHECK(e.src == e.tgt);
}

TEST_CASE("pushout universal property on random small cospans") {
  ExprGen gen(17);
  std::vector<Label> pool{lbl({0}), lbl({1})};
  for (int iter = 0; iter < 25; iter++) {
    // random span P -> P', P -> C: P = subset of nodes of both
    int pn = static_cast<int>(gen.pick(2));
    GraphBuilder pb(GraphMode::Concrete);
    for (int i = 0; i < pn; i++) pb.node(i, pool[gen.pick(2)]);
    auto P = pb.build();
    auto extend = [&](int extra) {
      GraphBuilder b(GraphMode::Concrete);
      for (auto& n : P->nodes) b.node(n.id, n.label);
      for (int i = 0; i < extra; i++) b.node(P->max_node_id() + 1 + i, pool[gen.pick(2)]);
      // a few random edges
      auto g = b.build();
      GraphBuilder b2(GraphMode::Concrete);
      for (auto& n : g->nodes) b2.node(n.id, n.label);
      for (auto& s : g->nodes)
        for (auto& t : g->nodes)
          if (gen.pick(4) == 0) b2.add_edge(s.id, t.id);
      return b2.build();
    };
    auto Pp = extend(static_cast<int>(gen.pick(2)));
    auto C = extend(static_cast<int>(gen.pick(2)));
    Morphism p = inclusion_morphism(P, Pp);
    Morphism a = inclusion_morphism(P, C);
    Pushout po = pushout(p, a);
    CHECK(check_morphism(po.left));
    CHECK(check_morphism(po.right));

    // competing cospans into D: every commuting pair factors uniquely
    std::vector<GraphPtr> targets{po.object, extend(1)};
    for (auto& D : targets) {
      auto fs = find_all_morphisms(Pp, D);
      auto gs = find_all_morphisms(C, D);
      auto us = find_all_morphisms(po.object, D);
      for (auto& f : fs)
        for (auto& g : gs) {
          bool commutes = true;
          for (auto& n : P->nodes)
            if (f.node_map.at(p.node_map.at(n.id)) != g.node_map.at(a.node_map.at(n.id)))
              commutes = false;
          for (auto& e : P->edges)
            if (f.edge_map.at(p.edge_map.at(e.id)) != g.edge_map.at(a.edge_map.at(e.id)))
              commutes = false;
          if (!commutes) continue;
          int mediators = 0;
          for (auto& u : us) {
            bool ok = true;
            for (auto& [v, w] : po.left.node_map)
              if (u.node_map.at(w) != f.node_map.at(v)) ok = false;
            for (auto& [v, w] : po.left.edge_map)
              if (ok && u.edge_map.at(w) != f.edge_map.at(v)) ok = false;
            for (auto& [v, w] : po.right.node_map)
              if (ok && u.node_map.at(w) != g.node_map.at(v)) ok = false;
            for (auto& [v, w] : po.right.edge_map)
              if (ok && u.edge_map.at(w) != g.edge_map.at(v)) ok = false;
            if (ok) mediators++;
          }
          CHECK(mediators == 1);
        }
    }
  }
}

TEST_CASE("pushout complement") {
  // K = L: nothing deleted
  auto L = sym("graph { node v x; }");
  Morphism id = identity_morphism(L);
  auto X = sym("graph { node v x; node w y; edge v -> w; }");
  Morphism ax = inclusion_morphism(L, X);
  auto poc = pushout_complement(id, ax);
  REQUIRE(poc.has_value());
  CHECK(isomorphic(poc->object, X));

  // deleting a node with an extra incident edge: dangling, no complement
  GraphBuilder kb(GraphMode::Symbolic);
  auto K = kb.build();  // empty interface
  Morphism kl{K, L, {}, {}};
  CHECK_FALSE(pushout_complement(kl, ax).has_value());

  // deleting an isolated node succeeds
  auto X2 = sym("graph { node v x; node w y; }");
  Morphism ax2 = inclusion_morphism(L, X2);
  auto poc2 = pushout_complement(kl, ax2);
  REQUIRE(poc2.has_value());
  CHECK(poc2->object->nodes.size() == 1);
}

TEST_CASE("pushout complement then pushout reconstructs X") {
  // K -> L -> X with K one preserved node (unlabelled)
  GraphBuilder kb(GraphMode::Symbolic);
  kb.node(0, std::nullopt);
  auto K = kb.build();
  auto L = sym("graph { node n0 x; node n1 y; edge n0 -> n1; }");
  Morphism kl{K, L, {{0, 0}}, {}};
  auto X = sym("graph { node n0 x; node n1 y; node n2 z; edge n0 -> n1; edge n2 -> n0; }");
  Morphism ax = inclusion_morphism(L, X);
  auto poc = pushout_complement(kl, ax);
  REQUIRE(poc.has_value());
  Pushout po = pushout(poc->to_z, kl);  // glue L back along K
  CHECK(isomorphic(po.object, X));
}

TEST_CASE("overlap quotients") {
  // no equal-label candidates: identity only
  auto P = empty_graph(GraphMode::Symbolic);
  auto Pp = sym("graph { node a x; }");
  auto C1 = sym("graph { node b y; }");
  Morphism p{P, Pp, {}, {}};
  Morphism a1{P, C1, {}, {}};
  Pushout po1 = pushout(p, a1);
  CHECK(enumerate_overlap_quotients(po1.left, po1.right).size() == 1);

  // two nodes with the same variable label: merged and unmerged
  auto C2 = sym("graph { node b x; }");
  Morphism a2{P, C2, {}, {}};
  Pushout po2 = pushout(p, a2);
  auto qs = enumerate_overlap_quotients(po2.left, po2.right);
  CHECK(qs.size() == 2);
  for (auto& q : qs) {
    CHECK(check_morphism(q.from_p));
    CHECK(check_morphism(q.from_c));
    CHECK(q.from_p.injective());
    CHECK(q.from_c.injective());
  }

  // random small instances agree with the partition brute force
  ExprGen gen(23);
  const char* labels[] = {"x", "y"};
  for (int iter = 0; iter < 20; iter++) {
    auto mk = [&](int n) {
      GraphBuilder b(GraphMode::Symbolic);
      for (int i = 0; i < n; i++) b.node(i, Label{mk_var(labels[gen.pick(2)])});
      auto g0 = b.build();
      GraphBuilder b2(GraphMode::Symbolic);
      for (auto& nd : g0->nodes) b2.node(nd.id, nd.label);
      for (auto& s : g0->nodes)
        for (auto& t : g0->nodes)
          if (gen.pick(4) == 0) b2.add_edge(s.id, t.id);
      return b2.build();
    };
    auto Gp = mk(1 + static_cast<int>(gen.pick(2)));
    auto Gc = mk(1 + static_cast<int>(gen.pick(2)));
    Morphism pp{P, Gp, {}, {}};
    Morphism aa{P, Gc, {}, {}};
    Pushout po = pushout(pp, aa);
    auto quotients = enumerate_overlap_quotients(po.left, po.right);
    long long brute = brute_force_quotients(po.left, po.right);
    CAPTURE(to_string(Gp));
    CAPTURE(to_string(Gc));
    CHECK(static_cast<long long>(quotients.size()) == brute);
  }
}

TEST_CASE("IsoStore deduplicates up to isomorphism") {
  IsoStore store;
  auto G = cgraph({lbl({1}), lbl({2})}, {{0, 1}});
  GraphBuilder b(GraphMode::Concrete);
  b.node(3, lbl({2}));
  b.node(4, lbl({1}));
  b.edge(0, 4, 3);
  CHECK(store.insert(G));
  CHECK_FALSE(store.insert(b.build()));
  CHECK(store.size() == 1);
  CHECK(store.contains(G));
}

TEST_CASE("graph text format round-trips") {
  auto G = parse_graph("graph { node a 1:2; node b 3; edge a -- b; edge a -> a; }");
  CHECK(G->nodes.size() == 2);
  CHECK(G->edges.size() == 3);  // the sugar makes two directed edges
  auto back = parse_graph(to_string(G));
  CHECK(isomorphic(G, back));
}
