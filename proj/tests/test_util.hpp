#pragma once

#include <random>
#include <vector>

#include "expr.hpp"
#include "graph.hpp"
#include "parse.hpp"
#include "rules.hpp"

namespace gpil::test {

inline Label lbl(std::initializer_list<long long> xs) {
  Label l;
  for (auto x : xs) l.push_back(mk_const(x));
  return l;
}

// concrete graph from node labels and directed edges (indices into labels)
inline GraphPtr cgraph(const std::vector<Label>& labels,
                       const std::vector<std::pair<int, int>>& edges) {
  GraphBuilder b(GraphMode::Concrete);
  for (size_t i = 0; i < labels.size(); i++) b.node(static_cast<int>(i), labels[i]);
  for (auto& [s, t] : edges) b.add_edge(s, t);
  return b.build();
}

// undirected sugar: adds both directions
inline GraphPtr ugraph(const std::vector<Label>& labels,
                       const std::vector<std::pair<int, int>>& edges) {
  GraphBuilder b(GraphMode::Concrete);
  for (size_t i = 0; i < labels.size(); i++) b.node(static_cast<int>(i), labels[i]);
  for (auto& [s, t] : edges) {
    b.add_edge(s, t);
    b.add_edge(t, s);
  }
  return b.build();
}

inline const char* colouring_rules_text() {
  return R"(
rule init(x) {
  lhs { node v x; }
  rhs { node v x:0; }
}
rule colour(x, i, y) {
  lhs { node a x:i; node b y; edge a -- b; }
  rhs { node a x:i; node b y:i+1; edge a -- b; }
}
)";
}

inline std::vector<RulePtr> colouring_rules() {
  return parse_rules(colouring_rules_text(), "<colouring>");
}

inline RulePtr rule_by_name(const std::vector<RulePtr>& rs, const std::string& n) {
  for (auto& r : rs)
    if (r->name == n) return r;
  throw std::runtime_error("no rule " + n);
}

// Brute-force morphism count: enumerate every node map and edge map and
// check the morphism conditions directly. Independent of the backtracking
// search in graph.cpp.
inline long long brute_force_morphisms(const GraphPtr& P, const GraphPtr& G,
                                       bool injective) {
  size_t pn = P->nodes.size(), pe = P->edges.size();
  size_t gn = G->nodes.size(), ge = G->edges.size();
  if (pn > 0 && gn == 0) return 0;
  long long count = 0;
  std::vector<size_t> nmap(pn, 0), emap(pe, 0);
  auto node_id = [&](size_t i) { return G->nodes[i].id; };
  auto check = [&]() {
    if (injective) {
      for (size_t i = 0; i < pn; i++)
        for (size_t j = i + 1; j < pn; j++)
          if (nmap[i] == nmap[j]) return false;
      for (size_t i = 0; i < pe; i++)
        for (size_t j = i + 1; j < pe; j++)
          if (emap[i] == emap[j]) return false;
    }
    std::map<NodeId, NodeId> nm;
    for (size_t i = 0; i < pn; i++) {
      const Node& p = P->nodes[i];
      const Node& g = G->nodes[nmap[i]];
      if (p.label) {
        if (!g.label || !label_equal(*p.label, *g.label)) return false;
      }
      nm[p.id] = g.id;
    }
    for (size_t i = 0; i < pe; i++) {
      const Edge& p = P->edges[i];
      const Edge& g = G->edges[emap[i]];
      if (g.src != nm[p.src] || g.tgt != nm[p.tgt]) return false;
    }
    return true;
  };
  // odometer over node maps x edge maps
  std::function<void(size_t)> edges_rec = [&](size_t i) {
    if (i == pe) {
      if (check()) count++;
      return;
    }
    for (size_t k = 0; k < ge; k++) {
      emap[i] = k;
      edges_rec(i + 1);
    }
  };
  std::function<void(size_t)> nodes_rec = [&](size_t i) {
    if (i == pn) {
      if (pe == 0) {
        if (check()) count++;
      } else if (ge > 0) {
        edges_rec(0);
      }
      return;
    }
    for (size_t k = 0; k < gn; k++) {
      nmap[i] = k;
      nodes_rec(i + 1);
    }
  };
  (void)node_id;
  nodes_rec(0);
  return count;
}

// random expression trees for the normalize properties
struct ExprGen {
  std::mt19937_64 rng;
  explicit ExprGen(uint64_t seed) : rng(seed) {}
  size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }

  Expr gen(int depth) {
    if (depth <= 0 || pick(3) == 0) {
      if (pick(2) == 0) return mk_const(static_cast<long long>(pick(7)) - 3);
      static const char* vars[] = {"x", "y", "z"};
      return mk_var(vars[pick(3)]);
    }
    switch (pick(5)) {
      case 0: return mk_neg(gen(depth - 1));
      case 1: return mk_bin(ExprKind::Add, gen(depth - 1), gen(depth - 1));
      case 2: return mk_bin(ExprKind::Sub, gen(depth - 1), gen(depth - 1));
      case 3: return mk_bin(ExprKind::Mul, gen(depth - 1), gen(depth - 1));
      default: return mk_bin(ExprKind::Div, gen(depth - 1), gen(depth - 1));
    }
  }

  Interp interp() {
    Interp I;
    I["x"] = static_cast<long long>(pick(9)) - 4;
    I["y"] = static_cast<long long>(pick(9)) - 4;
    I["z"] = static_cast<long long>(pick(9)) - 4;
    return I;
  }
};

}  // namespace gpil::test
