#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"

namespace gpil {

using NodeId = int;
using EdgeId = int;

enum class GraphMode { Concrete, Symbolic };

struct Node {
  NodeId id;
  std::optional<Label> label;  // only interface graphs leave nodes unlabelled
};

struct Edge {
  EdgeId id;
  NodeId src;
  NodeId tgt;
  // all edges carry the single blank label
};

// Finite directed graph. Nodes and edges are kept sorted by id; ids are
// small integers local to each graph. Immutable once built.
struct Graph;
using GraphPtr = std::shared_ptr<const Graph>;

struct Graph {
  GraphMode mode = GraphMode::Concrete;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  const Node* node(NodeId id) const;
  const Edge* edge(EdgeId id) const;
  bool has_node(NodeId id) const { return node(id) != nullptr; }
  bool has_edge(EdgeId id) const { return edge(id) != nullptr; }
  NodeId max_node_id() const;
  EdgeId max_edge_id() const;
  bool totally_labelled() const;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(GraphMode mode = GraphMode::Concrete) { g_.mode = mode; }
  GraphBuilder& node(NodeId id, std::optional<Label> label);
  GraphBuilder& edge(EdgeId id, NodeId src, NodeId tgt);
  EdgeId add_edge(NodeId src, NodeId tgt);  // auto id
  GraphPtr build();  // validates, sorts, freezes

 private:
  Graph g_;
  EdgeId next_edge_ = 0;
};

GraphPtr empty_graph(GraphMode mode = GraphMode::Concrete);

// Structure- and label-preserving map between graphs. Labels must agree on
// the labelled nodes of the domain.
struct Morphism {
  GraphPtr dom;
  GraphPtr cod;
  std::map<NodeId, NodeId> node_map;
  std::map<EdgeId, EdgeId> edge_map;

  NodeId at_node(NodeId v) const { return node_map.at(v); }
  EdgeId at_edge(EdgeId e) const { return edge_map.at(e); }
  bool injective_on_nodes() const;
  bool injective() const;
};

Morphism identity_morphism(const GraphPtr& g);
Morphism compose(const Morphism& first, const Morphism& then);
// Inclusion dom -> cod by identical ids; every dom item must exist in cod.
Morphism inclusion_morphism(const GraphPtr& dom, const GraphPtr& cod);

// Checks source/target preservation and label preservation on labelled
// nodes. Label comparison is syntactic after normalize.
bool check_morphism(const Morphism& m, std::string* why = nullptr);

// Label equality used for matching: concrete labels by value, symbolic
// labels syntactically after normalize. Unlabelled domain nodes match any.
bool labels_compatible(const std::optional<Label>& dom_label,
                       const std::optional<Label>& cod_label);

// All injective morphisms P -> G in a deterministic order. `fixed` may
// pre-assign node images (used for extending partial matches).
std::vector<Morphism> find_injective_morphisms(
    const GraphPtr& P, const GraphPtr& G,
    const std::map<NodeId, NodeId>& fixed_nodes = {},
    const std::map<EdgeId, EdgeId>& fixed_edges = {});

// All morphisms, injective or not (used by the pushout universal-property
// tests and the mediating-morphism search).
std::vector<Morphism> find_all_morphisms(const GraphPtr& P, const GraphPtr& G);

// True iff a bijective morphism exists that also reflects unlabelledness.
bool isomorphic(const GraphPtr& G, const GraphPtr& H);

// Evaluate a symbolic graph's labels under I; nullopt if any label is
// undefined. vars(G) must be contained in dom(I) for a defined result.
std::optional<GraphPtr> instantiate_graph(const GraphPtr& G, const Interp& I);

struct Pushout {
  GraphPtr object;      // C'
  Morphism left;        // a': P' -> C'
  Morphism right;       // q:  C  -> C'
};

// Gluing of P' and C along P (p: P->P', a: P->C, both injective). Labels of
// merged nodes take the defined side; a clash between two defined, distinct
// labels throws std::runtime_error.
Pushout pushout(const Morphism& p, const Morphism& a);

struct PushoutComplement {
  GraphPtr object;   // Z
  Morphism to_z;     // K -> Z
  Morphism embed;    // Z -> X
};

// Natural pushout complement of <k: K->L, a: L->X>, if the dangling
// condition holds in X; nullopt otherwise. K-image nodes keep K's labels
// (including unlabelledness); the rest keep X's labels.
std::optional<PushoutComplement> pushout_complement(const Morphism& k,
                                                    const Morphism& a);

struct OverlapQuotient {
  GraphPtr object;  // E
  Morphism from_p;  // b: P' -> E, injective
  Morphism from_c;  // s: C  -> E, injective
};

// All surjective quotients e: C'' -> E of a pushout (a': P'->C'', q: C->C'')
// that merge only equal-labelled nodes (and parallel edges across the two
// images) such that b = e.a' and s = e.q stay injective. Includes the
// identity quotient; deterministic order.
std::vector<OverlapQuotient> enumerate_overlap_quotients(const Morphism& a_prime,
                                                         const Morphism& q);

// Cheap isomorphism invariant: node/edge counts, sorted label multiset,
// degree sequences. Equal keys are necessary for isomorphism.
std::string invariant_key(const GraphPtr& g);

// Exact canonical serialisation, equal iff isomorphic. Exhaustive over node
// orderings (desk-scale graphs), pruned by invariant grouping.
std::string canonical_string(const GraphPtr& g);

// Set of graphs up to isomorphism with deterministic insertion order.
class IsoStore {
 public:
  // returns true if inserted (not seen before up to iso)
  bool insert(const GraphPtr& g);
  bool contains(const GraphPtr& g) const;
  const std::vector<GraphPtr>& items() const { return order_; }
  size_t size() const { return order_.size(); }

 private:
  std::map<std::string, std::vector<GraphPtr>> buckets_;
  std::vector<GraphPtr> order_;
};

std::string to_string(const GraphPtr& g);  // host-graph text format

}  // namespace gpil
