#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "graph.hpp"

namespace gpil {

// A rule schema <L => R> over expression-labelled graphs. The interface
// consists of the preserved nodes only (all unlabelled); edges are never
// preserved.
struct RuleSchema {
  std::string name;
  GraphPtr lhs;  // symbolic, totally labelled
  GraphPtr rhs;  // symbolic, totally labelled
  // preserved-node bijection, lhs node id -> rhs node id
  std::map<NodeId, NodeId> preserved;
  std::vector<std::string> lhs_vars;  // sorted; dom(I) for instantiation
  std::vector<std::string> rhs_vars;  // sorted; subset of lhs_vars
};

using RulePtr = std::shared_ptr<const RuleSchema>;

// Builds the schema, validating: vars(rhs) subset of vars(lhs), the
// preserved map is a bijection between existing nodes, and (when
// `for_matching`) every lhs variable occurs at least once as a bare list
// item so unification against concrete labels determines interpretations.
RulePtr make_rule(std::string name, GraphPtr lhs, GraphPtr rhs,
                  std::map<NodeId, NodeId> preserved, bool for_matching = true);

// r with lhs and rhs swapped. The bare-occurrence restriction may fail for
// the result; inverted rules are only used for Dang and preimage bounds.
RulePtr invert(const RuleSchema& r);

bool rule_equal(const RulePtr& a, const RulePtr& b);  // structural

// Interface graph K: preserved nodes (lhs ids), unlabelled, no edges.
GraphPtr rule_interface(const RuleSchema& r);

// An instantiated rule <L^I <- K -> R^I> with its inclusions.
struct ConcreteRule {
  GraphPtr lhs;        // concrete
  GraphPtr interface;  // unlabelled nodes only
  GraphPtr rhs;        // concrete
  Morphism to_lhs;     // K -> L^I
  Morphism to_rhs;     // K -> R^I
};

// Evaluates every label under I; nullopt if any evaluates to undefined.
// dom(I) must equal vars(lhs).
std::optional<ConcreteRule> instantiate(const RuleSchema& r, const Interp& I);

struct MatchCandidate {
  Interp interp;          // dom = vars(lhs)
  Morphism match;         // lhs^I -> G, injective, dangling condition holds
  ConcreteRule concrete;  // the instantiated rule matched
};

// All (I, g) pairs obtained by unifying lhs labels against G position-wise;
// deterministic order. G must be concrete.
std::vector<MatchCandidate> find_matches(const RuleSchema& r, const GraphPtr& G);

// True iff no node of g(L - K) is incident to an edge of G - g(L).
bool dangling_ok(const ConcreteRule& rule, const Morphism& g);

struct DerivationResult {
  GraphPtr result;
  Morphism comatch;  // rhs^I -> H
};

// Direct derivation at a match candidate: delete g(L-K), add R-K with
// adjusted endpoints, relabel the preserved nodes from R.
DerivationResult apply_rule(const RuleSchema& r, const GraphPtr& G,
                            const MatchCandidate& m);

}  // namespace gpil
