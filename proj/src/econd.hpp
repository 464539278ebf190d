#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"

namespace gpil {

// Nested conditions with expressions. A condition lives over a context
// graph; the morphism of an ExistsMorph node is the id-inclusion of the
// context into `cod` (node identifiers indicate which nodes are the same
// along the chain). A closed condition over the empty context is an
// E-constraint.
enum class CondKind { True, Constr, ExistsInt, ExistsMorph, Not, And, Or };

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
  CondKind kind;
  Constraint gamma;  // Constr
  std::string var;   // ExistsInt
  GraphPtr cod;      // ExistsMorph codomain (symbolic); context embeds by id
  CondPtr body;      // ExistsInt / ExistsMorph / Not
  CondPtr l, r;      // And / Or
};

CondPtr cond_true();
CondPtr cond_false();  // Not(True)
CondPtr cond_constr(Constraint g);
CondPtr cond_exists_int(std::string var, CondPtr body);
CondPtr cond_exists_morph(GraphPtr cod, CondPtr body);
CondPtr cond_not(CondPtr c);
CondPtr cond_and(CondPtr l, CondPtr r);
CondPtr cond_or(CondPtr l, CondPtr r);
CondPtr cond_and_all(std::vector<CondPtr> cs);  // True when empty
CondPtr cond_or_all(std::vector<CondPtr> cs);   // false when empty
bool is_cond_false(const CondPtr& c);

// Well-formedness over a context: every ExistsMorph codomain must contain
// the context's items by id with matching labels/endpoints.
bool check_condition(const CondPtr& c, const GraphPtr& context, std::string* why = nullptr);

// Free variables: graph-label and constraint variables not bound by any
// integer quantifier. Context labels count as free at the root.
std::set<std::string> free_vars(const CondPtr& c);
// All variables, bound or free.
std::set<std::string> all_vars(const CondPtr& c);
void collect_consts(const CondPtr& c, std::set<long long>& out);

// Capture-avoiding substitution into labels and constraints. The caller
// renames binders first; substitution under a clashing binder throws.
CondPtr subst_condition(const CondPtr& c, const Subst& s);

// Renames every bound integer variable to something outside `avoid`
// (and outside the condition's own free variables).
CondPtr rename_bound_vars(const CondPtr& c, const std::set<std::string>& avoid);

struct SatConfig {
  long long int_window = 2;     // candidate values also drawn from [-W, W]
  bool warn_unanchored = true;
};

struct SatResult {
  bool value = false;
  std::vector<std::string> warnings;  // quantified vars with no bare label occurrence
};

// G |= c for an E-constraint c (empty context, no free variables).
SatResult satisfies(const GraphPtr& G, const CondPtr& c, const SatConfig& cfg);

// p |=^I c for a condition over an instantiated context: p maps the
// instantiated context into G. Used directly by the Shift/Right tests.
bool satisfies_at(const Morphism& p, const Interp& I, const CondPtr& c,
                  const SatConfig& cfg);

// Quantified integer variables that never occur bare in a nested morphism
// codomain label (their candidate finitisation is window-complete only).
std::vector<std::string> unanchored_vars(const CondPtr& c);

// Equivalence-preserving cleanup: unit laws, flattening, double negation,
// duplicate juncts, ground constraint folding, unused binders.
CondPtr simplify(const CondPtr& c);

// Canonical serialisation modulo bound-variable renaming, binder-run
// reordering, junct order, and graph node identities. Equal strings mean
// alpha/iso-equivalent conditions.
std::string canonical_cond(const CondPtr& c, const GraphPtr& context);

std::string to_string(const CondPtr& c);  // condition text format

}  // namespace gpil
