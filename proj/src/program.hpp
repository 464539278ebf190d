#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rules.hpp"

namespace gpil {

enum class ProgKind { RuleSet, Bang, Seq, IfElse };

struct ProgramNode;
using ProgramPtr = std::shared_ptr<const ProgramNode>;

// Programs: nondeterministic rule-set application, as-long-as-possible
// iteration, sequence, and applicability-guarded branching.
struct ProgramNode {
  ProgKind kind;
  std::vector<std::string> rules;  // RuleSet / Bang / IfElse guard; sorted unique
  ProgramPtr a, b;                 // Seq: a;b   IfElse: then a, else b
};

ProgramPtr mk_ruleset(std::vector<std::string> names);
ProgramPtr mk_bang(std::vector<std::string> names);
ProgramPtr mk_seq(ProgramPtr a, ProgramPtr b);
ProgramPtr mk_ifelse(std::vector<std::string> guard, ProgramPtr a, ProgramPtr b);

bool program_equal(const ProgramPtr& a, const ProgramPtr& b);
std::string to_string(const ProgramPtr& p);

using RuleEnv = std::map<std::string, RulePtr>;

// Resolves every rule name mentioned; throws on unknown names.
void check_rule_names(const ProgramPtr& p, const RuleEnv& env);

struct Budget {
  long long max_steps = 100000;  // direct derivations explored
  int max_nodes = 64;            // growth cap per graph
};

struct OutcomeSet {
  std::vector<GraphPtr> ok;  // one representative per isomorphism class
  std::vector<GraphPtr> er;
  bool truncated = false;    // budget exhausted: ok/er are a lower bound
  long long steps = 0;       // derivations computed
  long long states = 0;      // iteration states visited
};

// The full ok/er outcome sets of P on G, computed compositionally; iteration
// runs as a worklist fixpoint over isomorphism classes, so cyclic behaviour
// (e.g. the identity rule iterated) terminates with exact empty results.
OutcomeSet outcomes(const ProgramPtr& p, const RuleEnv& env, const GraphPtr& G,
                    const Budget& budget);

enum class RunExit { Ok, Er, Diverged };

struct TraceStep {
  std::string rule;
  std::string match;  // rendered node map
};

struct RunResult {
  RunExit exit;
  GraphPtr graph;  // er: the last graph derived before the failure
  std::vector<TraceStep> trace;
};

// One execution with rule and match chosen by a seeded deterministic
// generator. Same seed, same trace.
RunResult run_random(const ProgramPtr& p, const RuleEnv& env, const GraphPtr& G,
                     uint64_t seed, long long max_steps);

}  // namespace gpil
