#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "econd.hpp"
#include "program.hpp"

namespace gpil {

// An incorrectness triple [c] P [exit: d]; c and d are E-constraints.
struct Triple {
  CondPtr presumption;
  ProgramPtr program;
  bool exit_ok = true;  // ok / er
  CondPtr result;
};

std::string to_string(const Triple& t);

enum class ProofRuleKind {
  RuleSetSucc,
  RuleSetFail,
  SeqSucc,
  SeqFail,
  IfElse,
  Cons,
  IterZero,
  Iter,
  IterVar,
};

const char* proof_rule_name(ProofRuleKind k);

struct ProofNode;
using ProofNodePtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  ProofRuleKind rule;
  Triple conclusion;
  std::vector<ProofNodePtr> children;
  std::map<std::string, CondPtr> hints;  // optional, cross-checked
};

enum class DischargeKind { Syntactic, BoundedValid, Refuted };

struct DischargeResult {
  DischargeKind kind;
  std::string bound_desc;       // BoundedValid
  GraphPtr counterexample;      // Refuted
};

struct DischargeConfig {
  int max_nodes = 2;
  std::vector<Label> label_pool;  // empty: derived from the two conditions
  int max_parallel = 1;
  long long int_window = 2;
};

// Does antecedent imply consequent? First a sound syntactic fragment
// (equality modulo simplification/canonicalisation, conjunct dropping,
// disjunct introduction, false antecedent, true consequent, and structural
// congruence through quantifiers and connectives); otherwise a bounded
// counterexample search over enumerated graphs.
DischargeResult discharge_implication(const CondPtr& antecedent,
                                      const CondPtr& consequent,
                                      const DischargeConfig& cfg);

// The syntactic fragment alone.
bool syntactic_implies(const CondPtr& a, const CondPtr& b);

enum class VerdictKind { Valid, ValidUpToBound, Rejected };

struct Verdict {
  VerdictKind kind;
  std::string bound_desc;                  // ValidUpToBound
  std::vector<std::string> bounded_obligations;
  std::string rejected_at;                 // node path, e.g. "root/child1"
  std::string reason;
};

std::string to_string(const Verdict& v);

// Structural check of a proof script against the nine incorrectness rules.
// App and WPost instances are recomputed and compared canonically; Cons and
// IterVar side conditions become implication obligations.
Verdict check_proof(const ProofNodePtr& root, const RuleEnv& env,
                    const DischargeConfig& cfg);

}  // namespace gpil
