#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "econd.hpp"
#include "program.hpp"
#include "transform.hpp"

namespace gpil {

// Finite slice of the class of concrete graphs.
struct Universe {
  int max_nodes = 2;
  std::vector<Label> label_pool;  // constant labels
  int max_parallel = 1;           // per ordered node pair, loops included
};

// All graphs in the universe, one representative per isomorphism class,
// deterministic order (by node count, label multiset, edge configuration).
std::vector<GraphPtr> enumerate_graphs(const Universe& u);

struct OracleConfig {
  Budget budget;
  SatConfig sat;
  int jobs = 1;
};

struct ValidityReport {
  bool counterexample = false;
  GraphPtr witness;                 // H with no reachable pre-state
  long long searched_preimages = 0; // presumption graphs examined for the witness
  long long post_candidates = 0;    // result-satisfying graphs checked
  bool exact = true;                // false if any outcomes call truncated
};

// Under-approximate validity, bounded: for every H in u_post satisfying the
// result, search G in u_pre satisfying the presumption with H in
// outcomes(P, G)[exit], membership up to isomorphism.
ValidityReport validate_triple_bounded(const CondPtr& presumption,
                                       const ProgramPtr& program, bool exit_ok,
                                       const CondPtr& result, const RuleEnv& env,
                                       const Universe& u_post, const Universe& u_pre,
                                       const OracleConfig& cfg);

// u_post grown by the largest node-deletion among the program's rules (the
// nodes a preimage may additionally carry).
Universe default_preimage_universe(const Universe& u_post, const ProgramPtr& program,
                                   const RuleEnv& env);

struct DiffViolation {
  std::string detail;
  GraphPtr graph;
};

struct DiffReport {
  long long cases = 0;
  std::vector<DiffViolation> violations;
};

// App characterisation: G |= App(R) iff some rule of R has a match in G,
// checked pointwise over the universe.
DiffReport difftest_app(const std::vector<RulePtr>& rules, const Universe& u,
                        const OracleConfig& cfg, const TransformOptions& opts = {});

// WPost characterisation: H |= WPost(R, c) iff some G in u_pre satisfies c
// with G => _R H; the backward direction is exact only if u_pre covers all
// preimages of u_post.
DiffReport difftest_wpost(const std::vector<RulePtr>& rules, const CondPtr& c,
                          const Universe& u_post, const Universe& u_pre,
                          const OracleConfig& cfg, const TransformOptions& opts = {});

// Shift equivalence at every match of r in every universe graph:
// g |=^I Shift(r, c) iff G |= c (c freshened internally).
DiffReport difftest_shift(const RulePtr& r, const CondPtr& c, const Universe& u,
                          const OracleConfig& cfg, const TransformOptions& opts = {});

// Right equivalence across every direct derivation: g |=^I c iff
// h |=^I Right(r, c), with c a left condition built from the given constraint.
DiffReport difftest_right(const RulePtr& r, const CondPtr& c, const Universe& u,
                          const OracleConfig& cfg, const TransformOptions& opts = {});

// Randomised Lemma suites: `count` generated (rule, condition, graph,
// match/derivation) instances per call; seeded and reproducible.
DiffReport lemma_suite_shift(const std::vector<RulePtr>& pool, uint64_t seed, int count,
                             const OracleConfig& cfg);
DiffReport lemma_suite_right(const std::vector<RulePtr>& pool, uint64_t seed, int count,
                             const OracleConfig& cfg);

}  // namespace gpil
