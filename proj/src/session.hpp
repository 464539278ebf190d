#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "proof.hpp"

namespace gpil {

// Exit statuses shared by the C API and the CLI.
enum Status {
  StatusOk = 0,         // affirmative / valid
  StatusRefuted = 1,    // refuted / counterexample / rejected
  StatusError = 2,      // usage or load error
  StatusBounded = 3,    // bounded / inconclusive
};

struct Options {
  int max_nodes = 2;               // universe bound
  std::vector<Label> labels;       // universe label pool
  int max_parallel = 1;
  long long max_steps = 10000;     // derivation budget / trace limit
  int growth_cap = 32;             // node-count cap during evaluation
  long long int_window = 2;
  uint64_t seed = 0;
  int jobs = 1;
  bool machine = false;            // machine-readable (JSON) output
  std::string base_dir = ".";     // resolution root for use "..." headers
};

struct OpResult {
  int status = StatusOk;
  std::string output;    // primary output (byte-stable across runs)
  std::string warnings;  // secondary diagnostics
};

// A loaded workspace: rule environment plus configuration. All operations
// catch their own errors and fold them into the result status.
class Workspace {
 public:
  Options opts;

  void load_rules_file(const std::string& path);
  void load_rules_text(const std::string& text, const std::string& name = "<rules>");

  OpResult op_run(const std::string& program_text, const std::string& graph_text);
  OpResult op_outcomes(const std::string& program_text, const std::string& graph_text);
  OpResult op_satisfies(const std::string& cond_text, const std::string& graph_text);
  OpResult op_app(const std::vector<std::string>& rule_names);
  OpResult op_wpost(const std::vector<std::string>& rule_names,
                    const std::string& cond_text);
  OpResult op_check(const std::string& proof_text);
  OpResult op_validate(const std::string& triple_text);
  OpResult op_difftest(const std::string& kind, const std::vector<std::string>& rule_names,
                       const std::string& cond_text, const std::string& mutation);

  const RuleEnv& rules() const { return env_; }
  // empty selection = all loaded rules, sorted by name
  std::vector<RulePtr> select_rules(const std::vector<std::string>& names) const;

 private:
  RuleEnv env_;
  Universe universe() const;
  OracleConfig oracle_config() const;
  ProgramPtr load_program(const std::string& text);
  void load_uses(const std::vector<std::string>& uses);
};

std::vector<Label> parse_label_list(const std::string& csv);

}  // namespace gpil
