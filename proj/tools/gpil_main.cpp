// Command-line front end. Everything goes through the shared library's C
// interface; this translation unit knows nothing about the core types.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

#include <CLI11.hpp>

#include "gpil.h"

namespace {

bool file_exists(const std::string& path) {
  struct stat st;
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode);
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(GPIL_ERROR);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string dir_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

// FILE|EXPR arguments: a readable file wins, anything else is inline text.
std::string file_or_expr(const std::string& arg, std::string* base_dir = nullptr) {
  if (file_exists(arg)) {
    if (base_dir) *base_dir = dir_of(arg);
    return read_file_or_die(arg);
  }
  return arg;
}

struct WorkspaceHandle {
  gpil_workspace* ws = gpil_workspace_new();
  ~WorkspaceHandle() { gpil_workspace_free(ws); }
};

struct CommonOpts {
  std::vector<std::string> rules;  // files or loaded rule names
  std::string program, graph, cond, proof, triple;
  std::string labels, format = "text";
  int64_t max_nodes = 2, max_parallel = 1, max_steps = 10000, int_window = 2;
  int64_t seed = 0, jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--rules", o.rules,
                  "rule file to load, or the name of an already-loaded rule "
                  "to select (repeatable)");
  cmd->add_option("--max-nodes", o.max_nodes, "universe node bound");
  cmd->add_option("--labels", o.labels, "universe labels, e.g. 0,1,0:0");
  cmd->add_option("--max-parallel", o.max_parallel, "parallel edge bound");
  cmd->add_option("--max-steps", o.max_steps, "derivation budget");
  cmd->add_option("--int-window", o.int_window, "integer quantifier window");
  cmd->add_option("--seed", o.seed, "random seed (run)");
  cmd->add_option("--jobs", o.jobs, "worker threads for difftest/validate");
  cmd->add_option("--format", o.format, "text|machine")
      ->check(CLI::IsMember({"text", "machine"}));
}

int apply_options(gpil_workspace* ws, const CommonOpts& o) {
  gpil_set_option_int(ws, "max-nodes", o.max_nodes);
  gpil_set_option_int(ws, "max-parallel", o.max_parallel);
  gpil_set_option_int(ws, "max-steps", o.max_steps);
  gpil_set_option_int(ws, "int-window", o.int_window);
  gpil_set_option_int(ws, "seed", o.seed);
  gpil_set_option_int(ws, "jobs", o.jobs);
  gpil_set_option_int(ws, "machine", o.format == "machine" ? 1 : 0);
  if (!o.labels.empty() && gpil_set_option_str(ws, "labels", o.labels.c_str()) != GPIL_OK) {
    std::cerr << "error: " << gpil_last_error(ws) << "\n";
    return GPIL_ERROR;
  }
  return GPIL_OK;
}

// Loads --rules file arguments; returns the comma-separated name selection.
int load_rules(gpil_workspace* ws, const CommonOpts& o, std::string& selection) {
  std::ostringstream names;
  bool first = true;
  for (auto& arg : o.rules) {
    if (file_exists(arg)) {
      if (gpil_load_rules_file(ws, arg.c_str()) != GPIL_OK) {
        std::cerr << "error: " << gpil_last_error(ws) << "\n";
        return GPIL_ERROR;
      }
    } else {
      if (!first) names << ",";
      names << arg;
      first = false;
    }
  }
  selection = names.str();
  return GPIL_OK;
}

int emit(gpil_workspace* ws, gpil_status st, char* out, char* warnings) {
  if (st == GPIL_ERROR) {
    std::cerr << "error: " << gpil_last_error(ws) << "\n";
    return GPIL_ERROR;
  }
  if (warnings && *warnings) std::cerr << warnings;
  if (out) std::cout << out;
  gpil_string_free(out);
  gpil_string_free(warnings);
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"graph-program incorrectness tooling"};
  cli.require_subcommand(1);

  CommonOpts o;
  std::string difftest_kind, mutation;

  auto* c_run = cli.add_subcommand("run", "one seeded execution with trace");
  c_run->add_option("--program", o.program, "program file or expression")->required();
  c_run->add_option("--graph", o.graph, "host graph file or expression")->required();
  add_common(c_run, o);

  auto* c_out = cli.add_subcommand("outcomes", "full ok/er outcome sets");
  c_out->add_option("--program", o.program)->required();
  c_out->add_option("--graph", o.graph)->required();
  add_common(c_out, o);

  auto* c_sat = cli.add_subcommand("satisfies", "does the graph satisfy the condition");
  c_sat->add_option("--cond", o.cond, "condition file or expression")->required();
  c_sat->add_option("--graph", o.graph)->required();
  add_common(c_sat, o);

  auto* c_app = cli.add_subcommand("app", "applicability constraint of a rule set");
  add_common(c_app, o);

  auto* c_wp = cli.add_subcommand("wpost", "weakest postcondition of a rule set");
  c_wp->add_option("--cond", o.cond, "presumption file or expression")->required();
  add_common(c_wp, o);

  auto* c_chk = cli.add_subcommand("check", "check an incorrectness proof script");
  c_chk->add_option("--proof", o.proof, "proof script file")->required();
  add_common(c_chk, o);

  auto* c_val = cli.add_subcommand("validate", "bounded under-approximate validity");
  c_val->add_option("--triple", o.triple, "triple file or expression")->required();
  add_common(c_val, o);

  auto* c_dif = cli.add_subcommand("difftest", "differential transformation testing");
  c_dif->add_option("kind", difftest_kind, "app|wpost|shift|right")->required();
  c_dif->add_option("--cond", o.cond, "constraint for wpost/shift/right");
  c_dif->add_option("--mutate", mutation, "corrupt a transformation on purpose");
  add_common(c_dif, o);

  CLI11_PARSE(cli, argc, argv);

  WorkspaceHandle h;
  if (apply_options(h.ws, o) != GPIL_OK) return GPIL_ERROR;
  std::string selection;
  if (load_rules(h.ws, o, selection) == GPIL_ERROR) return GPIL_ERROR;

  char* out = nullptr;
  char* warn = nullptr;
  gpil_status st = GPIL_ERROR;

  if (cli.got_subcommand(c_run) || cli.got_subcommand(c_out)) {
    std::string base;
    std::string prog = file_or_expr(o.program, &base);
    if (!base.empty()) gpil_set_option_str(h.ws, "base-dir", base.c_str());
    std::string graph = file_or_expr(o.graph);
    st = cli.got_subcommand(c_run)
             ? gpil_run(h.ws, prog.c_str(), graph.c_str(), &out, &warn)
             : gpil_outcomes(h.ws, prog.c_str(), graph.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_sat)) {
    std::string cond = file_or_expr(o.cond);
    std::string graph = file_or_expr(o.graph);
    st = gpil_satisfies(h.ws, cond.c_str(), graph.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_app)) {
    st = gpil_app(h.ws, selection.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_wp)) {
    std::string cond = file_or_expr(o.cond);
    st = gpil_wpost(h.ws, selection.c_str(), cond.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_chk)) {
    std::string base;
    std::string proof = file_or_expr(o.proof, &base);
    if (!base.empty()) gpil_set_option_str(h.ws, "base-dir", base.c_str());
    st = gpil_check(h.ws, proof.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_val)) {
    std::string triple = file_or_expr(o.triple);
    st = gpil_validate(h.ws, triple.c_str(), &out, &warn);
  } else if (cli.got_subcommand(c_dif)) {
    std::string cond = o.cond.empty() ? "" : file_or_expr(o.cond);
    st = gpil_difftest(h.ws, difftest_kind.c_str(), selection.c_str(),
                       cond.empty() ? nullptr : cond.c_str(),
                       mutation.empty() ? nullptr : mutation.c_str(), &out, &warn);
  }

  return emit(h.ws, st, out, warn);
}
