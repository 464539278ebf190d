#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "econd.hpp"
#include "graph.hpp"
#include "program.hpp"
#include "proof.hpp"
#include "rules.hpp"

namespace gpil {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, int col, const std::string& msg)
      : std::runtime_error((file.empty() ? "<input>" : file) + ":" +
                           std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        file(file), line(line), col(col) {}
  std::string file;
  int line, col;
};

Expr parse_expr(const std::string& text, const std::string& file = "");
Label parse_label(const std::string& text, const std::string& file = "");

// graph { node <id> <label>; ... edge <a> -> <b>; edge <a> -- <b>; }
// Node ids may be identifiers or integers; `--` adds a pair of opposite
// edges. Mode is Concrete when every label is constant.
GraphPtr parse_graph(const std::string& text, const std::string& file = "");

// rule <name>(<var>,*) { lhs { ... } rhs { ... } } — shared node ids define
// the preserved set. Multiple rules per file.
std::vector<RulePtr> parse_rules(const std::string& text, const std::string& file = "");

struct ProgramFile {
  std::vector<std::string> uses;  // rule files named by `use "...";` headers
  ProgramPtr program;
};

ProgramFile parse_program(const std::string& text, const std::string& file = "");

CondPtr parse_condition(const std::string& text, const std::string& file = "");

Triple parse_triple(const std::string& text, const std::string& file = "");

struct ProofFile {
  std::vector<std::string> uses;
  ProofNodePtr root;
};

ProofFile parse_proof(const std::string& text, const std::string& file = "");

std::string read_file(const std::string& path);  // throws on failure

}  // namespace gpil
