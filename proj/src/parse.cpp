#include "parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace gpil {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

enum class Tok { Ident, Int, Str, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  long long ival = 0;
  int line = 1, col = 1;
};

struct Lexer {
  std::string file;
  std::vector<Token> toks;
  size_t pos = 0;

  Lexer(const std::string& text, std::string fname) : file(std::move(fname)) {
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string t, long long v, int l, int c) {
      toks.push_back(Token{k, std::move(t), v, l, c});
    };
    while (i < text.size()) {
      char ch = text[i];
      if (ch == '\n') { line++; col = 1; i++; continue; }
      if (std::isspace(static_cast<unsigned char>(ch))) { i++; col++; continue; }
      if (ch == '#') {
        while (i < text.size() && text[i] != '\n') i++;
        continue;
      }
      int l = line, c = col;
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) j++;
        push(Tok::Ident, text.substr(i, j - i), 0, l, c);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) j++;
        std::string num = text.substr(i, j - i);
        push(Tok::Int, num, std::stoll(num), l, c);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      if (ch == '"') {
        size_t j = i + 1;
        while (j < text.size() && text[j] != '"' && text[j] != '\n') j++;
        if (j >= text.size() || text[j] != '"')
          throw ParseError(file, l, c, "unterminated string");
        push(Tok::Str, text.substr(i + 1, j - i - 1), 0, l, c);
        col += static_cast<int>(j - i + 1);
        i = j + 1;
        continue;
      }
      auto two = [&](const char* s) {
        return i + 1 < text.size() && text[i] == s[0] && text[i + 1] == s[1];
      };
      static const char* twos[] = {"->", "--", "=>", "!=", "<=", ">="};
      bool matched = false;
      for (auto* s : twos) {
        if (two(s)) {
          push(Tok::Punct, s, 0, l, c);
          i += 2;
          col += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      static const std::string singles = "{}()[];,.:!=<>+-*/";
      if (singles.find(ch) != std::string::npos) {
        push(Tok::Punct, std::string(1, ch), 0, l, c);
        i++;
        col++;
        continue;
      }
      throw ParseError(file, l, c, std::string("unexpected character '") + ch + "'");
    }
    push(Tok::End, "", 0, line, col);
  }

  const Token& peek(size_t k = 0) const {
    size_t j = std::min(pos + k, toks.size() - 1);
    return toks[j];
  }
  const Token& next() {
    const Token& t = toks[pos];
    if (pos + 1 < toks.size()) pos++;
    return t;
  }
  bool at_punct(const std::string& s) const {
    return peek().kind == Tok::Punct && peek().text == s;
  }
  bool at_kw(const std::string& s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  bool accept_punct(const std::string& s) {
    if (!at_punct(s)) return false;
    next();
    return true;
  }
  bool accept_kw(const std::string& s) {
    if (!at_kw(s)) return false;
    next();
    return true;
  }
  void expect_punct(const std::string& s) {
    if (!accept_punct(s)) err("expected '" + s + "'");
  }
  void expect_kw(const std::string& s) {
    if (!accept_kw(s)) err("expected '" + s + "'");
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) err("expected " + what);
    return next().text;
  }
  [[noreturn]] void err(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(file, t.line, t.col, msg + ", got " + got);
  }
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kws = {
      "graph", "node", "edge", "rule",  "lhs",  "rhs", "use",
      "if",    "then", "else", "true",  "false", "ex",  "all",
      "int",   "not",  "and",  "or",    "extends", "conclusion",
      "child", "hint", "ok",   "er"};
  return kws.count(s) > 0;
}

// --- expressions -----------------------------------------------------------

Expr parse_expr_add(Lexer& lx);

Expr parse_expr_atom(Lexer& lx) {
  if (lx.accept_punct("-")) return mk_neg(parse_expr_atom(lx));
  if (lx.accept_punct("(")) {
    Expr e = parse_expr_add(lx);
    lx.expect_punct(")");
    return e;
  }
  if (lx.peek().kind == Tok::Int) return mk_const(lx.next().ival);
  if (lx.peek().kind == Tok::Ident && !is_keyword(lx.peek().text))
    return mk_var(lx.next().text);
  lx.err("expected expression");
}

Expr parse_expr_mul(Lexer& lx) {
  Expr e = parse_expr_atom(lx);
  for (;;) {
    if (lx.accept_punct("*")) e = mk_bin(ExprKind::Mul, e, parse_expr_atom(lx));
    else if (lx.accept_punct("/")) e = mk_bin(ExprKind::Div, e, parse_expr_atom(lx));
    else return e;
  }
}

Expr parse_expr_add(Lexer& lx) {
  Expr e = parse_expr_mul(lx);
  for (;;) {
    if (lx.accept_punct("+")) e = mk_bin(ExprKind::Add, e, parse_expr_mul(lx));
    else if (lx.accept_punct("-")) e = mk_bin(ExprKind::Sub, e, parse_expr_mul(lx));
    else return e;
  }
}

Label parse_label_inner(Lexer& lx) {
  Label l;
  l.push_back(parse_expr_add(lx));
  while (lx.accept_punct(":")) l.push_back(parse_expr_add(lx));
  return l;
}

// --- graphs ------------------------------------------------------------------

// Node names (identifiers or integers) are interned to ids. A scope may be
// seeded with the enclosing graph's names so shared names mean shared nodes.
struct NameScope {
  std::map<std::string, NodeId> ids;
  NodeId next = 0;
  NodeId intern(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    NodeId id = next++;
    ids[name] = id;
    return id;
  }
};

struct RawGraph {
  std::vector<std::pair<NodeId, Label>> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;  // directed, sugar expanded
};

std::string parse_node_name(Lexer& lx) {
  if (lx.peek().kind == Tok::Int) return lx.next().text;
  if (lx.peek().kind == Tok::Ident && !is_keyword(lx.peek().text)) return lx.next().text;
  lx.err("expected node name");
}

// items between { and }
RawGraph parse_graph_items(Lexer& lx, NameScope& scope) {
  RawGraph rg;
  lx.expect_punct("{");
  std::set<NodeId> declared;
  while (!lx.accept_punct("}")) {
    if (lx.accept_kw("node")) {
      std::string name = parse_node_name(lx);
      NodeId id = scope.intern(name);
      if (declared.count(id)) lx.err("node '" + name + "' declared twice");
      declared.insert(id);
      Label lbl = parse_label_inner(lx);
      lx.expect_punct(";");
      rg.nodes.emplace_back(id, std::move(lbl));
    } else if (lx.accept_kw("edge")) {
      std::string a = parse_node_name(lx);
      bool undirected;
      if (lx.accept_punct("->")) undirected = false;
      else if (lx.accept_punct("--")) undirected = true;
      else lx.err("expected '->' or '--'");
      std::string b = parse_node_name(lx);
      lx.expect_punct(";");
      auto ia = scope.ids.find(a), ib = scope.ids.find(b);
      if (ia == scope.ids.end()) lx.err("edge endpoint '" + a + "' not declared");
      if (ib == scope.ids.end()) lx.err("edge endpoint '" + b + "' not declared");
      rg.edges.emplace_back(ia->second, ib->second);
      if (undirected) rg.edges.emplace_back(ib->second, ia->second);
    } else {
      lx.err("expected 'node' or 'edge'");
    }
  }
  return rg;
}

GraphPtr build_graph(const RawGraph& rg) {
  bool constant = true;
  for (auto& [id, lbl] : rg.nodes)
    if (!is_constant(lbl)) constant = false;
  GraphBuilder b(constant ? GraphMode::Concrete : GraphMode::Symbolic);
  for (auto& [id, lbl] : rg.nodes) b.node(id, lbl);
  for (auto& [s, t] : rg.edges) b.add_edge(s, t);
  return b.build();
}

// --- conditions ----------------------------------------------------------------

struct CondScope {
  // innermost enclosing graph: name, node-name scope, and the codomain shape
  std::string graph_name;
  NameScope names;
  RawGraph shape;
};

CondPtr parse_cond(Lexer& lx, CondScope& scope);

Constraint parse_comparison(Lexer& lx) {
  Expr l = parse_expr_add(lx);
  CmpOp op;
  if (lx.accept_punct("=")) op = CmpOp::Eq;
  else if (lx.accept_punct("!=")) op = CmpOp::Ne;
  else if (lx.accept_punct("<=")) op = CmpOp::Le;
  else if (lx.accept_punct(">=")) op = CmpOp::Ge;
  else if (lx.accept_punct("<")) op = CmpOp::Lt;
  else if (lx.accept_punct(">")) op = CmpOp::Gt;
  else lx.err("expected comparison operator");
  Expr r = parse_expr_add(lx);
  return mk_cmp(op, l, r);
}

// ex g2 { ... } [extends g1] — returns the new scope and codomain graph
GraphPtr parse_graphref(Lexer& lx, CondScope& scope, CondScope& inner) {
  std::string name = lx.expect_ident("graph name");
  if (is_keyword(name)) lx.err("graph name is a keyword");
  inner.graph_name = name;
  inner.names = scope.names;  // shared names = shared nodes
  RawGraph rg = parse_graph_items(lx, inner.names);
  if (lx.accept_kw("extends")) {
    std::string parent = lx.expect_ident("enclosing graph name");
    if (parent != scope.graph_name)
      lx.err("'extends " + parent + "' does not name the enclosing graph" +
             (scope.graph_name.empty() ? " (context is the empty graph)"
                                       : " '" + scope.graph_name + "'"));
  }
  // the context must re-occur: nodes by name with identical labels, edges by
  // endpoint multiplicity
  std::set<NodeId> declared;
  for (auto& [id, lbl] : rg.nodes) declared.insert(id);
  for (auto& [id, lbl] : scope.shape.nodes) {
    if (!declared.count(id))
      lx.err("graph '" + name + "' must re-list the nodes of its context");
    for (auto& [id2, lbl2] : rg.nodes)
      if (id2 == id && !label_equal(lbl, lbl2))
        lx.err("graph '" + name + "' changes the label of a context node");
  }
  std::map<std::pair<NodeId, NodeId>, int> have, need;
  for (auto& e : rg.edges) have[e]++;
  for (auto& e : scope.shape.edges) need[e]++;
  for (auto& [st, n] : need)
    if (have[st] < n)
      lx.err("graph '" + name + "' must re-list the edges of its context");
  // Edge ids: context edges keep their (low) ids in context order, so the
  // id-inclusion from the context graph carries over; remaining edges get
  // fresh ids. The recorded shape uses this final order.
  std::vector<std::pair<NodeId, NodeId>> ordered;
  ordered.reserve(rg.edges.size());
  std::map<std::pair<NodeId, NodeId>, int> pending;
  for (auto& e : scope.shape.edges) {
    ordered.push_back(e);
    pending[e]++;
  }
  for (auto& e : rg.edges) {
    auto it = pending.find(e);
    if (it != pending.end() && it->second > 0) {
      it->second--;
      continue;
    }
    ordered.push_back(e);
  }
  GraphBuilder b(GraphMode::Symbolic);
  for (auto& [id, lbl] : rg.nodes) b.node(id, lbl);
  for (size_t i = 0; i < ordered.size(); i++)
    b.edge(static_cast<EdgeId>(i), ordered[i].first, ordered[i].second);
  inner.shape.nodes = rg.nodes;
  inner.shape.edges = ordered;
  return b.build();
}

CondPtr parse_cond_atom(Lexer& lx, CondScope& scope) {
  if (lx.accept_kw("true")) return cond_true();
  if (lx.accept_kw("false")) return cond_false();
  if (lx.at_kw("not")) {
    lx.next();
    return cond_not(parse_cond_atom(lx, scope));
  }
  if (lx.at_kw("ex") || lx.at_kw("all")) {
    bool universal = lx.peek().text == "all";
    lx.next();
    if (lx.accept_kw("int")) {
      std::vector<std::string> vars;
      vars.push_back(lx.expect_ident("variable"));
      while (lx.accept_punct(",")) vars.push_back(lx.expect_ident("variable"));
      lx.expect_punct(".");
      CondPtr body = parse_cond(lx, scope);
      if (universal) body = cond_not(body);
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = cond_exists_int(*it, body);
      return universal ? cond_not(body) : body;
    }
    CondScope inner;
    GraphPtr cod = parse_graphref(lx, scope, inner);
    CondPtr body;
    if (lx.accept_punct(".")) body = parse_cond(lx, inner);
    else body = cond_true();
    if (universal) return cond_not(cond_exists_morph(cod, cond_not(body)));
    return cond_exists_morph(cod, body);
  }
  if (lx.at_punct("(")) {
    // '(' may open a parenthesised condition or a comparison's left operand
    size_t save = lx.pos;
    try {
      Constraint cmp = parse_comparison(lx);
      return cond_constr(cmp);
    } catch (const ParseError&) {
      lx.pos = save;
    }
    lx.expect_punct("(");
    CondPtr c = parse_cond(lx, scope);
    lx.expect_punct(")");
    return c;
  }
  return cond_constr(parse_comparison(lx));
}

CondPtr parse_cond_conj(Lexer& lx, CondScope& scope) {
  CondPtr c = parse_cond_atom(lx, scope);
  while (lx.accept_kw("and")) c = cond_and(c, parse_cond_atom(lx, scope));
  return c;
}

CondPtr parse_cond_disj(Lexer& lx, CondScope& scope) {
  CondPtr c = parse_cond_conj(lx, scope);
  while (lx.accept_kw("or")) c = cond_or(c, parse_cond_conj(lx, scope));
  return c;
}

CondPtr parse_cond(Lexer& lx, CondScope& scope) {
  CondPtr c = parse_cond_disj(lx, scope);
  if (lx.accept_punct("=>")) {
    CondPtr d = parse_cond(lx, scope);  // right associative
    return cond_or(cond_not(c), d);
  }
  return c;
}

// --- programs --------------------------------------------------------------------

std::vector<std::string> parse_ruleset(Lexer& lx) {
  std::vector<std::string> names;
  if (lx.accept_punct("{")) {
    names.push_back(lx.expect_ident("rule name"));
    while (lx.accept_punct(",")) names.push_back(lx.expect_ident("rule name"));
    lx.expect_punct("}");
  } else {
    std::string n = lx.expect_ident("rule name");
    if (is_keyword(n)) lx.err("'" + n + "' cannot name a rule");
    names.push_back(n);
  }
  return names;
}

ProgramPtr parse_program_expr(Lexer& lx);

ProgramPtr parse_program_atom(Lexer& lx) {
  if (lx.accept_kw("if")) {
    auto guard = parse_ruleset(lx);
    lx.expect_kw("then");
    ProgramPtr a = parse_program_atom(lx);
    lx.expect_kw("else");
    ProgramPtr b = parse_program_atom(lx);
    return mk_ifelse(std::move(guard), a, b);
  }
  if (lx.accept_punct("(")) {
    ProgramPtr p = parse_program_expr(lx);
    lx.expect_punct(")");
    return p;
  }
  auto names = parse_ruleset(lx);
  if (lx.accept_punct("!")) return mk_bang(std::move(names));
  return mk_ruleset(std::move(names));
}

ProgramPtr parse_program_expr(Lexer& lx) {
  ProgramPtr p = parse_program_atom(lx);
  while (lx.accept_punct(";")) {
    ProgramPtr q = parse_program_atom(lx);
    p = mk_seq(p, q);
  }
  return p;
}

std::vector<std::string> parse_uses(Lexer& lx) {
  std::vector<std::string> uses;
  while (lx.accept_kw("use")) {
    if (lx.peek().kind != Tok::Str) lx.err("expected quoted path after 'use'");
    uses.push_back(lx.next().text);
    lx.expect_punct(";");
  }
  return uses;
}

// --- triples and proofs ---------------------------------------------------------

Triple parse_triple_inner(Lexer& lx) {
  Triple t;
  lx.expect_punct("[");
  CondScope root;
  t.presumption = parse_cond(lx, root);
  lx.expect_punct("]");
  t.program = parse_program_expr(lx);
  lx.expect_punct("[");
  if (lx.accept_kw("ok")) t.exit_ok = true;
  else if (lx.accept_kw("er")) t.exit_ok = false;
  else lx.err("expected 'ok' or 'er'");
  lx.expect_punct(":");
  CondScope root2;
  t.result = parse_cond(lx, root2);
  lx.expect_punct("]");
  return t;
}

ProofRuleKind parse_proof_rule_name(Lexer& lx) {
  std::string n = lx.expect_ident("proof rule name");
  if (n == "RuleSetSucc") return ProofRuleKind::RuleSetSucc;
  if (n == "RuleSetFail") return ProofRuleKind::RuleSetFail;
  if (n == "SeqSucc") return ProofRuleKind::SeqSucc;
  if (n == "SeqFail") return ProofRuleKind::SeqFail;
  if (n == "IfElse") return ProofRuleKind::IfElse;
  if (n == "Cons") return ProofRuleKind::Cons;
  if (n == "IterZero") return ProofRuleKind::IterZero;
  if (n == "Iter") return ProofRuleKind::Iter;
  if (n == "IterVar") return ProofRuleKind::IterVar;
  lx.err("unknown proof rule '" + n + "'");
}

ProofNodePtr parse_proof_node(Lexer& lx) {
  lx.expect_punct("(");
  lx.expect_kw("rule");
  auto node = std::make_shared<ProofNode>();
  node->rule = parse_proof_rule_name(lx);
  lx.expect_kw("conclusion");
  lx.expect_punct(":");
  node->conclusion = parse_triple_inner(lx);
  for (;;) {
    if (lx.accept_kw("child")) {
      lx.expect_punct(":");
      node->children.push_back(parse_proof_node(lx));
    } else if (lx.accept_kw("hint")) {
      std::string name = lx.expect_ident("hint name");
      lx.expect_punct(":");
      CondScope root;
      node->hints[name] = parse_cond(lx, root);
    } else {
      break;
    }
  }
  lx.expect_punct(")");
  return node;
}

}  // namespace

// --- public entry points ----------------------------------------------------------

Expr parse_expr(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  Expr e = parse_expr_add(lx);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after expression");
  return e;
}

Label parse_label(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  Label l = parse_label_inner(lx);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after label");
  return l;
}

GraphPtr parse_graph(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  lx.expect_kw("graph");
  NameScope scope;
  RawGraph rg = parse_graph_items(lx, scope);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after graph");
  return build_graph(rg);
}

std::vector<RulePtr> parse_rules(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  std::vector<RulePtr> rules;
  std::set<std::string> names;
  while (lx.peek().kind != Tok::End) {
    lx.expect_kw("rule");
    std::string name = lx.expect_ident("rule name");
    if (is_keyword(name)) lx.err("'" + name + "' cannot name a rule");
    if (!names.insert(name).second) lx.err("duplicate rule '" + name + "'");
    std::vector<std::string> declared;
    lx.expect_punct("(");
    if (!lx.at_punct(")")) {
      declared.push_back(lx.expect_ident("variable"));
      while (lx.accept_punct(",")) declared.push_back(lx.expect_ident("variable"));
    }
    lx.expect_punct(")");
    lx.expect_punct("{");
    lx.expect_kw("lhs");
    NameScope scope;  // shared between lhs and rhs: same name = preserved
    RawGraph lraw = parse_graph_items(lx, scope);
    lx.expect_kw("rhs");
    RawGraph rraw = parse_graph_items(lx, scope);
    lx.expect_punct("}");

    GraphBuilder lb(GraphMode::Symbolic), rb(GraphMode::Symbolic);
    std::set<NodeId> lhs_ids, rhs_ids;
    for (auto& [id, lbl] : lraw.nodes) {
      lb.node(id, lbl);
      lhs_ids.insert(id);
    }
    for (auto& [s, t] : lraw.edges) lb.add_edge(s, t);
    for (auto& [id, lbl] : rraw.nodes) {
      rb.node(id, lbl);
      rhs_ids.insert(id);
    }
    for (auto& [s, t] : rraw.edges) rb.add_edge(s, t);
    std::map<NodeId, NodeId> preserved;
    for (NodeId id : lhs_ids)
      if (rhs_ids.count(id)) preserved[id] = id;

    GraphPtr lg = lb.build(), rg = rb.build();
    std::set<std::string> lvars, rvars;
    for (auto& n : lg->nodes) collect_vars(*n.label, lvars);
    for (auto& n : rg->nodes) collect_vars(*n.label, rvars);
    std::set<std::string> decl(declared.begin(), declared.end());
    if (decl.size() != declared.size()) lx.err("duplicate variable in rule header");
    for (auto& v : lvars)
      if (!decl.count(v))
        throw ParseError(file, lx.peek().line, lx.peek().col,
                         "rule " + name + ": variable '" + v + "' not declared");
    for (auto& v : decl)
      if (!lvars.count(v))
        throw ParseError(file, lx.peek().line, lx.peek().col,
                         "rule " + name + ": declared variable '" + v +
                             "' does not occur in the left-hand side");
    try {
      rules.push_back(make_rule(name, lg, rg, preserved));
    } catch (const std::runtime_error& e) {
      throw ParseError(file, lx.peek().line, lx.peek().col, e.what());
    }
  }
  return rules;
}

ProgramFile parse_program(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  ProgramFile pf;
  pf.uses = parse_uses(lx);
  pf.program = parse_program_expr(lx);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after program");
  return pf;
}

CondPtr parse_condition(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  CondScope root;
  CondPtr c = parse_cond(lx, root);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after condition");
  return c;
}

Triple parse_triple(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  Triple t = parse_triple_inner(lx);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after triple");
  return t;
}

ProofFile parse_proof(const std::string& text, const std::string& file) {
  Lexer lx(text, file);
  ProofFile pf;
  pf.uses = parse_uses(lx);
  pf.root = parse_proof_node(lx);
  if (lx.peek().kind != Tok::End) lx.err("trailing input after proof");
  return pf;
}

}  // namespace gpil
