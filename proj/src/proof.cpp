#include "proof.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "oracle.hpp"
#include "transform.hpp"

namespace gpil {

std::string to_string(const Triple& t) {
  return "[ " + to_string(t.presumption) + " ] " + to_string(t.program) + " [ " +
         (t.exit_ok ? "ok" : "er") + ": " + to_string(t.result) + " ]";
}

const char* proof_rule_name(ProofRuleKind k) {
  switch (k) {
    case ProofRuleKind::RuleSetSucc: return "RuleSetSucc";
    case ProofRuleKind::RuleSetFail: return "RuleSetFail";
    case ProofRuleKind::SeqSucc: return "SeqSucc";
    case ProofRuleKind::SeqFail: return "SeqFail";
    case ProofRuleKind::IfElse: return "IfElse";
    case ProofRuleKind::Cons: return "Cons";
    case ProofRuleKind::IterZero: return "IterZero";
    case ProofRuleKind::Iter: return "Iter";
    case ProofRuleKind::IterVar: return "IterVar";
  }
  return "?";
}

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Valid: return "Valid";
    case VerdictKind::ValidUpToBound: {
      std::string s = "ValidUpToBound (" + v.bound_desc + ")";
      for (auto& o : v.bounded_obligations) s += "\n  bounded obligation: " + o;
      return s;
    }
    case VerdictKind::Rejected:
      return "Rejected at " + v.rejected_at + ": " + v.reason;
  }
  return "?";
}

// --- rebasing a condition body onto another codomain graph -----------------------

namespace {

// Rename node/edge ids throughout a condition: ids in `nmap`/`emap` are
// translated, unseen ids get fresh ones above the given floors.
struct IdRebase {
  std::map<NodeId, NodeId> nmap;
  std::map<EdgeId, EdgeId> emap;
  NodeId next_node;
  EdgeId next_edge;

  GraphPtr rebase_graph(const GraphPtr& g) {
    GraphBuilder b(g->mode);
    for (auto& n : g->nodes) {
      auto it = nmap.find(n.id);
      NodeId id = it != nmap.end() ? it->second : (nmap[n.id] = next_node++);
      b.node(id, n.label);
    }
    for (auto& e : g->edges) {
      auto it = emap.find(e.id);
      EdgeId id = it != emap.end() ? it->second : (emap[e.id] = next_edge++);
      b.edge(id, nmap.at(e.src), nmap.at(e.tgt));
    }
    return b.build();
  }

  CondPtr rebase(const CondPtr& c) {
    switch (c->kind) {
      case CondKind::True:
      case CondKind::Constr: return c;
      case CondKind::ExistsInt: return cond_exists_int(c->var, rebase(c->body));
      case CondKind::ExistsMorph: {
        GraphPtr g = rebase_graph(c->cod);
        return cond_exists_morph(g, rebase(c->body));
      }
      case CondKind::Not: return cond_not(rebase(c->body));
      case CondKind::And: return cond_and(rebase(c->l), rebase(c->r));
      case CondKind::Or: return cond_or(rebase(c->l), rebase(c->r));
    }
    return c;
  }
};

// --- syntactic implication ---------------------------------------------------------

struct SynImp {
  const GraphPtr empty = empty_graph(GraphMode::Symbolic);
  std::map<std::string, bool> memo;
  int fresh_counter = 0;

  bool implies(const CondPtr& a0, const CondPtr& b0, const GraphPtr& context) {
    CondPtr a = simplify(a0), b = simplify(b0);
    std::string ca = canonical_cond(a, context), cb = canonical_cond(b, context);
    if (ca == cb) return true;
    if (is_cond_false(a) || b->kind == CondKind::True) return true;
    std::string key = ca + "=>" + cb;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;  // cut recursive loops pessimistically
    bool res = step(a, b, context);
    memo[key] = res;
    return res;
  }

  bool step(const CondPtr& a, const CondPtr& b, const GraphPtr& context) {
    // case split on an antecedent disjunction (complete)
    if (a->kind == CondKind::Or)
      return implies(a->l, b, context) && implies(a->r, b, context);
    // consequent conjunction (complete)
    if (b->kind == CondKind::And)
      return implies(a, b->l, context) && implies(a, b->r, context);
    // conjunct dropping on the antecedent
    if (a->kind == CondKind::And) {
      std::vector<CondPtr> juncts;
      std::function<void(const CondPtr&)> flat = [&](const CondPtr& c) {
        if (c->kind == CondKind::And) {
          flat(c->l);
          flat(c->r);
        } else {
          juncts.push_back(c);
        }
      };
      flat(a);
      for (auto& j : juncts)
        if (implies(j, b, context)) return true;
    }
    // disjunct introduction on the consequent
    if (b->kind == CondKind::Or) {
      if (implies(a, b->l, context) || implies(a, b->r, context)) return true;
    }
    // congruence through binders
    if (a->kind == CondKind::ExistsInt && b->kind == CondKind::ExistsInt) {
      std::string t = "$syn" + std::to_string(++fresh_counter);
      Subst sa{{a->var, mk_var(t)}}, sb{{b->var, mk_var(t)}};
      if (implies(subst_condition(a->body, sa), subst_condition(b->body, sb), context))
        return true;
    }
    // antecedent-side exists elimination: (ex x. c) => b  iff  c => b, x fresh
    if (a->kind == CondKind::ExistsInt && b->kind != CondKind::ExistsInt) {
      if (!free_vars(b).count(a->var) && implies(a->body, b, context)) return true;
    }
    if (a->kind == CondKind::ExistsMorph && b->kind == CondKind::ExistsMorph) {
      // same-shape codomains over the shared context
      if (a->cod->nodes.size() == b->cod->nodes.size() &&
          a->cod->edges.size() == b->cod->edges.size()) {
        std::map<NodeId, NodeId> fixn;
        std::map<EdgeId, EdgeId> fixe;
        for (auto& n : context->nodes) fixn[n.id] = n.id;
        for (auto& e : context->edges) fixe[e.id] = e.id;
        auto isos = find_injective_morphisms(a->cod, b->cod, fixn, fixe);
        for (auto& j : isos) {
          // bijective and label-strict both ways
          bool strict = true;
          for (auto& n : a->cod->nodes) {
            const Node* img = b->cod->node(j.node_map.at(n.id));
            bool both = n.label.has_value() == img->label.has_value();
            if (!both || (n.label && !label_equal(*n.label, *img->label))) {
              strict = false;
              break;
            }
          }
          if (!strict) continue;
          IdRebase rb;
          rb.nmap = j.node_map;
          rb.emap = j.edge_map;
          rb.next_node = b->cod->max_node_id() + 1;
          rb.next_edge = b->cod->max_edge_id() + 1;
          if (implies(rb.rebase(a->body), b->body, b->cod)) return true;
        }
      }
    }
    // antitone through negation
    if (a->kind == CondKind::Not && b->kind == CondKind::Not)
      return implies(b->body, a->body, context);
    return false;
  }
};

}  // namespace

bool syntactic_implies(const CondPtr& a, const CondPtr& b) {
  SynImp s;
  return s.implies(a, b, empty_graph(GraphMode::Symbolic));
}

// --- discharge -----------------------------------------------------------------

namespace {

std::vector<Label> derived_pool(const CondPtr& a, const CondPtr& b) {
  std::set<long long> ints;
  collect_consts(a, ints);
  collect_consts(b, ints);
  ints.insert(0);
  size_t max_len = 1;
  std::function<void(const CondPtr&)> walk = [&](const CondPtr& c) {
    switch (c->kind) {
      case CondKind::ExistsMorph:
        for (auto& n : c->cod->nodes)
          if (n.label) max_len = std::max(max_len, n.label->size());
        walk(c->body);
        return;
      case CondKind::ExistsInt:
      case CondKind::Not: walk(c->body); return;
      case CondKind::And:
      case CondKind::Or:
        walk(c->l);
        walk(c->r);
        return;
      default: return;
    }
  };
  walk(a);
  walk(b);
  max_len = std::min<size_t>(max_len, 2);  // keep the search space sane
  std::vector<Label> pool;
  std::vector<long long> vals(ints.begin(), ints.end());
  for (long long v : vals) pool.push_back(Label{mk_const(v)});
  if (max_len >= 2)
    for (long long v : vals)
      for (long long w : vals) pool.push_back(Label{mk_const(v), mk_const(w)});
  return pool;
}

}  // namespace

DischargeResult discharge_implication(const CondPtr& antecedent,
                                      const CondPtr& consequent,
                                      const DischargeConfig& cfg) {
  if (syntactic_implies(antecedent, consequent))
    return DischargeResult{DischargeKind::Syntactic, "", nullptr};
  Universe u;
  u.max_nodes = cfg.max_nodes;
  u.max_parallel = cfg.max_parallel;
  u.label_pool = cfg.label_pool.empty() ? derived_pool(antecedent, consequent)
                                        : cfg.label_pool;
  SatConfig sat;
  sat.int_window = cfg.int_window;
  sat.warn_unanchored = false;
  for (auto& G : enumerate_graphs(u)) {
    if (satisfies(G, antecedent, sat).value && !satisfies(G, consequent, sat).value)
      return DischargeResult{DischargeKind::Refuted, "", G};
  }
  std::ostringstream os;
  os << "graphs up to " << u.max_nodes << " nodes, " << u.label_pool.size()
     << " labels, max parallel " << u.max_parallel;
  return DischargeResult{DischargeKind::BoundedValid, os.str(), nullptr};
}

// --- the proof checker -----------------------------------------------------------

namespace {

struct Checker {
  const RuleEnv& env;
  const DischargeConfig& cfg;
  GraphPtr empty = empty_graph(GraphMode::Symbolic);
  std::vector<std::string> bounded;
  std::string fail_path, fail_reason;

  bool fail(const std::string& path, const std::string& reason) {
    fail_path = path;
    fail_reason = reason;
    return false;
  }

  std::string canon(const CondPtr& c) { return canonical_cond(c, empty); }

  bool cond_eq(const CondPtr& a, const CondPtr& b) { return canon(a) == canon(b); }

  std::vector<RulePtr> rule_set(const std::vector<std::string>& names) {
    std::vector<RulePtr> rs;
    for (auto& n : names) {
      auto it = env.find(n);
      if (it == env.end()) throw std::runtime_error("unknown rule name: " + n);
      rs.push_back(it->second);
    }
    return rs;
  }

  static std::vector<CondPtr> and_juncts(const CondPtr& c) {
    std::vector<CondPtr> out;
    std::function<void(const CondPtr&)> flat = [&](const CondPtr& cc) {
      if (cc->kind == CondKind::And) {
        flat(cc->l);
        flat(cc->r);
      } else {
        out.push_back(cc);
      }
    };
    flat(simplify(c));
    return out;
  }

  // does the (simplified) condition contain an And-junct canonically equal
  // to `what`? (the whole condition counts as a single junct)
  bool has_junct(const CondPtr& c, const CondPtr& what) {
    std::string target = canon(what);
    for (auto& j : and_juncts(c))
      if (canon(j) == target) return true;
    return false;
  }

  // candidates for c with presumption == c && App(R): the presumption minus
  // one junct matching App(R), and the presumption itself
  std::vector<CondPtr> strip_candidates(const CondPtr& presumption, const CondPtr& appc) {
    std::vector<CondPtr> out;
    std::string target = canon(appc);
    auto juncts = and_juncts(presumption);
    for (size_t i = 0; i < juncts.size(); i++) {
      if (canon(juncts[i]) != target) continue;
      std::vector<CondPtr> rest;
      for (size_t j = 0; j < juncts.size(); j++)
        if (j != i) rest.push_back(juncts[j]);
      out.push_back(simplify(cond_and_all(std::move(rest))));
      break;
    }
    out.push_back(simplify(presumption));
    return out;
  }

  bool discharge(const std::string& path, const std::string& what, const CondPtr& a,
                 const CondPtr& b) {
    DischargeResult r = discharge_implication(a, b, cfg);
    switch (r.kind) {
      case DischargeKind::Syntactic: return true;
      case DischargeKind::BoundedValid:
        bounded.push_back(path + ": " + what + " (holds over " + r.bound_desc + ")");
        return true;
      case DischargeKind::Refuted:
        return fail(path, what + " refuted by counterexample " + to_string(r.counterexample));
    }
    return false;
  }

  bool check(const ProofNodePtr& node, const std::string& path) {
    const Triple& t = node->conclusion;
    std::string why;
    if (!free_vars(t.presumption).empty() || !free_vars(t.result).empty())
      return fail(path, "triple conditions must be closed E-constraints");
    if (!check_condition(t.presumption, empty, &why) ||
        !check_condition(t.result, empty, &why))
      return fail(path, "ill-formed condition: " + why);
    try {
      check_rule_names(t.program, env);
    } catch (const std::runtime_error& e) {
      return fail(path, e.what());
    }

    auto need_children = [&](size_t n) {
      if (node->children.size() != n) {
        fail(path, std::string(proof_rule_name(node->rule)) + " expects " +
                       std::to_string(n) + " children, has " +
                       std::to_string(node->children.size()));
        return false;
      }
      return true;
    };

    switch (node->rule) {
      case ProofRuleKind::RuleSetSucc: {
        if (!need_children(0)) return false;
        if (t.program->kind != ProgKind::RuleSet)
          return fail(path, "RuleSetSucc concludes a rule-set application");
        CondPtr appc = app(rule_set(t.program->rules));
        if (!t.exit_ok) {
          if (!is_cond_false(simplify(t.result)))
            return fail(path, "RuleSetSucc er-result must be false");
          if (!has_junct(t.presumption, appc))
            return fail(path, "presumption lacks the App conjunct");
          return true;
        }
        for (auto& c : strip_candidates(t.presumption, appc)) {
          // presumption must equal c && App(R)
          if (!cond_eq(t.presumption, simplify(cond_and(c, appc)))) continue;
          CondPtr wp = wpost(rule_set(t.program->rules), c);
          if (cond_eq(t.result, wp)) return true;
        }
        return fail(path, "result does not match WPost of the presumption");
      }
      case ProofRuleKind::RuleSetFail: {
        if (!need_children(0)) return false;
        if (t.program->kind != ProgKind::RuleSet)
          return fail(path, "RuleSetFail concludes a rule-set application");
        CondPtr nap = simplify(cond_not(app(rule_set(t.program->rules))));
        if (!has_junct(t.presumption, nap))
          return fail(path, "presumption lacks the negated App conjunct");
        if (t.exit_ok) {
          if (!is_cond_false(simplify(t.result)))
            return fail(path, "RuleSetFail ok-result must be false");
          return true;
        }
        if (!cond_eq(t.presumption, t.result))
          return fail(path, "er-result must equal the presumption");
        return true;
      }
      case ProofRuleKind::SeqSucc: {
        if (!need_children(2)) return false;
        if (t.program->kind != ProgKind::Seq)
          return fail(path, "SeqSucc concludes a sequential composition");
        const Triple& c1 = node->children[0]->conclusion;
        const Triple& c2 = node->children[1]->conclusion;
        if (!program_equal(c1.program, t.program->a) ||
            !program_equal(c2.program, t.program->b))
          return fail(path, "children do not prove the two components");
        if (!c1.exit_ok) return fail(path, "first component must exit ok");
        if (c2.exit_ok != t.exit_ok) return fail(path, "exit mismatch");
        if (!cond_eq(c1.presumption, t.presumption))
          return fail(path, "first child's presumption differs");
        if (!cond_eq(c2.result, t.result)) return fail(path, "second child's result differs");
        if (!cond_eq(c1.result, c2.presumption))
          return fail(path, "mid-condition mismatch between the children");
        auto hint = node->hints.find("mid");
        if (hint != node->hints.end() && !cond_eq(hint->second, c1.result))
          return fail(path, "mid hint does not match the children");
        return check(node->children[0], path + "/child0") &&
               check(node->children[1], path + "/child1");
      }
      case ProofRuleKind::SeqFail: {
        if (!need_children(1)) return false;
        if (t.program->kind != ProgKind::Seq)
          return fail(path, "SeqFail concludes a sequential composition");
        if (t.exit_ok) return fail(path, "SeqFail concludes an er triple");
        const Triple& c1 = node->children[0]->conclusion;
        if (!program_equal(c1.program, t.program->a))
          return fail(path, "child must prove the first component");
        if (c1.exit_ok) return fail(path, "child must exit er");
        if (!cond_eq(c1.presumption, t.presumption) || !cond_eq(c1.result, t.result))
          return fail(path, "child triple differs");
        return check(node->children[0], path + "/child0");
      }
      case ProofRuleKind::IfElse: {
        if (!need_children(2)) return false;
        if (t.program->kind != ProgKind::IfElse)
          return fail(path, "IfElse concludes a conditional");
        CondPtr appc = app(rule_set(t.program->rules));
        const Triple& c1 = node->children[0]->conclusion;
        const Triple& c2 = node->children[1]->conclusion;
        if (!program_equal(c1.program, t.program->a) ||
            !program_equal(c2.program, t.program->b))
          return fail(path, "children do not prove the two branches");
        if (c1.exit_ok != t.exit_ok || c2.exit_ok != t.exit_ok)
          return fail(path, "exit mismatch");
        if (!cond_eq(c1.presumption, simplify(cond_and(t.presumption, appc))))
          return fail(path, "then-branch presumption must add App of the guard");
        if (!cond_eq(c2.presumption, simplify(cond_and(t.presumption, cond_not(appc)))))
          return fail(path, "else-branch presumption must add negated App");
        if (!cond_eq(c1.result, t.result) || !cond_eq(c2.result, t.result))
          return fail(path, "branch results differ from the conclusion");
        return check(node->children[0], path + "/child0") &&
               check(node->children[1], path + "/child1");
      }
      case ProofRuleKind::Cons: {
        if (!need_children(1)) return false;
        const Triple& c1 = node->children[0]->conclusion;
        if (!program_equal(c1.program, t.program)) return fail(path, "program differs");
        if (c1.exit_ok != t.exit_ok) return fail(path, "exit differs");
        auto hp = node->hints.find("pre");
        if (hp != node->hints.end() && !cond_eq(hp->second, c1.presumption))
          return fail(path, "pre hint does not match the child");
        auto hr = node->hints.find("post");
        if (hr != node->hints.end() && !cond_eq(hr->second, c1.result))
          return fail(path, "post hint does not match the child");
        if (!discharge(path, "presumption weakening (child presumption implies ours)",
                       c1.presumption, t.presumption))
          return false;
        if (!discharge(path, "result strengthening (our result implies the child's)",
                       t.result, c1.result))
          return false;
        return check(node->children[0], path + "/child0");
      }
      case ProofRuleKind::IterZero: {
        if (!need_children(0)) return false;
        if (t.program->kind != ProgKind::Bang)
          return fail(path, "IterZero concludes an iteration");
        CondPtr nap = simplify(cond_not(app(rule_set(t.program->rules))));
        if (!has_junct(t.presumption, nap))
          return fail(path, "presumption lacks the negated App conjunct");
        if (!t.exit_ok) {
          if (!is_cond_false(simplify(t.result)))
            return fail(path, "IterZero er-result must be false");
          return true;
        }
        if (!cond_eq(t.presumption, t.result))
          return fail(path, "ok-result must equal the presumption");
        return true;
      }
      case ProofRuleKind::Iter: {
        if (!need_children(1)) return false;
        if (t.program->kind != ProgKind::Bang)
          return fail(path, "Iter concludes an iteration");
        if (!t.exit_ok) return fail(path, "Iter concludes an ok triple");
        CondPtr appc = app(rule_set(t.program->rules));
        if (!has_junct(t.presumption, appc))
          return fail(path, "presumption lacks the App conjunct");
        if (!has_junct(t.result, simplify(cond_not(appc))))
          return fail(path, "result lacks the negated App conjunct");
        const Triple& c1 = node->children[0]->conclusion;
        ProgramPtr unrolled = mk_seq(mk_ruleset(t.program->rules), t.program);
        if (!program_equal(c1.program, unrolled))
          return fail(path, "child must prove one unrolling R; R!");
        if (!c1.exit_ok) return fail(path, "child must exit ok");
        if (!cond_eq(c1.presumption, t.presumption) || !cond_eq(c1.result, t.result))
          return fail(path, "child triple differs from the conclusion");
        return check(node->children[0], path + "/child0");
      }
      case ProofRuleKind::IterVar: {
        if (t.program->kind != ProgKind::Bang)
          return fail(path, "IterVar concludes an iteration");
        if (!t.exit_ok) return fail(path, "IterVar concludes an ok triple");
        ProgramPtr step = mk_ruleset(t.program->rules);
        CondPtr prev = t.presumption;
        for (size_t i = 0; i < node->children.size(); i++) {
          const Triple& ci = node->children[i]->conclusion;
          if (!program_equal(ci.program, step))
            return fail(path, "chain child " + std::to_string(i) +
                                  " must prove a single application");
          if (!ci.exit_ok)
            return fail(path, "chain child " + std::to_string(i) + " must exit ok");
          if (!cond_eq(ci.presumption, prev))
            return fail(path, "chain broken before child " + std::to_string(i));
          prev = ci.result;
        }
        if (!cond_eq(prev, t.result))
          return fail(path, "chain does not end at the conclusion's result");
        CondPtr nap = simplify(cond_not(app(rule_set(t.program->rules))));
        if (!discharge(path, "termination (c_n implies not App)", t.result, nap))
          return false;
        for (size_t i = 0; i < node->children.size(); i++)
          if (!check(node->children[i], path + "/child" + std::to_string(i)))
            return false;
        return true;
      }
    }
    return fail(path, "unknown proof rule");
  }
};

}  // namespace

Verdict check_proof(const ProofNodePtr& root, const RuleEnv& env,
                    const DischargeConfig& cfg) {
  Checker ck{env, cfg};
  Verdict v;
  bool ok;
  try {
    ok = ck.check(root, "root");
  } catch (const std::exception& e) {
    v.kind = VerdictKind::Rejected;
    v.rejected_at = "root";
    v.reason = e.what();
    return v;
  }
  if (!ok) {
    v.kind = VerdictKind::Rejected;
    v.rejected_at = ck.fail_path;
    v.reason = ck.fail_reason;
    return v;
  }
  if (!ck.bounded.empty()) {
    v.kind = VerdictKind::ValidUpToBound;
    std::ostringstream os;
    os << ck.bounded.size() << " obligation(s) checked by bounded enumeration";
    v.bound_desc = os.str();
    v.bounded_obligations = ck.bounded;
    return v;
  }
  v.kind = VerdictKind::Valid;
  return v;
}

}  // namespace gpil
