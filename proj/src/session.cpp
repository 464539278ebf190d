#include "session.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "parse.hpp"

namespace gpil {

using nlohmann::json;

std::vector<Label> parse_label_list(const std::string& csv) {
  std::vector<Label> out;
  std::string cur;
  std::istringstream is(csv);
  while (std::getline(is, cur, ',')) {
    if (cur.empty()) continue;
    Label l = parse_label(cur);
    if (!is_constant(l)) throw std::runtime_error("universe label not constant: " + cur);
    out.push_back(std::move(l));
  }
  if (out.empty()) throw std::runtime_error("empty label list");
  return out;
}

void Workspace::load_rules_file(const std::string& path) {
  for (auto& r : parse_rules(read_file(path), path)) {
    if (env_.count(r->name))
      throw std::runtime_error("duplicate rule name across files: " + r->name);
    env_[r->name] = r;
  }
}

void Workspace::load_rules_text(const std::string& text, const std::string& name) {
  for (auto& r : parse_rules(text, name)) {
    if (env_.count(r->name))
      throw std::runtime_error("duplicate rule name: " + r->name);
    env_[r->name] = r;
  }
}

std::vector<RulePtr> Workspace::select_rules(const std::vector<std::string>& names) const {
  std::vector<RulePtr> out;
  if (names.empty()) {
    for (auto& [n, r] : env_) out.push_back(r);  // map order = sorted by name
    return out;
  }
  for (auto& n : names) {
    auto it = env_.find(n);
    if (it == env_.end()) throw std::runtime_error("unknown rule name: " + n);
    out.push_back(it->second);
  }
  return out;
}

Universe Workspace::universe() const {
  Universe u;
  u.max_nodes = opts.max_nodes;
  u.max_parallel = opts.max_parallel;
  u.label_pool = opts.labels;
  if (u.label_pool.empty())
    u.label_pool = {Label{mk_const(0)}, Label{mk_const(1)}};
  return u;
}

OracleConfig Workspace::oracle_config() const {
  OracleConfig cfg;
  cfg.budget.max_steps = opts.max_steps;
  cfg.budget.max_nodes = opts.growth_cap;
  cfg.sat.int_window = opts.int_window;
  cfg.jobs = opts.jobs;
  return cfg;
}

void Workspace::load_uses(const std::vector<std::string>& uses) {
  for (auto& u : uses) {
    std::string path = u;
    if (!path.empty() && path[0] != '/') path = opts.base_dir + "/" + path;
    for (auto& r : parse_rules(read_file(path), path)) {
      auto it = env_.find(r->name);
      if (it != env_.end()) {
        if (!rule_equal(it->second, r))
          throw std::runtime_error("conflicting definitions of rule " + r->name);
        continue;
      }
      env_[r->name] = r;
    }
  }
}

ProgramPtr Workspace::load_program(const std::string& text) {
  ProgramFile pf = parse_program(text, "<program>");
  load_uses(pf.uses);
  check_rule_names(pf.program, env_);
  return pf.program;
}

static OpResult guard(const std::function<OpResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    OpResult r;
    r.status = StatusError;
    r.output = std::string("error: ") + e.what() + "\n";
    return r;
  }
}

OpResult Workspace::op_run(const std::string& program_text, const std::string& graph_text) {
  return guard([&]() {
    ProgramPtr p = load_program(program_text);
    GraphPtr g = parse_graph(graph_text, "<graph>");
    if (g->mode != GraphMode::Concrete)
      throw std::runtime_error("host graph must have constant labels");
    RunResult rr = run_random(p, env_, g, opts.seed, opts.max_steps);
    OpResult out;
    const char* exit = rr.exit == RunExit::Ok ? "ok"
                       : rr.exit == RunExit::Er ? "er" : "diverged";
    if (opts.machine) {
      json j;
      j["exit"] = exit;
      j["graph"] = to_string(rr.graph);
      json steps = json::array();
      for (auto& s : rr.trace) steps.push_back({{"rule", s.rule}, {"match", s.match}});
      j["trace"] = std::move(steps);
      out.output = j.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "exit: " << exit << "\n";
      for (auto& s : rr.trace) os << "  " << s.rule << " [" << s.match << "]\n";
      os << "graph: " << to_string(rr.graph) << "\n";
      out.output = os.str();
    }
    out.status = rr.exit == RunExit::Ok ? StatusOk
                 : rr.exit == RunExit::Er ? StatusRefuted : StatusBounded;
    return out;
  });
}

OpResult Workspace::op_outcomes(const std::string& program_text,
                                const std::string& graph_text) {
  return guard([&]() {
    ProgramPtr p = load_program(program_text);
    GraphPtr g = parse_graph(graph_text, "<graph>");
    Budget b;
    b.max_steps = opts.max_steps;
    b.max_nodes = opts.growth_cap;
    OutcomeSet os = outcomes(p, env_, g, b);
    OpResult out;
    if (opts.machine) {
      json j;
      j["ok"] = json::array();
      for (auto& h : os.ok) j["ok"].push_back(to_string(h));
      j["er"] = json::array();
      for (auto& h : os.er) j["er"].push_back(to_string(h));
      j["truncated"] = os.truncated;
      j["steps"] = os.steps;
      j["states"] = os.states;
      out.output = j.dump(2) + "\n";
    } else {
      std::ostringstream s;
      s << "ok (" << os.ok.size() << "):\n";
      for (auto& h : os.ok) s << "  " << to_string(h) << "\n";
      s << "er (" << os.er.size() << "):\n";
      for (auto& h : os.er) s << "  " << to_string(h) << "\n";
      s << "truncated: " << (os.truncated ? "true" : "false") << "\n";
      s << "steps: " << os.steps << ", states: " << os.states << "\n";
      out.output = s.str();
    }
    out.status = os.truncated ? StatusBounded : StatusOk;
    return out;
  });
}

OpResult Workspace::op_satisfies(const std::string& cond_text,
                                 const std::string& graph_text) {
  return guard([&]() {
    CondPtr c = parse_condition(cond_text, "<cond>");
    GraphPtr g = parse_graph(graph_text, "<graph>");
    SatConfig sat;
    sat.int_window = opts.int_window;
    SatResult r = satisfies(g, c, sat);
    OpResult out;
    if (opts.machine) {
      json j;
      j["satisfies"] = r.value;
      j["warnings"] = r.warnings;
      out.output = j.dump(2) + "\n";
    } else {
      out.output = std::string(r.value ? "true" : "false") + "\n";
    }
    for (auto& w : r.warnings) out.warnings += "warning: " + w + "\n";
    out.status = r.value ? StatusOk : StatusRefuted;
    return out;
  });
}

OpResult Workspace::op_app(const std::vector<std::string>& rule_names) {
  return guard([&]() {
    CondPtr c = app(select_rules(rule_names));
    OpResult out;
    if (opts.machine) {
      json j;
      j["condition"] = to_string(c);
      out.output = j.dump(2) + "\n";
    } else {
      out.output = to_string(c) + "\n";
    }
    return out;
  });
}

OpResult Workspace::op_wpost(const std::vector<std::string>& rule_names,
                             const std::string& cond_text) {
  return guard([&]() {
    CondPtr c = parse_condition(cond_text, "<cond>");
    auto fv = free_vars(c);
    if (!fv.empty())
      throw std::runtime_error("wpost input must be an E-constraint (free: " +
                               *fv.begin() + ")");
    CondPtr w = wpost(select_rules(rule_names), c);
    OpResult out;
    if (opts.machine) {
      json j;
      j["condition"] = to_string(w);
      out.output = j.dump(2) + "\n";
    } else {
      out.output = to_string(w) + "\n";
    }
    return out;
  });
}

OpResult Workspace::op_check(const std::string& proof_text) {
  return guard([&]() {
    ProofFile pf = parse_proof(proof_text, "<proof>");
    load_uses(pf.uses);
    DischargeConfig cfg;
    cfg.max_nodes = opts.max_nodes;
    cfg.max_parallel = opts.max_parallel;
    cfg.int_window = opts.int_window;
    cfg.label_pool = opts.labels;  // empty: derived per obligation
    Verdict v = check_proof(pf.root, env_, cfg);
    OpResult out;
    if (opts.machine) {
      json j;
      j["verdict"] = v.kind == VerdictKind::Valid          ? "Valid"
                     : v.kind == VerdictKind::ValidUpToBound ? "ValidUpToBound"
                                                             : "Rejected";
      j["detail"] = to_string(v);
      out.output = j.dump(2) + "\n";
    } else {
      out.output = to_string(v) + "\n";
    }
    out.status = v.kind == VerdictKind::Valid          ? StatusOk
                 : v.kind == VerdictKind::ValidUpToBound ? StatusBounded
                                                         : StatusRefuted;
    return out;
  });
}

OpResult Workspace::op_validate(const std::string& triple_text) {
  return guard([&]() {
    Triple t = parse_triple(triple_text, "<triple>");
    check_rule_names(t.program, env_);
    Universe u_post = universe();
    Universe u_pre = default_preimage_universe(u_post, t.program, env_);
    ValidityReport rep = validate_triple_bounded(t.presumption, t.program, t.exit_ok,
                                                 t.result, env_, u_post, u_pre,
                                                 oracle_config());
    OpResult out;
    if (opts.machine) {
      json j;
      j["verdict"] = rep.counterexample ? "Counterexample" : "NoCounterexample";
      j["exact"] = rep.exact;
      j["post_candidates"] = rep.post_candidates;
      if (rep.counterexample) {
        j["witness"] = to_string(rep.witness);
        j["searched_preimages"] = rep.searched_preimages;
      }
      out.output = j.dump(2) + "\n";
    } else {
      std::ostringstream os;
      if (rep.counterexample) {
        os << "Counterexample: result graph with no reachable pre-state\n";
        os << "  witness: " << to_string(rep.witness) << "\n";
        os << "  searched preimages: " << rep.searched_preimages << "\n";
      } else {
        os << "NoCounterexample (" << rep.post_candidates
           << " result graphs all reachable)\n";
      }
      os << "exact: " << (rep.exact ? "true" : "false") << "\n";
      out.output = os.str();
    }
    out.status = rep.counterexample ? StatusRefuted
                 : rep.exact ? StatusOk : StatusBounded;
    return out;
  });
}

OpResult Workspace::op_difftest(const std::string& kind,
                                const std::vector<std::string>& rule_names,
                                const std::string& cond_text,
                                const std::string& mutation) {
  return guard([&]() {
    TransformOptions topts;
    if (mutation.empty()) topts.corrupt = Corrupt::None;
    else if (mutation == "app-drop-dang") topts.corrupt = Corrupt::AppDropDang;
    else if (mutation == "app-drop-rule") topts.corrupt = Corrupt::AppDropRule;
    else if (mutation == "wpost-drop-inverse-dang")
      topts.corrupt = Corrupt::WpostDropInverseDang;
    else if (mutation == "shift-identity-only")
      topts.corrupt = Corrupt::ShiftIdentityQuotientOnly;
    else if (mutation == "right-no-complement-true")
      topts.corrupt = Corrupt::RightNoComplementTrue;
    else throw std::runtime_error("unknown mutation: " + mutation);

    auto rules = select_rules(rule_names);
    if (rules.empty()) throw std::runtime_error("difftest needs rules");
    Universe u = universe();
    OracleConfig cfg = oracle_config();
    DiffReport rep;
    if (kind == "app") {
      rep = difftest_app(rules, u, cfg, topts);
    } else if (kind == "wpost") {
      CondPtr c = parse_condition(cond_text.empty() ? "true" : cond_text, "<cond>");
      Universe u_pre = u;
      for (auto& r : rules) {
        int deleted = 0;
        for (auto& n : r->lhs->nodes)
          if (!r->preserved.count(n.id)) deleted++;
        u_pre.max_nodes = std::max(u_pre.max_nodes, u.max_nodes + deleted);
      }
      rep = difftest_wpost(rules, c, u, u_pre, cfg, topts);
    } else if (kind == "shift") {
      CondPtr c = parse_condition(cond_text.empty() ? "true" : cond_text, "<cond>");
      rep = difftest_shift(rules[0], c, u, cfg, topts);
    } else if (kind == "right") {
      CondPtr c = parse_condition(cond_text.empty() ? "true" : cond_text, "<cond>");
      rep = difftest_right(rules[0], c, u, cfg, topts);
    } else {
      throw std::runtime_error("unknown difftest kind: " + kind +
                               " (expected app|wpost|shift|right)");
    }
    OpResult out;
    if (opts.machine) {
      json j;
      j["kind"] = kind;
      j["cases"] = rep.cases;
      j["violations"] = json::array();
      for (auto& v : rep.violations)
        j["violations"].push_back({{"detail", v.detail}, {"graph", to_string(v.graph)}});
      out.output = j.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "cases: " << rep.cases << "\n";
      os << "violations: " << rep.violations.size() << "\n";
      for (auto& v : rep.violations)
        os << "  " << v.detail << "\n    at " << to_string(v.graph) << "\n";
      out.output = os.str();
    }
    out.status = rep.violations.empty() ? StatusOk : StatusRefuted;
    return out;
  });
}

}  // namespace gpil
