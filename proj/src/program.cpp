#include "program.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gpil {

static std::vector<std::string> sort_unique(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.empty()) throw std::runtime_error("empty rule set");
  return names;
}

ProgramPtr mk_ruleset(std::vector<std::string> names) {
  auto p = std::make_shared<ProgramNode>();
  p->kind = ProgKind::RuleSet;
  p->rules = sort_unique(std::move(names));
  return p;
}

ProgramPtr mk_bang(std::vector<std::string> names) {
  auto p = std::make_shared<ProgramNode>();
  p->kind = ProgKind::Bang;
  p->rules = sort_unique(std::move(names));
  return p;
}

ProgramPtr mk_seq(ProgramPtr a, ProgramPtr b) {
  auto p = std::make_shared<ProgramNode>();
  p->kind = ProgKind::Seq;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

ProgramPtr mk_ifelse(std::vector<std::string> guard, ProgramPtr a, ProgramPtr b) {
  auto p = std::make_shared<ProgramNode>();
  p->kind = ProgKind::IfElse;
  p->rules = sort_unique(std::move(guard));
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

bool program_equal(const ProgramPtr& a, const ProgramPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  if (a->rules != b->rules) return false;
  switch (a->kind) {
    case ProgKind::RuleSet:
    case ProgKind::Bang: return true;
    case ProgKind::Seq:
    case ProgKind::IfElse:
      return program_equal(a->a, b->a) && program_equal(a->b, b->b);
  }
  return false;
}

static std::string ruleset_str(const std::vector<std::string>& names) {
  if (names.size() == 1) return names[0];
  std::string s = "{";
  for (size_t i = 0; i < names.size(); i++) {
    if (i) s += ", ";
    s += names[i];
  }
  return s + "}";
}

std::string to_string(const ProgramPtr& p) {
  switch (p->kind) {
    case ProgKind::RuleSet: return ruleset_str(p->rules);
    case ProgKind::Bang: return ruleset_str(p->rules) + "!";
    case ProgKind::Seq: {
      auto wrap = [](const ProgramPtr& q) {
        std::string s = to_string(q);
        return q->kind == ProgKind::IfElse ? "(" + s + ")" : s;
      };
      return wrap(p->a) + "; " + wrap(p->b);
    }
    case ProgKind::IfElse: {
      auto branch = [](const ProgramPtr& q) {
        std::string s = to_string(q);
        return q->kind == ProgKind::Seq || q->kind == ProgKind::IfElse ? "(" + s + ")" : s;
      };
      return "if " + ruleset_str(p->rules) + " then " + branch(p->a) + " else " +
             branch(p->b);
    }
  }
  return "?";
}

void check_rule_names(const ProgramPtr& p, const RuleEnv& env) {
  for (auto& n : p->rules)
    if (!env.count(n)) throw std::runtime_error("unknown rule name: " + n);
  if (p->a) check_rule_names(p->a, env);
  if (p->b) check_rule_names(p->b, env);
}

// --- outcome evaluation ------------------------------------------------------

namespace {

struct Eval {
  const RuleEnv& env;
  const Budget& budget;
  long long steps = 0;
  long long states = 0;
  bool truncated = false;

  bool spend_step() {
    if (steps >= budget.max_steps) {
      truncated = true;
      return false;
    }
    steps++;
    return true;
  }

  std::vector<const RuleSchema*> resolve(const std::vector<std::string>& names) {
    std::vector<const RuleSchema*> rs;
    rs.reserve(names.size());
    for (auto& n : names) {
      auto it = env.find(n);
      if (it == env.end()) throw std::runtime_error("unknown rule name: " + n);
      rs.push_back(it->second.get());
    }
    return rs;
  }

  // single nondeterministic step of a rule set: all successors up to iso
  std::vector<GraphPtr> step_all(const std::vector<const RuleSchema*>& rs,
                                 const GraphPtr& G, bool& any_match) {
    IsoStore next;
    any_match = false;
    for (auto* r : rs) {
      auto ms = find_matches(*r, G);
      if (!ms.empty()) any_match = true;
      for (auto& m : ms) {
        if (!spend_step()) return next.items();
        auto d = apply_rule(*r, G, m);
        if (static_cast<int>(d.result->nodes.size()) > budget.max_nodes) {
          truncated = true;
          continue;
        }
        next.insert(d.result);
      }
    }
    return next.items();
  }

  OutcomeSet run(const ProgramPtr& p, const GraphPtr& G) {
    OutcomeSet out;
    switch (p->kind) {
      case ProgKind::RuleSet: {
        auto rs = resolve(p->rules);
        bool any = false;
        auto succ = step_all(rs, G, any);
        for (auto& h : succ) out.ok.push_back(h);
        if (!any) out.er.push_back(G);
        break;
      }
      case ProgKind::Bang: {
        // worklist fixpoint over isomorphism classes; terminal states (no
        // match) are the ok results, er is empty by definition
        auto rs = resolve(p->rules);
        IsoStore visited;
        IsoStore terminal;
        std::deque<GraphPtr> work;
        visited.insert(G);
        work.push_back(G);
        while (!work.empty()) {
          GraphPtr cur = work.front();
          work.pop_front();
          states++;
          bool any = false;
          auto succ = step_all(rs, cur, any);
          if (!any) {
            terminal.insert(cur);
            continue;
          }
          for (auto& h : succ)
            if (visited.insert(h)) work.push_back(h);
          if (truncated && steps >= budget.max_steps) break;
        }
        for (auto& h : terminal.items()) out.ok.push_back(h);
        break;
      }
      case ProgKind::Seq: {
        OutcomeSet first = run(p->a, G);
        IsoStore ok, er;
        for (auto& h : first.er) er.insert(h);  // er(P) carries over
        for (auto& g2 : first.ok) {
          OutcomeSet second = run(p->b, g2);
          for (auto& h : second.ok) ok.insert(h);
          for (auto& h : second.er) er.insert(h);
        }
        out.ok = ok.items();
        out.er = er.items();
        break;
      }
      case ProgKind::IfElse: {
        auto rs = resolve(p->rules);
        bool applicable = false;
        for (auto* r : rs) {
          if (!find_matches(*r, G).empty()) {
            applicable = true;
            break;
          }
        }
        out = run(applicable ? p->a : p->b, G);
        break;
      }
    }
    return out;
  }
};

}  // namespace

OutcomeSet outcomes(const ProgramPtr& p, const RuleEnv& env, const GraphPtr& G,
                    const Budget& budget) {
  if (budget.max_steps <= 0 || budget.max_nodes <= 0)
    throw std::runtime_error("outcomes: budget must be positive");
  if (G->mode != GraphMode::Concrete)
    throw std::runtime_error("outcomes: start graph must be concrete");
  Eval ev{env, budget};
  OutcomeSet out = ev.run(p, G);
  out.truncated = ev.truncated;
  out.steps = ev.steps;
  out.states = ev.states;
  return out;
}

// --- single-trace sampler -------------------------------------------------------

namespace {

struct Runner {
  const RuleEnv& env;
  std::mt19937_64 rng;
  long long steps_left;
  std::vector<TraceStep>* trace;

  // uniform pick that stays reproducible across standard libraries
  size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }

  static std::string describe(const MatchCandidate& m) {
    std::ostringstream os;
    bool first = true;
    for (auto& [v, w] : m.match.node_map) {
      if (!first) os << ",";
      first = false;
      os << "n" << v << ">n" << w;
    }
    for (auto& [x, k] : m.interp) os << "," << x << "=" << k;
    return os.str();
  }

  struct StepResult {
    bool matched;
    GraphPtr graph;
  };

  StepResult step(const std::vector<std::string>& names, const GraphPtr& G) {
    std::vector<std::pair<const RuleSchema*, MatchCandidate>> all;
    for (auto& n : names) {
      const RuleSchema* r = env.at(n).get();
      for (auto& m : find_matches(*r, G)) all.emplace_back(r, std::move(m));
    }
    if (all.empty()) return {false, G};
    auto& [r, m] = all[pick(all.size())];
    auto d = apply_rule(*r, G, m);
    if (trace) trace->push_back(TraceStep{r->name, describe(m)});
    return {true, d.result};
  }

  // returns nullopt on diverged (step budget exhausted)
  std::optional<std::pair<bool, GraphPtr>> exec(const ProgramPtr& p, const GraphPtr& G) {
    switch (p->kind) {
      case ProgKind::RuleSet: {
        if (--steps_left < 0) return std::nullopt;
        auto s = step(p->rules, G);
        return std::make_pair(s.matched, s.graph);  // er keeps the pre-state
      }
      case ProgKind::Bang: {
        GraphPtr cur = G;
        for (;;) {
          if (--steps_left < 0) return std::nullopt;
          auto s = step(p->rules, cur);
          if (!s.matched) return std::make_pair(true, cur);
          cur = s.graph;
        }
      }
      case ProgKind::Seq: {
        auto fst = exec(p->a, G);
        if (!fst) return std::nullopt;
        if (!fst->first) return fst;  // failure propagates with its graph
        return exec(p->b, fst->second);
      }
      case ProgKind::IfElse: {
        bool applicable = false;
        for (auto& n : p->rules)
          if (!find_matches(*env.at(n), G).empty()) {
            applicable = true;
            break;
          }
        if (trace)
          trace->push_back(TraceStep{"if " + ruleset_str(p->rules),
                                     applicable ? "then" : "else"});
        return exec(applicable ? p->a : p->b, G);
      }
    }
    return std::nullopt;
  }
};

}  // namespace

RunResult run_random(const ProgramPtr& p, const RuleEnv& env, const GraphPtr& G,
                     uint64_t seed, long long max_steps) {
  Runner r{env, std::mt19937_64(seed), max_steps, nullptr};
  RunResult res;
  r.trace = &res.trace;
  auto fin = r.exec(p, G);
  if (!fin) {
    res.exit = RunExit::Diverged;
    res.graph = G;
    return res;
  }
  res.exit = fin->first ? RunExit::Ok : RunExit::Er;
  res.graph = fin->second;
  return res;
}

}  // namespace gpil
