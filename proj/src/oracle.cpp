#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gpil {

// --- enumeration ------------------------------------------------------------

namespace {

// multisets of pool indices, non-decreasing
void label_choices(int n, int pool, int start, std::vector<int>& cur,
                   const std::function<void(const std::vector<int>&)>& emit) {
  if (n == 0) {
    emit(cur);
    return;
  }
  for (int i = start; i < pool; i++) {
    cur.push_back(i);
    label_choices(n - 1, pool, i, cur, emit);
    cur.pop_back();
  }
}

void parallel_for(int jobs, size_t n, const std::function<void(size_t, size_t)>& run) {
  if (jobs <= 1 || n < 2) {
    run(0, n);
    return;
  }
  size_t workers = std::min<size_t>(jobs, n);
  size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> ts;
  for (size_t w = 0; w < workers; w++) {
    size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    ts.emplace_back(run, lo, hi);
  }
  for (auto& t : ts) t.join();
}

}  // namespace

std::vector<GraphPtr> enumerate_graphs(const Universe& u) {
  if (u.label_pool.empty()) throw std::runtime_error("universe: empty label pool");
  for (auto& l : u.label_pool)
    if (!is_constant(l)) throw std::runtime_error("universe: labels must be constant");
  std::vector<GraphPtr> out;
  IsoStore seen;
  for (int n = 0; n <= u.max_nodes; n++) {
    std::vector<int> cur;
    label_choices(n, static_cast<int>(u.label_pool.size()), 0, cur,
                  [&](const std::vector<int>& labels) {
      // edge multiplicities over ordered pairs, odometer-style
      int pairs = n * n;
      std::vector<int> mult(pairs, 0);
      for (;;) {
        GraphBuilder b(GraphMode::Concrete);
        for (int i = 0; i < n; i++) b.node(i, u.label_pool[labels[i]]);
        for (int p = 0; p < pairs; p++)
          for (int k = 0; k < mult[p]; k++) b.add_edge(p / n, p % n);
        GraphPtr g = b.build();
        if (seen.insert(g)) out.push_back(g);
        int idx = pairs - 1;
        while (idx >= 0 && mult[idx] == u.max_parallel) mult[idx--] = 0;
        if (idx < 0) break;
        mult[idx]++;
      }
    });
  }
  return out;
}

// --- validity ------------------------------------------------------------------

Universe default_preimage_universe(const Universe& u_post, const ProgramPtr& program,
                                   const RuleEnv& env) {
  int extra = 0;
  std::function<void(const ProgramPtr&)> walk = [&](const ProgramPtr& p) {
    for (auto& name : p->rules) {
      const RuleSchema& r = *env.at(name);
      int deleted = 0;
      for (auto& n : r.lhs->nodes)
        if (!r.preserved.count(n.id)) deleted++;
      extra = std::max(extra, deleted);
    }
    if (p->a) walk(p->a);
    if (p->b) walk(p->b);
  };
  walk(program);
  Universe u = u_post;
  u.max_nodes += extra;
  return u;
}

ValidityReport validate_triple_bounded(const CondPtr& presumption,
                                       const ProgramPtr& program, bool exit_ok,
                                       const CondPtr& result, const RuleEnv& env,
                                       const Universe& u_post, const Universe& u_pre,
                                       const OracleConfig& cfg) {
  check_rule_names(program, env);
  ValidityReport rep;
  auto post = enumerate_graphs(u_post);
  auto pre = enumerate_graphs(u_pre);

  // result-satisfying post graphs, in enumeration order
  std::vector<char> post_sat(post.size(), 0);
  parallel_for(cfg.jobs, post.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++)
      post_sat[i] = satisfies(post[i], result, cfg.sat).value ? 1 : 0;
  });
  std::vector<char> pre_sat(pre.size(), 0);
  parallel_for(cfg.jobs, pre.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++)
      pre_sat[i] = satisfies(pre[i], presumption, cfg.sat).value ? 1 : 0;
  });

  // outcomes per presumption graph, computed on demand and cached; under
  // --jobs the whole cache is precomputed in parallel
  std::vector<std::unique_ptr<OutcomeSet>> cache(pre.size());
  auto outcome_of = [&](size_t i) -> const OutcomeSet& {
    if (!cache[i])
      cache[i] = std::make_unique<OutcomeSet>(outcomes(program, env, pre[i], cfg.budget));
    return *cache[i];
  };
  if (cfg.jobs > 1) {
    parallel_for(cfg.jobs, pre.size(), [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; i++)
        if (pre_sat[i]) outcome_of(i);
    });
  }

  long long presumption_count = 0;
  for (size_t i = 0; i < pre.size(); i++)
    if (pre_sat[i]) presumption_count++;

  for (size_t hi = 0; hi < post.size(); hi++) {
    if (!post_sat[hi]) continue;
    rep.post_candidates++;
    const GraphPtr& H = post[hi];
    bool found = false;
    long long searched = 0;
    for (size_t gi = 0; gi < pre.size() && !found; gi++) {
      if (!pre_sat[gi]) continue;
      searched++;
      const OutcomeSet& out = outcome_of(gi);
      if (out.truncated) rep.exact = false;
      const auto& side = exit_ok ? out.ok : out.er;
      for (auto& h2 : side)
        if (isomorphic(H, h2)) {
          found = true;
          break;
        }
    }
    if (!found) {
      rep.counterexample = true;
      rep.witness = H;
      rep.searched_preimages = presumption_count;
      (void)searched;
      return rep;
    }
  }
  return rep;
}

// --- difftest ---------------------------------------------------------------------

DiffReport difftest_app(const std::vector<RulePtr>& rules, const Universe& u,
                        const OracleConfig& cfg, const TransformOptions& opts) {
  CondPtr appc = app(rules, opts);
  auto graphs = enumerate_graphs(u);
  DiffReport rep;
  rep.cases = static_cast<long long>(graphs.size());
  std::vector<std::vector<DiffViolation>> chunks(graphs.size());
  parallel_for(cfg.jobs, graphs.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++) {
      bool sat = satisfies(graphs[i], appc, cfg.sat).value;
      bool match = false;
      for (auto& r : rules)
        if (!find_matches(*r, graphs[i]).empty()) {
          match = true;
          break;
        }
      if (sat != match) {
        std::ostringstream os;
        os << "App mismatch: satisfies=" << (sat ? "true" : "false")
           << " matches=" << (match ? "true" : "false");
        chunks[i].push_back(DiffViolation{os.str(), graphs[i]});
      }
    }
  });
  for (auto& ch : chunks)
    for (auto& v : ch) rep.violations.push_back(v);
  return rep;
}

DiffReport difftest_wpost(const std::vector<RulePtr>& rules, const CondPtr& c,
                          const Universe& u_post, const Universe& u_pre,
                          const OracleConfig& cfg, const TransformOptions& opts) {
  CondPtr wp = wpost(rules, c, opts);
  auto post = enumerate_graphs(u_post);
  auto pre = enumerate_graphs(u_pre);
  DiffReport rep;
  rep.cases = static_cast<long long>(post.size());

  // forward image of every c-satisfying pre-graph under one application
  IsoStore image;
  for (auto& G : pre) {
    if (!satisfies(G, c, cfg.sat).value) continue;
    for (auto& r : rules)
      for (auto& m : find_matches(*r, G)) image.insert(apply_rule(*r, G, m).result);
  }

  std::vector<std::vector<DiffViolation>> chunks(post.size());
  parallel_for(cfg.jobs, post.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++) {
      bool sat = satisfies(post[i], wp, cfg.sat).value;
      bool reach = image.contains(post[i]);
      if (sat != reach) {
        std::ostringstream os;
        os << "WPost mismatch: satisfies=" << (sat ? "true" : "false")
           << " reachable=" << (reach ? "true" : "false");
        chunks[i].push_back(DiffViolation{os.str(), post[i]});
      }
    }
  });
  for (auto& ch : chunks)
    for (auto& v : ch) rep.violations.push_back(v);
  return rep;
}

DiffReport difftest_shift(const RulePtr& r, const CondPtr& c, const Universe& u,
                          const OracleConfig& cfg, const TransformOptions& opts) {
  CondPtr cf = freshen(c, *r);
  CondPtr sh = shift(*r, cf, opts);
  auto graphs = enumerate_graphs(u);
  DiffReport rep;
  std::vector<std::vector<DiffViolation>> chunks(graphs.size());
  std::vector<long long> counts(graphs.size(), 0);
  parallel_for(cfg.jobs, graphs.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++) {
      const GraphPtr& G = graphs[i];
      bool whole = satisfies(G, cf, cfg.sat).value;
      for (auto& m : find_matches(*r, G)) {
        counts[i]++;
        bool at = satisfies_at(m.match, m.interp, sh, cfg.sat);
        if (at != whole) {
          std::ostringstream os;
          os << "Shift mismatch at match of " << r->name
             << ": shifted=" << (at ? "true" : "false")
             << " constraint=" << (whole ? "true" : "false");
          chunks[i].push_back(DiffViolation{os.str(), G});
        }
      }
    }
  });
  for (size_t i = 0; i < graphs.size(); i++) {
    rep.cases += counts[i];
    for (auto& v : chunks[i]) rep.violations.push_back(v);
  }
  return rep;
}

DiffReport difftest_right(const RulePtr& r, const CondPtr& c, const Universe& u,
                          const OracleConfig& cfg, const TransformOptions& opts) {
  // a left condition with known pedigree: Shift of the freshened constraint
  CondPtr cf = freshen(c, *r);
  CondPtr left = shift(*r, cf, {});
  CondPtr rg = right(*r, left, opts);
  auto graphs = enumerate_graphs(u);
  DiffReport rep;
  std::vector<std::vector<DiffViolation>> chunks(graphs.size());
  std::vector<long long> counts(graphs.size(), 0);
  parallel_for(cfg.jobs, graphs.size(), [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; i++) {
      const GraphPtr& G = graphs[i];
      for (auto& m : find_matches(*r, G)) {
        counts[i]++;
        auto d = apply_rule(*r, G, m);
        bool at_g = satisfies_at(m.match, m.interp, left, cfg.sat);
        bool at_h = satisfies_at(d.comatch, m.interp, rg, cfg.sat);
        if (at_g != at_h) {
          std::ostringstream os;
          os << "Right mismatch across derivation of " << r->name
             << ": left=" << (at_g ? "true" : "false")
             << " right=" << (at_h ? "true" : "false");
          chunks[i].push_back(DiffViolation{os.str(), G});
        }
      }
    }
  });
  for (size_t i = 0; i < graphs.size(); i++) {
    rep.cases += counts[i];
    for (auto& v : chunks[i]) rep.violations.push_back(v);
  }
  return rep;
}

// --- randomised lemma suites ----------------------------------------------------

namespace {

struct CondGen {
  std::mt19937_64 rng;
  int var_count = 0;

  size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }
  long long small_int() { return static_cast<long long>(rng() % 3); }

  Expr atom(const std::vector<std::string>& scope) {
    if (!scope.empty() && pick(2) == 0) return mk_var(scope[pick(scope.size())]);
    return mk_const(small_int());
  }

  // context: symbolic graph the condition lives over
  CondPtr gen(const GraphPtr& context, std::vector<std::string> scope, int depth) {
    int choice = static_cast<int>(pick(depth <= 0 ? 2 : 6));
    switch (choice) {
      case 0: return cond_true();
      case 1: {
        if (scope.empty()) return cond_true();
        CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le};
        return cond_constr(mk_cmp(ops[pick(4)], atom(scope), atom(scope)));
      }
      case 2: {  // exists int
        std::string v = "q" + std::to_string(++var_count);
        scope.push_back(v);
        return cond_exists_int(v, gen(context, scope, depth - 1));
      }
      case 3: {  // exists morph: extend context by up to one node + one edge
        GraphBuilder b(GraphMode::Symbolic);
        for (auto& n : context->nodes) b.node(n.id, n.label);
        for (auto& e : context->edges) b.edge(e.id, e.src, e.tgt);
        NodeId fresh = context->max_node_id() + 1;
        bool add_node = context->nodes.empty() || pick(3) != 0;
        if (add_node) {
          Label l;
          l.push_back(atom(scope));
          if (pick(3) == 0) l.push_back(atom(scope));
          b.node(fresh, l);
        }
        GraphPtr half = b.build();
        if (half->nodes.size() >= 1 && pick(2) == 0) {
          GraphBuilder b2(GraphMode::Symbolic);
          for (auto& n : half->nodes) b2.node(n.id, n.label);
          for (auto& e : half->edges) b2.edge(e.id, e.src, e.tgt);
          NodeId s = half->nodes[pick(half->nodes.size())].id;
          NodeId t = half->nodes[pick(half->nodes.size())].id;
          b2.add_edge(s, t);
          half = b2.build();
        }
        return cond_exists_morph(half, gen(half, scope, depth - 1));
      }
      case 4: return cond_not(gen(context, scope, depth - 1));
      default: {
        CondPtr l = gen(context, scope, depth - 1);
        CondPtr r = gen(context, std::move(scope), depth - 1);
        return pick(2) == 0 ? cond_and(l, r) : cond_or(l, r);
      }
    }
  }

  GraphPtr random_graph(const std::vector<Label>& pool, int max_nodes, int max_par) {
    int n = static_cast<int>(pick(max_nodes + 1));
    GraphBuilder b(GraphMode::Concrete);
    for (int i = 0; i < n; i++) b.node(i, pool[pick(pool.size())]);
    for (int s = 0; s < n; s++)
      for (int t = 0; t < n; t++)
        for (int k = 0; k < max_par; k++)
          if (pick(3) == 0) b.add_edge(s, t);
    return b.build();
  }
};

std::vector<Label> small_pool() {
  return {Label{mk_const(0)}, Label{mk_const(1)}, Label{mk_const(2)},
          Label{mk_const(0), mk_const(0)}, Label{mk_const(0), mk_const(1)},
          Label{mk_const(1), mk_const(1)}};
}

}  // namespace

DiffReport lemma_suite_shift(const std::vector<RulePtr>& pool, uint64_t seed, int count,
                             const OracleConfig& cfg) {
  DiffReport rep;
  CondGen gen{std::mt19937_64(seed)};
  auto labels = small_pool();
  GraphPtr empty = empty_graph(GraphMode::Symbolic);
  int made = 0;
  while (made < count) {
    const RulePtr& r = pool[gen.pick(pool.size())];
    CondPtr c = gen.gen(empty, {}, 3);
    GraphPtr G = gen.random_graph(labels, 3, 1);
    auto ms = find_matches(*r, G);
    if (ms.empty()) continue;  // need a match for the lemma statement
    CondPtr cf = freshen(c, *r);
    CondPtr sh = shift(*r, cf, {});
    bool whole = satisfies(G, cf, cfg.sat).value;
    for (auto& m : ms) {
      made++;
      rep.cases++;
      bool at = satisfies_at(m.match, m.interp, sh, cfg.sat);
      if (at != whole) {
        std::ostringstream os;
        os << "Shift lemma violated for rule " << r->name << " with condition "
           << to_string(cf);
        rep.violations.push_back(DiffViolation{os.str(), G});
      }
      if (made >= count) break;
    }
  }
  return rep;
}

DiffReport lemma_suite_right(const std::vector<RulePtr>& pool, uint64_t seed, int count,
                             const OracleConfig& cfg) {
  DiffReport rep;
  CondGen gen{std::mt19937_64(seed)};
  auto labels = small_pool();
  GraphPtr empty = empty_graph(GraphMode::Symbolic);
  int made = 0;
  while (made < count) {
    const RulePtr& r = pool[gen.pick(pool.size())];
    CondPtr c = gen.gen(empty, {}, 3);
    GraphPtr G = gen.random_graph(labels, 3, 1);
    auto ms = find_matches(*r, G);
    if (ms.empty()) continue;
    CondPtr left = shift(*r, freshen(c, *r), {});
    CondPtr rg = right(*r, left, {});
    for (auto& m : ms) {
      made++;
      rep.cases++;
      auto d = apply_rule(*r, G, m);
      bool at_g = satisfies_at(m.match, m.interp, left, cfg.sat);
      bool at_h = satisfies_at(d.comatch, m.interp, rg, cfg.sat);
      if (at_g != at_h) {
        std::ostringstream os;
        os << "Right lemma violated for rule " << r->name << " with condition "
           << to_string(left);
        rep.violations.push_back(DiffViolation{os.str(), G});
      }
      if (made >= count) break;
    }
  }
  return rep;
}

}  // namespace gpil
