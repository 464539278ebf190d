#pragma once

#include <vector>

#include "econd.hpp"
#include "rules.hpp"

namespace gpil {

// Deliberate corruption switches for differential mutation testing (the
// difftest harness must be able to detect a broken transformation). Always
// None in normal use.
enum class Corrupt {
  None,
  AppDropDang,                // app omits the dangling conjunct
  AppDropRule,                // App drops the last rule's disjunct
  WpostDropInverseDang,       // wpost omits Dang(r^-1)
  ShiftIdentityQuotientOnly,  // Shift keeps only the identity overlap
  RightNoComplementTrue,      // Right turns missing complements into true
};

struct TransformOptions {
  Corrupt corrupt = Corrupt::None;
};

// Replaces every non-variable label item of the E-constraint c by a fresh
// variable bound at the same scope and equated by a constraint; renames all
// bound variables apart from vars(r) and each other. Satisfaction-preserving.
CondPtr freshen(const CondPtr& c, const RuleSchema& r);

// Conjunction forbidding every context in which a match would violate the
// dangling condition: extensions of L by a loop, an edge between distinct
// nodes, or a fresh-variable node with one incident edge, kept when the
// added edge touches a deleted node. True when nothing is deleted.
CondPtr dang(const RuleSchema& r);

// app(r) = ex vars(L). ex L. Dang(r); App of a set is the disjunction,
// false for the empty set.
CondPtr app_rule(const RuleSchema& r, const TransformOptions& opts = {});
CondPtr app(const std::vector<RulePtr>& rules, const TransformOptions& opts = {});

// E-constraint (freshened w.r.t. r) to condition over lhs(r), by the
// overlap construction. Throws if c is not freshened.
CondPtr shift(const RuleSchema& r, const CondPtr& c, const TransformOptions& opts = {});

// Condition over lhs(r) to condition over rhs(r) via derived rules;
// morphisms without a natural pushout complement yield false.
CondPtr right(const RuleSchema& r, const CondPtr& c, const TransformOptions& opts = {});

// wpost(r, c) = ex vars(L). ex R. Dang(r^-1) and Right(r, Shift(r, freshen(c))).
// WPost of a set is the disjunction, false for the empty set.
CondPtr wpost_rule(const RuleSchema& r, const CondPtr& c,
                   const TransformOptions& opts = {});
CondPtr wpost(const std::vector<RulePtr>& rules, const CondPtr& c,
              const TransformOptions& opts = {});

}  // namespace gpil
