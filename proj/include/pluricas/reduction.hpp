#pragma once

// Systems of differential equations as oriented rewrite rules u^a_J -> rhs.
// A jet variable u^a_I is reducible iff I >= J componentwise for some rule
// with lead (a, J); it rewrites to D_{I-J} rhs. Reducing an expression
// substitutes normal forms for every reducible variable, which computes the
// remainder of f modulo the differential ideal of the rules.

#include <cstddef>
#include <string>
#include <vector>

#include "pluricas/jet.hpp"

namespace pluricas {

struct Rule {
  JetVar lead;
  Expr rhs;
};

class EquationSystem {
public:
  static constexpr std::size_t kDefaultStepBudget = 1'000'000;

  EquationSystem() = default;
  /// Rules are listed in priority order (first = highest). Throws SystemError
  /// if some rhs contains its lead or a derivative of it.
  EquationSystem(ContextPtr ctx, std::vector<Rule> rules,
                 std::size_t step_budget = kDefaultStepBudget);

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t step_budget() const noexcept { return budget_; }
  bool empty() const noexcept { return rules_.empty(); }

  /// Same rules, reordered: `order[p]` is the index of the rule taking priority p.
  EquationSystem with_priority(const std::vector<std::size_t>& order) const;
  /// Rules of *this followed by the rules of other.
  EquationSystem combined(const EquationSystem& other) const;

  /// Highest-priority rule whose lead divides v, or nullptr.
  const Rule* rule_for(const JetVar& v) const;
  bool is_reducible(const JetVar& v) const { return rule_for(v) != nullptr; }

private:
  ContextPtr ctx_;
  std::vector<Rule> rules_;
  std::size_t budget_ = kDefaultStepBudget;
};

/// Normal form of f modulo S. Throws ReductionDivergence when the step
/// budget is exhausted or a rewrite cycle is detected.
Expr reduce(const Expr& f, const EquationSystem& system);

/// True iff f reduces to zero modulo S.
bool is_consequence(const Expr& f, const EquationSystem& system);

struct ConfluenceSample {
  Expr sample;
  /// One normal form per rule-priority permutation, in lexicographic permutation order.
  std::vector<Expr> normal_forms;
  bool agrees = true;
};

struct ConfluenceReport {
  std::vector<ConfluenceSample> samples;
  bool all_agree() const;
};

/// Reduces every sample under every permutation of rule priorities.
ConfluenceReport check_confluence_samples(const EquationSystem& system,
                                          const std::vector<Expr>& samples);

} // namespace pluricas
