#include "pluricas/reduction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "pluricas/calculus.hpp"

namespace pluricas {

EquationSystem::EquationSystem(ContextPtr ctx, std::vector<Rule> rules, std::size_t step_budget)
    : ctx_(std::move(ctx)), rules_(std::move(rules)), budget_(step_budget) {
  if (!ctx_)
    throw ContextError("equation system needs a context");
  for (const auto& rule : rules_) {
    check_same_context(ctx_, rule.rhs.context());
    if (rule.lead.dep < 0 || static_cast<std::size_t>(rule.lead.dep) >= ctx_->num_dependent() ||
        rule.lead.idx.size() != ctx_->num_independent())
      throw ContextError("rule lead does not match the context");
    for (const auto& v : jet_variables(rule.rhs, true))
      if (v.dep == rule.lead.dep && rule.lead.idx.divides(v.idx))
        throw SystemError("rule right-hand side contains its lead or a derivative of it");
  }
}

EquationSystem EquationSystem::with_priority(const std::vector<std::size_t>& order) const {
  if (order.size() != rules_.size())
    throw ArityError("priority order must list every rule exactly once");
  std::vector<Rule> reordered;
  reordered.reserve(order.size());
  std::vector<bool> used(rules_.size(), false);
  for (std::size_t p : order) {
    if (p >= rules_.size() || used[p])
      throw ArityError("priority order must list every rule exactly once");
    used[p] = true;
    reordered.push_back(rules_[p]);
  }
  return EquationSystem(ctx_, std::move(reordered), budget_);
}

EquationSystem EquationSystem::combined(const EquationSystem& other) const {
  if (!ctx_)
    return other;
  if (!other.ctx_)
    return *this;
  check_same_context(ctx_, other.ctx_);
  std::vector<Rule> rules = rules_;
  rules.insert(rules.end(), other.rules_.begin(), other.rules_.end());
  return EquationSystem(ctx_, std::move(rules), std::max(budget_, other.budget_));
}

const Rule* EquationSystem::rule_for(const JetVar& v) const {
  for (const auto& rule : rules_)
    if (rule.lead.dep == v.dep && rule.lead.idx.divides(v.idx))
      return &rule;
  return nullptr;
}

namespace {

constexpr std::size_t kMaxDepth = 4096;

class Reducer {
public:
  explicit Reducer(const EquationSystem& system) : system_(system) {}

  Expr reduce(const Expr& f) {
    Expr::TermMap out;
    Expr result = Expr::constant(f.context() ? f.context() : system_.context(), 0);
    for (const auto& [factors, coeff] : f.terms()) {
      const bool any_reducible = std::any_of(factors.begin(), factors.end(), [&](const Factor& fac) {
        return fac.atom.kind == AtomKind::Jet && system_.is_reducible(fac.atom.var);
      });
      if (!any_reducible) {
        Expr::accumulate(out, coeff, factors);
        continue;
      }
      Expr term = Expr::constant(result.context(), coeff);
      FactorList kept;
      for (const auto& fac : factors) {
        if (fac.atom.kind == AtomKind::Jet && system_.is_reducible(fac.atom.var))
          term *= normal_form(fac.atom.var).pow(fac.power);
        else
          kept.push_back(fac);
      }
      result += term * Expr::monomial(result.context(), 1, kept);
    }
    return result + Expr::from_terms(result.context(), std::move(out));
  }

private:
  const Expr& normal_form(const JetVar& v) {
    if (auto it = memo_.find(v); it != memo_.end())
      return it->second;
    const Rule* rule = system_.rule_for(v);
    if (!rule)
      return memo_.emplace(v, Expr::jet(system_.context(), v)).first->second;
    if (++steps_ > system_.step_budget())
      throw ReductionDivergence("reduction exceeded its step budget of " +
                                std::to_string(system_.step_budget()) + " rewrites");
    if (!active_.insert(v).second)
      throw ReductionDivergence("rewrite cycle detected");
    if (active_.size() > kMaxDepth)
      throw ReductionDivergence("reduction nesting exceeded " + std::to_string(kMaxDepth));
    Expr rewritten = reduce(total_derivative(rule->rhs, v.idx - rule->lead.idx));
    active_.erase(v);
    return memo_.emplace(v, std::move(rewritten)).first->second;
  }

  const EquationSystem& system_;
  std::map<JetVar, Expr> memo_;
  std::set<JetVar> active_;
  std::size_t steps_ = 0;
};

} // namespace

Expr reduce(const Expr& f, const EquationSystem& system) {
  check_same_context(f.context(), system.context());
  if (system.empty())
    return f;
  return Reducer(system).reduce(f);
}

bool is_consequence(const Expr& f, const EquationSystem& system) {
  return reduce(f, system).is_zero();
}

bool ConfluenceReport::all_agree() const {
  return std::all_of(samples.begin(), samples.end(),
                     [](const ConfluenceSample& s) { return s.agrees; });
}

ConfluenceReport check_confluence_samples(const EquationSystem& system,
                                          const std::vector<Expr>& samples) {
  std::vector<std::size_t> order(system.rules().size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EquationSystem> variants;
  do {
    variants.push_back(system.with_priority(order));
  } while (std::next_permutation(order.begin(), order.end()));

  ConfluenceReport report;
  for (const auto& sample : samples) {
    ConfluenceSample entry{sample, {}, true};
    for (const auto& variant : variants) {
      entry.normal_forms.push_back(reduce(sample, variant));
      if (!(entry.normal_forms.back() == entry.normal_forms.front()))
        entry.agrees = false;
    }
    report.samples.push_back(std::move(entry));
  }
  return report;
}

} // namespace pluricas
