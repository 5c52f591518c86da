#pragma once

// Seeded random inputs for the property suites.

#include <algorithm>
#include <random>
#include <vector>

#include "pluricas/calculus.hpp"
#include "pluricas/forms.hpp"

namespace gen {

using namespace pluricas;

struct Bounds {
  int max_terms = 4;
  int max_factors = 3;
  int max_order = 2;
  int max_power = 2;
  bool trig = true;
  int coeff_range = 5;
};

class Random {
public:
  explicit Random(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int percent) { return uniform(1, 100) <= percent; }
  std::mt19937& engine() { return rng_; }

  Rational coefficient(int range) {
    int num = 0;
    while (num == 0)
      num = uniform(-range, range);
    Rational q(num, uniform(1, 3));
    q.canonicalize();
    return q;
  }

  MultiIndex index(std::size_t n, int max_order) {
    std::vector<int> counts(n, 0);
    const int order = uniform(0, max_order);
    for (int k = 0; k < order; ++k)
      ++counts[static_cast<std::size_t>(uniform(0, static_cast<int>(n) - 1))];
    return MultiIndex(std::move(counts));
  }

  JetVar jet_var(const Context& ctx, int max_order) {
    return JetVar{uniform(0, static_cast<int>(ctx.num_dependent()) - 1),
                  index(ctx.num_independent(), max_order)};
  }

  /// One monomial as a raw tree: coefficient times atoms raised to small powers.
  RawExpr raw_monomial(const Context& ctx, const Bounds& b) {
    std::vector<RawExpr> factors{RawExpr::num(coefficient(b.coeff_range))};
    const int count = uniform(0, b.max_factors);
    for (int k = 0; k < count; ++k) {
      RawExpr atom;
      const int dep = uniform(0, static_cast<int>(ctx.num_dependent()) - 1);
      if (b.trig && chance(25))
        atom = chance(50) ? RawExpr::sin(dep) : RawExpr::cos(dep);
      else
        atom = RawExpr::jet(jet_var(ctx, b.max_order));
      const int power = uniform(1, b.max_power);
      factors.push_back(power == 1 ? atom : RawExpr::power(atom, power));
    }
    return RawExpr::product(std::move(factors));
  }

  std::vector<RawExpr> raw_terms(const Context& ctx, const Bounds& b) {
    std::vector<RawExpr> terms;
    const int n = uniform(1, b.max_terms);
    for (int k = 0; k < n; ++k)
      terms.push_back(raw_monomial(ctx, b));
    return terms;
  }

  Expr expr(const ContextPtr& ctx, const Bounds& b = {}) {
    return normalize(RawExpr::sum(raw_terms(*ctx, b)), ctx);
  }

  EvolutionaryField field(const ContextPtr& ctx, const Bounds& b = {}) {
    std::vector<Expr> chars;
    for (std::size_t a = 0; a < ctx->num_dependent(); ++a)
      chars.push_back(expr(ctx, b));
    return EvolutionaryField(ctx, std::move(chars));
  }

  std::vector<Expr> witnesses(const ContextPtr& ctx, const Bounds& b = {}) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < ctx->num_independent(); ++i)
      out.push_back(chance(20) ? Expr::constant(ctx, 0) : expr(ctx, b));
    return out;
  }

  /// Witnesses inside a witness-search ansatz: jet monomials of order <= max_order
  /// and degree <= max_degree, each optionally times one sin or cos.
  std::vector<Expr> ansatz_witnesses(const ContextPtr& ctx, int max_order, int max_degree, bool trig) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < ctx->num_independent(); ++i) {
      std::vector<RawExpr> terms{RawExpr::num(0)};
      const int count = uniform(0, 3);
      for (int t = 0; t < count; ++t) {
        std::vector<RawExpr> factors{RawExpr::num(coefficient(5))};
        const int degree = uniform(0, max_degree);
        for (int k = 0; k < degree; ++k)
          factors.push_back(RawExpr::jet(jet_var(*ctx, max_order)));
        if (trig && chance(30)) {
          const int dep = uniform(0, static_cast<int>(ctx->num_dependent()) - 1);
          factors.push_back(chance(50) ? RawExpr::sin(dep) : RawExpr::cos(dep));
        }
        terms.push_back(RawExpr::product(std::move(factors)));
      }
      out.push_back(normalize(RawExpr::sum(std::move(terms)), ctx));
    }
    return out;
  }

  LagrangianForm form(const ContextPtr& ctx, std::size_t degree, const Bounds& b = {}) {
    LagrangianForm f(ctx, degree);
    for (const auto& t : increasing_tuples(ctx->num_independent(), degree))
      if (chance(80))
        f.set(t, expr(ctx, b));
    return f;
  }

  /// Same multiset of terms, shuffled and regrouped into a random binary tree.
  RawExpr reassociate(std::vector<RawExpr> terms) {
    for (auto& t : terms)
      if (t.kind == RawExpr::Kind::Product)
        std::shuffle(t.children.begin(), t.children.end(), rng_);
    std::shuffle(terms.begin(), terms.end(), rng_);
    while (terms.size() > 1) {
      const std::size_t at = static_cast<std::size_t>(uniform(0, static_cast<int>(terms.size()) - 2));
      RawExpr merged = RawExpr::sum({terms[at], terms[at + 1]});
      terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(at), terms.begin() + static_cast<std::ptrdiff_t>(at) + 2);
      terms.insert(terms.begin() + static_cast<std::ptrdiff_t>(at), std::move(merged));
    }
    return terms.front();
  }

private:
  std::mt19937 rng_;
};

} // namespace gen
