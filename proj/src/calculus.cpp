#include "pluricas/calculus.hpp"

#include <map>

namespace pluricas {

namespace {

void check_direction(const Expr& f, std::size_t direction) {
  if (f.context() && direction >= f.context()->num_independent())
    throw ContextError("independent-variable index " + std::to_string(direction) +
                       " out of range");
}

void check_second_order(const Expr& L) {
  for (const auto& v : jet_variables(L, false))
    if (v.idx.order() >= 3)
      throw OrderOverflow("coefficient depends on a jet of order >= 3; only second-order "
                          "2-forms are supported");
}

JetVar second(std::size_t n, int dep, std::size_t a, std::size_t b) {
  MultiIndex m = MultiIndex::unit(n, a).shifted(b);
  return JetVar{dep, std::move(m)};
}

JetVar first(std::size_t n, int dep, std::size_t a) {
  return JetVar{dep, MultiIndex::unit(n, a)};
}

std::size_t width(const Expr& L) {
  if (!L.context())
    throw ContextError("expression is not bound to a context");
  return L.context()->num_independent();
}

} // namespace

Expr total_derivative(const Expr& f, std::size_t direction) {
  check_direction(f, direction);
  Expr::TermMap out;
  for (const auto& [factors, coeff] : f.terms()) {
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const Factor& fac = factors[k];
      const JetVar& v = fac.atom.var;
      if (direction >= v.idx.size())
        throw ContextError("independent-variable index out of range");
      FactorList rest;
      rest.reserve(factors.size() + 1);
      for (std::size_t m = 0; m < factors.size(); ++m) {
        if (m != k)
          rest.push_back(factors[m]);
        else if (fac.power > 1)
          rest.push_back({fac.atom, fac.power - 1});
      }
      Rational c = coeff * fac.power;
      FactorList inner;
      switch (fac.atom.kind) {
      case AtomKind::Jet:
        inner.push_back({Atom{AtomKind::Jet, JetVar{v.dep, v.idx.shifted(direction)}}, 1});
        break;
      case AtomKind::Sin:
        inner.push_back({Atom{AtomKind::Jet, JetVar{v.dep, v.idx.shifted(direction)}}, 1});
        inner.push_back({Atom{AtomKind::Cos, v}, 1});
        break;
      case AtomKind::Cos:
        inner.push_back({Atom{AtomKind::Jet, JetVar{v.dep, v.idx.shifted(direction)}}, 1});
        inner.push_back({Atom{AtomKind::Sin, v}, 1});
        c = -c;
        break;
      }
      Expr::accumulate(out, c, merge_factors(rest, inner));
    }
  }
  return Expr::from_terms(f.context(), std::move(out));
}

Expr total_derivative(const Expr& f, const MultiIndex& index) {
  Expr g = f;
  for (std::size_t j = 0; j < index.size(); ++j)
    for (int n = 0; n < index[j]; ++n)
      g = total_derivative(g, j);
  return g;
}

EvolutionaryField::EvolutionaryField(ContextPtr ctx, std::vector<Expr> characteristics)
    : ctx_(std::move(ctx)), chars_(std::move(characteristics)) {
  if (!ctx_)
    throw ContextError("evolutionary field needs a context");
  if (chars_.size() != ctx_->num_dependent())
    throw ArityError("evolutionary field needs " + std::to_string(ctx_->num_dependent()) +
                     " characteristics, got " + std::to_string(chars_.size()));
  for (const auto& c : chars_)
    check_same_context(ctx_, c.context());
}

EvolutionaryField EvolutionaryField::zero(ContextPtr ctx) {
  std::vector<Expr> chars(ctx->num_dependent(), Expr::constant(ctx, 0));
  return EvolutionaryField(ctx, std::move(chars));
}

Expr prolong_apply(const EvolutionaryField& field, const Expr& f) {
  check_same_context(field.context(), f.context());
  Expr result = Expr::constant(field.context(), 0);
  std::map<JetVar, Expr> prolonged;
  auto prolong = [&](const JetVar& v) -> const Expr& {
    auto it = prolonged.find(v);
    if (it == prolonged.end())
      it = prolonged.emplace(v, total_derivative(field[v.dep], v.idx)).first;
    return it->second;
  };
  for (const auto& v : jet_variables(f, true)) {
    Expr df = partial(f, v);
    if (df.is_zero())
      continue;
    const Expr& phi = prolong(v);
    if (!phi.is_zero())
      result += phi * df;
  }
  return result;
}

Expr divergence(const ContextPtr& ctx, std::span<const Expr> components) {
  if (!ctx)
    throw ContextError("divergence needs a context");
  if (components.size() != ctx->num_independent())
    throw ArityError("divergence needs " + std::to_string(ctx->num_independent()) +
                     " components, got " + std::to_string(components.size()));
  Expr result = Expr::constant(ctx, 0);
  for (std::size_t i = 0; i < components.size(); ++i) {
    check_same_context(ctx, components[i].context());
    result += total_derivative(components[i], i);
  }
  return result;
}

Expr euler_operator(const Expr& f, int dep) {
  if (f.context() && (dep < 0 || static_cast<std::size_t>(dep) >= f.context()->num_dependent()))
    throw ContextError("dependent-variable index out of range");
  Expr result = Expr::constant(f.context(), 0);
  std::set<JetVar> vars;
  for (const auto& v : jet_variables(f, true))
    if (v.dep == dep)
      vars.insert(v);
  for (const auto& v : vars) {
    Expr term = total_derivative(partial(f, v), v.idx);
    if (v.idx.order() % 2 == 1)
      result -= term;
    else
      result += term;
  }
  return result;
}

Expr restricted_delta_u(const Expr& L, std::size_t i, std::size_t j, int dep) {
  check_second_order(L);
  if (L.is_zero())
    return L;
  const std::size_t n = width(L);
  if (i >= n || j >= n)
    throw ContextError("independent-variable index out of range");
  Expr result = partial(L, JetVar{dep, MultiIndex(n)});
  result -= total_derivative(partial(L, first(n, dep, i)), i);
  result -= total_derivative(partial(L, first(n, dep, j)), j);
  result += total_derivative(partial(L, second(n, dep, i, i)), MultiIndex::unit(n, i).shifted(i));
  result += total_derivative(partial(L, second(n, dep, i, j)), MultiIndex::unit(n, i).shifted(j));
  result += total_derivative(partial(L, second(n, dep, j, j)), MultiIndex::unit(n, j).shifted(j));
  return result;
}

Expr restricted_delta_u_k(const Expr& L, std::size_t k, std::size_t i, std::size_t j, int dep) {
  check_second_order(L);
  if (L.is_zero())
    return L;
  const std::size_t n = width(L);
  if (i >= n || j >= n || k >= n)
    throw ContextError("independent-variable index out of range");
  Expr result = partial(L, first(n, dep, k));
  result -= total_derivative(partial(L, second(n, dep, i, k)), i);
  result -= total_derivative(partial(L, second(n, dep, j, k)), j);
  return result;
}

Expr restricted_delta_u_km(const Expr& L, std::size_t k, std::size_t m, int dep) {
  check_second_order(L);
  if (L.is_zero())
    return L;
  const std::size_t n = width(L);
  if (k >= n || m >= n)
    throw ContextError("independent-variable index out of range");
  return partial(L, second(n, dep, k, m));
}

} // namespace pluricas
