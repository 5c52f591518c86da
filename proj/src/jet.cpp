#include "pluricas/jet.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace pluricas {

namespace {

bool is_reserved(const std::string& name) { return name == "sin" || name == "cos"; }

bool valid_name(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front())))
    return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

} // namespace

// ---------------------------------------------------------------- Context

Context::Context(std::vector<std::string> independent, std::vector<std::string> dependent)
    : indep_(std::move(independent)), dep_(std::move(dependent)) {
  if (indep_.empty())
    throw ContextError("context needs at least one independent variable");
  if (dep_.empty())
    throw ContextError("context needs at least one dependent variable");
  std::unordered_set<std::string> seen;
  for (const auto* list : {&indep_, &dep_}) {
    for (const auto& name : *list) {
      if (!valid_name(name) || is_reserved(name))
        throw ContextError("invalid variable name '" + name + "'");
      if (!seen.insert(name).second)
        throw ContextError("duplicate variable name '" + name + "'");
    }
  }
}

int Context::independent_index(const std::string& name) const {
  auto it = std::find(indep_.begin(), indep_.end(), name);
  return it == indep_.end() ? -1 : static_cast<int>(it - indep_.begin());
}

int Context::dependent_index(const std::string& name) const {
  auto it = std::find(dep_.begin(), dep_.end(), name);
  return it == dep_.end() ? -1 : static_cast<int>(it - dep_.begin());
}

bool Context::single_letter_independents() const noexcept {
  return std::all_of(indep_.begin(), indep_.end(),
                     [](const std::string& n) { return n.size() == 1; });
}

ContextPtr make_context(std::vector<std::string> independent,
                        std::vector<std::string> dependent) {
  return std::make_shared<const Context>(std::move(independent), std::move(dependent));
}

void check_same_context(const ContextPtr& a, const ContextPtr& b) {
  if (!a || !b || a == b)
    return;
  if (!(*a == *b))
    throw ContextError("operands belong to different contexts");
}

// ------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int c : counts_)
    if (c < 0)
      throw std::invalid_argument("multi-index counts must be non-negative");
}

MultiIndex MultiIndex::unit(std::size_t size, std::size_t direction) {
  MultiIndex m(size);
  m.counts_.at(direction) = 1;
  return m;
}

int MultiIndex::order() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (size() != other.size())
    return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (counts_[i] > other.counts_[i])
      return false;
  return true;
}

MultiIndex MultiIndex::shifted(std::size_t direction, int by) const {
  MultiIndex m = *this;
  m.counts_.at(direction) += by;
  if (m.counts_[direction] < 0)
    throw std::invalid_argument("multi-index shift below zero");
  return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex m = *this;
  for (std::size_t i = 0; i < size(); ++i)
    m.counts_[i] += other.counts_.at(i);
  return m;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!other.divides(*this))
    throw std::invalid_argument("multi-index subtraction below zero");
  MultiIndex m = *this;
  for (std::size_t i = 0; i < size(); ++i)
    m.counts_[i] -= other.counts_[i];
  return m;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = order() <=> other.order(); c != 0)
    return c;
  return counts_ <=> other.counts_;
}

std::strong_ordering JetVar::operator<=>(const JetVar& other) const {
  if (auto c = dep <=> other.dep; c != 0)
    return c;
  return idx <=> other.idx;
}

std::strong_ordering Atom::operator<=>(const Atom& other) const {
  if (auto c = static_cast<int>(kind) <=> static_cast<int>(other.kind); c != 0)
    return c;
  return var <=> other.var;
}

std::strong_ordering Factor::operator<=>(const Factor& other) const {
  if (auto c = atom <=> other.atom; c != 0)
    return c;
  return power <=> other.power;
}

unsigned jet_degree(const FactorList& factors) {
  unsigned d = 0;
  for (const auto& f : factors)
    if (f.atom.kind == AtomKind::Jet)
      d += f.power;
  return d;
}

FactorList merge_factors(const FactorList& a, const FactorList& b) {
  FactorList out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->atom == j->atom) {
      out.push_back({i->atom, i->power + j->power});
      ++i;
      ++j;
    } else if (i->atom < j->atom) {
      out.push_back(*i++);
    } else {
      out.push_back(*j++);
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

// ------------------------------------------------------------------- Expr

Expr::Expr(const Rational& value) {
  if (value != 0)
    terms_.emplace(FactorList{}, value);
}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr Expr::constant(ContextPtr ctx, const Rational& value) {
  Expr e(value);
  e.ctx_ = std::move(ctx);
  return e;
}

Expr Expr::jet(ContextPtr ctx, JetVar var) {
  if (ctx) {
    if (var.dep < 0 || static_cast<std::size_t>(var.dep) >= ctx->num_dependent())
      throw ContextError("dependent-variable index out of range");
    if (var.idx.size() != ctx->num_independent())
      throw ContextError("multi-index length does not match the context");
  }
  TermMap t;
  t.emplace(FactorList{{Atom{AtomKind::Jet, std::move(var)}, 1}}, Rational(1));
  return Expr(std::move(ctx), std::move(t));
}

Expr Expr::jet(ContextPtr ctx, int dep, std::vector<int> counts) {
  return jet(std::move(ctx), JetVar{dep, MultiIndex(std::move(counts))});
}

Expr Expr::sin(ContextPtr ctx, int dep) {
  if (!ctx)
    throw ContextError("trigonometric atoms need a context");
  if (dep < 0 || static_cast<std::size_t>(dep) >= ctx->num_dependent())
    throw ContextError("dependent-variable index out of range");
  TermMap t;
  t.emplace(FactorList{{Atom{AtomKind::Sin, JetVar{dep, MultiIndex(ctx->num_independent())}}, 1}},
            Rational(1));
  return Expr(std::move(ctx), std::move(t));
}

Expr Expr::cos(ContextPtr ctx, int dep) {
  if (!ctx)
    throw ContextError("trigonometric atoms need a context");
  if (dep < 0 || static_cast<std::size_t>(dep) >= ctx->num_dependent())
    throw ContextError("dependent-variable index out of range");
  TermMap t;
  t.emplace(FactorList{{Atom{AtomKind::Cos, JetVar{dep, MultiIndex(ctx->num_independent())}}, 1}},
            Rational(1));
  return Expr(std::move(ctx), std::move(t));
}

Expr Expr::monomial(ContextPtr ctx, const Rational& coeff, FactorList factors) {
  std::sort(factors.begin(), factors.end());
  FactorList merged;
  for (const auto& f : factors) {
    if (f.power == 0)
      continue;
    if (!merged.empty() && merged.back().atom == f.atom)
      merged.back().power += f.power;
    else
      merged.push_back(f);
  }
  Expr e;
  e.ctx_ = std::move(ctx);
  accumulate(e.terms_, coeff, merged);
  return e;
}

void Expr::accumulate(TermMap& terms, const Rational& coeff, const FactorList& factors) {
  if (coeff == 0)
    return;
  auto cos_it = std::find_if(factors.begin(), factors.end(), [](const Factor& f) {
    return f.atom.kind == AtomKind::Cos && f.power >= 2;
  });
  if (cos_it == factors.end()) {
    auto [it, inserted] = terms.try_emplace(factors, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0)
        terms.erase(it);
    }
    return;
  }
  // cos^p = cos^(p mod 2) * (1 - sin^2)^(p div 2)
  const unsigned half = cos_it->power / 2;
  const Atom sin_atom{AtomKind::Sin, cos_it->atom.var};
  FactorList base;
  for (const auto& f : factors) {
    if (&f == &*cos_it) {
      if (f.power % 2 == 1)
        base.push_back({f.atom, 1});
    } else {
      base.push_back(f);
    }
  }
  for (unsigned r = 0; r <= half; ++r) {
    Rational c = coeff * binomial(half, r);
    if (r % 2 == 1)
      c = -c;
    FactorList term = r == 0 ? base : merge_factors(base, FactorList{{sin_atom, 2 * r}});
    accumulate(terms, c, term);
  }
}

Expr Expr::from_terms(ContextPtr ctx, TermMap terms) {
  return Expr(std::move(ctx), std::move(terms));
}

bool Expr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Expr::coefficient(const FactorList& factors) const {
  auto it = terms_.find(factors);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Expr::adopt_context(const Expr& other) {
  check_same_context(ctx_, other.ctx_);
  if (!ctx_)
    ctx_ = other.ctx_;
}

Expr Expr::operator-() const {
  Expr e = *this;
  for (auto& [f, c] : e.terms_)
    c = -c;
  return e;
}

Expr& Expr::operator+=(const Expr& other) {
  adopt_context(other);
  for (const auto& [f, c] : other.terms_)
    accumulate(terms_, c, f);
  return *this;
}

Expr& Expr::operator-=(const Expr& other) {
  adopt_context(other);
  for (const auto& [f, c] : other.terms_)
    accumulate(terms_, -c, f);
  return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
  check_same_context(a.ctx_, b.ctx_);
  Expr out;
  out.ctx_ = a.ctx_ ? a.ctx_ : b.ctx_;
  for (const auto& [fa, ca] : a.terms_)
    for (const auto& [fb, cb] : b.terms_)
      Expr::accumulate(out.terms_, ca * cb, merge_factors(fa, fb));
  return out;
}

Expr& Expr::operator*=(const Expr& other) { return *this = *this * other; }

Expr Expr::pow(unsigned exponent) const {
  Expr result = Expr::constant(ctx_, 1);
  Expr base = *this;
  while (exponent > 0) {
    if (exponent & 1u)
      result *= base;
    exponent >>= 1u;
    if (exponent > 0)
      base *= base;
  }
  return result;
}

Expr Expr::scaled(const Rational& factor) const {
  if (factor == 0)
    return Expr::constant(ctx_, 0);
  Expr e = *this;
  for (auto& [f, c] : e.terms_)
    c *= factor;
  return e;
}

// ---------------------------------------------------------------- RawExpr

RawExpr RawExpr::num(const Rational& q) {
  RawExpr r;
  r.kind = Kind::Number;
  r.number = q;
  return r;
}

RawExpr RawExpr::jet(JetVar v) {
  RawExpr r;
  r.kind = Kind::Jet;
  r.var = std::move(v);
  return r;
}

RawExpr RawExpr::sin(int dep) {
  RawExpr r;
  r.kind = Kind::Sin;
  r.var.dep = dep;
  return r;
}

RawExpr RawExpr::cos(int dep) {
  RawExpr r;
  r.kind = Kind::Cos;
  r.var.dep = dep;
  return r;
}

RawExpr RawExpr::sum(std::vector<RawExpr> terms) {
  RawExpr r;
  r.kind = Kind::Sum;
  r.children = std::move(terms);
  return r;
}

RawExpr RawExpr::product(std::vector<RawExpr> factors) {
  RawExpr r;
  r.kind = Kind::Product;
  r.children = std::move(factors);
  return r;
}

RawExpr RawExpr::neg(RawExpr operand) {
  RawExpr r;
  r.kind = Kind::Neg;
  r.children.push_back(std::move(operand));
  return r;
}

RawExpr RawExpr::power(RawExpr base, long exponent) {
  RawExpr r;
  r.kind = Kind::Pow;
  r.exponent = exponent;
  r.children.push_back(std::move(base));
  return r;
}

RawExpr RawExpr::embed(Expr e) {
  RawExpr r;
  r.kind = Kind::Value;
  r.value = std::make_shared<const Expr>(std::move(e));
  return r;
}

Expr normalize(const RawExpr& raw, const ContextPtr& ctx) {
  switch (raw.kind) {
  case RawExpr::Kind::Number:
    return Expr::constant(ctx, raw.number);
  case RawExpr::Kind::Jet:
    return Expr::jet(ctx, raw.var);
  case RawExpr::Kind::Sin:
    return Expr::sin(ctx, raw.var.dep);
  case RawExpr::Kind::Cos:
    return Expr::cos(ctx, raw.var.dep);
  case RawExpr::Kind::Sum: {
    Expr acc = Expr::constant(ctx, 0);
    for (const auto& c : raw.children)
      acc += normalize(c, ctx);
    return acc;
  }
  case RawExpr::Kind::Product: {
    Expr acc = Expr::constant(ctx, 1);
    for (const auto& c : raw.children)
      acc *= normalize(c, ctx);
    return acc;
  }
  case RawExpr::Kind::Neg:
    return -normalize(raw.children.at(0), ctx);
  case RawExpr::Kind::Pow:
    if (raw.exponent < 0)
      throw UnsupportedOperation("negative exponents are outside the expression class");
    return normalize(raw.children.at(0), ctx).pow(static_cast<unsigned>(raw.exponent));
  case RawExpr::Kind::Value: {
    Expr e = *raw.value;
    check_same_context(e.context(), ctx);
    return Expr::constant(ctx, 0) + e;
  }
  }
  throw std::logic_error("unknown raw expression kind");
}

// ---------------------------------------------------------------- partial

Expr partial(const Expr& f, const JetVar& v) {
  Expr::TermMap out;
  const bool order_zero = v.idx.is_zero();
  for (const auto& [factors, coeff] : f.terms()) {
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const Factor& fac = factors[k];
      const bool jet_hit = fac.atom.kind == AtomKind::Jet && fac.atom.var == v;
      const bool trig_hit =
          order_zero && fac.atom.kind != AtomKind::Jet && fac.atom.var.dep == v.dep;
      if (!jet_hit && !trig_hit)
        continue;
      FactorList rest;
      rest.reserve(factors.size() + 1);
      for (std::size_t m = 0; m < factors.size(); ++m)
        if (m != k)
          rest.push_back(factors[m]);
      Rational c = coeff * fac.power;
      FactorList lowered;
      if (fac.power > 1)
        lowered.push_back({fac.atom, fac.power - 1});
      FactorList inner;
      if (fac.atom.kind == AtomKind::Sin) {
        inner.push_back({Atom{AtomKind::Cos, fac.atom.var}, 1});
      } else if (fac.atom.kind == AtomKind::Cos) {
        inner.push_back({Atom{AtomKind::Sin, fac.atom.var}, 1});
        c = -c;
      }
      Expr::accumulate(out, c, merge_factors(merge_factors(rest, lowered), inner));
    }
  }
  return Expr::from_terms(f.context(), std::move(out));
}

// -------------------------------------------------------------- max_order

OrderInfo max_order(const Expr& f, const Context& ctx) {
  OrderInfo info;
  info.max_index.assign(ctx.num_dependent(), MultiIndex(ctx.num_independent()));
  info.present.assign(ctx.num_dependent(), false);
  for (const auto& [factors, coeff] : f.terms()) {
    for (const auto& fac : factors) {
      const JetVar& v = fac.atom.var;
      if (v.dep < 0 || static_cast<std::size_t>(v.dep) >= ctx.num_dependent() ||
          v.idx.size() != ctx.num_independent())
        throw ContextError("expression does not match the context");
      info.present[v.dep] = true;
      if (fac.atom.kind != AtomKind::Jet)
        continue;
      std::vector<int> m = info.max_index[v.dep].counts();
      for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = std::max(m[i], v.idx[i]);
      info.max_index[v.dep] = MultiIndex(std::move(m));
      info.max_total = std::max(info.max_total, v.idx.order());
    }
  }
  return info;
}

std::set<JetVar> jet_variables(const Expr& f, bool with_trig_bases) {
  std::set<JetVar> vars;
  for (const auto& [factors, coeff] : f.terms())
    for (const auto& fac : factors)
      if (fac.atom.kind == AtomKind::Jet || with_trig_bases)
        vars.insert(fac.atom.var);
  return vars;
}

} // namespace pluricas
