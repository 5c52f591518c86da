#include "pluricas/forms.hpp"

#include <algorithm>
#include <sstream>

#include "pluricas/calculus.hpp"

namespace pluricas {

namespace {

/// Sorts a copy of `tuple`; returns the permutation sign, or 0 on repeated entries.
int sort_with_sign(IndexTuple& tuple) {
  int sign = 1;
  for (std::size_t a = 0; a < tuple.size(); ++a)
    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
      if (tuple[a] == tuple[b])
        return 0;
      if (tuple[a] > tuple[b])
        sign = -sign;
    }
  std::sort(tuple.begin(), tuple.end());
  return sign;
}

} // namespace

LagrangianForm::LagrangianForm(ContextPtr ctx, std::size_t degree)
    : ctx_(std::move(ctx)), degree_(degree) {
  if (!ctx_)
    throw ContextError("form needs a context");
  if (degree_ > ctx_->num_independent())
    throw DegreeOverflow("form degree exceeds the number of independent variables");
}

void LagrangianForm::set(const IndexTuple& tuple, Expr value) {
  if (tuple.size() != degree_)
    throw ArityError("coefficient index has " + std::to_string(tuple.size()) +
                     " entries, form degree is " + std::to_string(degree_));
  for (std::size_t i : tuple)
    if (i >= dimension())
      throw ContextError("form index out of range");
  check_same_context(ctx_, value.context());
  IndexTuple sorted = tuple;
  const int sign = sort_with_sign(sorted);
  if (sign == 0)
    throw ContextError("form index repeats a direction");
  Expr stored = sign > 0 ? std::move(value) : -value;
  if (stored.is_zero())
    coeffs_.erase(sorted);
  else
    coeffs_[sorted] = Expr::constant(ctx_, 0) + stored;
}

Expr LagrangianForm::coefficient(const IndexTuple& tuple) const {
  IndexTuple sorted = tuple;
  const int sign = sort_with_sign(sorted);
  auto it = coeffs_.find(sorted);
  if (sign == 0 || it == coeffs_.end())
    return Expr::constant(ctx_, 0);
  return sign > 0 ? it->second : -it->second;
}

bool LagrangianForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return kv.second.is_zero(); });
}

std::vector<IndexTuple> increasing_tuples(std::size_t m, std::size_t k) {
  std::vector<IndexTuple> out;
  IndexTuple current;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (current.size() == k) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      current.push_back(i);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

LagrangianForm exterior_derivative(const LagrangianForm& form) {
  if (form.degree() >= form.dimension())
    throw DegreeOverflow("exterior derivative of a top-degree form");
  LagrangianForm d(form.context(), form.degree() + 1);
  for (const auto& tuple : increasing_tuples(form.dimension(), form.degree() + 1)) {
    Expr c = Expr::constant(form.context(), 0);
    for (std::size_t r = 0; r < tuple.size(); ++r) {
      IndexTuple rest = tuple;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(r));
      Expr term = total_derivative(form.coefficient(rest), tuple[r]);
      if (r % 2 == 0)
        c += term;
      else
        c -= term;
    }
    d.set(tuple, std::move(c));
  }
  return d;
}

std::vector<ClosureEntry> closure_residual(const LagrangianForm& form, const EquationSystem& system) {
  const LagrangianForm d = exterior_derivative(form);
  std::vector<ClosureEntry> out;
  for (const auto& tuple : increasing_tuples(d.dimension(), d.degree())) {
    Expr raw = d.coefficient(tuple);
    Expr reduced = reduce(raw, system);
    out.push_back({tuple, std::move(raw), std::move(reduced)});
  }
  return out;
}

std::string ElTag::describe(const Context& ctx) const {
  const auto& names = ctx.independent();
  auto name = [&](std::size_t i) { return names.at(i); };
  std::ostringstream os;
  switch (kind) {
  case PluriKind::DeltaU:
    os << "pluri1 dL[" << name(indices[0]) << name(indices[1]) << "]/du";
    break;
  case PluriKind::DeltaUk:
    os << "pluri2 dL[" << name(indices[0]) << name(indices[1]) << "]/du_" << name(indices[2]);
    break;
  case PluriKind::DeltaUkm:
    os << "pluri3 dL[" << name(indices[0]) << name(indices[1]) << "]/du_" << name(indices[2])
       << name(indices[3]);
    break;
  case PluriKind::MomentumP:
    os << "pluri4 p_" << name(indices[0]) << ": dL[" << name(indices[0]) << name(indices[1])
       << "]/du_" << name(indices[1]) << " - dL[" << name(indices[0]) << name(indices[2])
       << "]/du_" << name(indices[2]);
    break;
  case PluriKind::MomentumPk:
    os << "pluri5 p_" << name(indices[0]) << "^" << name(indices[1]) << ": dL[" << name(indices[0])
       << name(indices[2]) << "]/du_" << name(indices[2]) << name(indices[1]) << " - dL["
       << name(indices[0]) << name(indices[3]) << "]/du_" << name(indices[3]) << name(indices[1]);
    break;
  case PluriKind::Cyclic:
    os << "pluri6 cyclic(" << name(indices[0]) << name(indices[1]) << name(indices[2]) << ")";
    break;
  }
  return os.str();
}

MultiTimeELSystem multi_time_el(const LagrangianForm& form, int dep) {
  if (form.degree() != 2)
    throw UnsupportedOperation("multi-time Euler-Lagrange equations are implemented for 2-forms only");
  const std::size_t m = form.dimension();
  for (const auto& [tuple, c] : form.coefficients())
    for (const auto& v : jet_variables(c, false))
      if (v.idx.order() >= 3)
        throw OrderOverflow("2-form coefficient depends on a jet of order >= 3");

  MultiTimeELSystem sys{form.context(), {}};
  auto L = [&](std::size_t i, std::size_t j) { return form.coefficient({i, j}); };
  auto emit = [&](PluriKind kind, IndexTuple idx, Expr e) {
    const bool trivial = e.is_zero();
    sys.equations.push_back({ElTag{kind, std::move(idx)}, std::move(e), trivial});
  };
  auto outside = [](std::size_t k, std::size_t i, std::size_t j) { return k != i && k != j; };

  const auto pairs = increasing_tuples(m, 2);
  for (const auto& p : pairs)
    emit(PluriKind::DeltaU, p, restricted_delta_u(L(p[0], p[1]), p[0], p[1], dep));
  for (const auto& p : pairs)
    for (std::size_t k = 0; k < m; ++k)
      if (outside(k, p[0], p[1]))
        emit(PluriKind::DeltaUk, {p[0], p[1], k},
             restricted_delta_u_k(L(p[0], p[1]), k, p[0], p[1], dep));
  for (const auto& p : pairs)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k; l < m; ++l)
        if (outside(k, p[0], p[1]) && outside(l, p[0], p[1]))
          emit(PluriKind::DeltaUkm, {p[0], p[1], k, l}, restricted_delta_u_km(L(p[0], p[1]), k, l, dep));
  // p_i is the common value of delta L_ij / delta u_j over j != i.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t jj = j + 1; jj < m; ++jj)
        if (j != i && jj != i)
          emit(PluriKind::MomentumP, {i, j, jj},
               restricted_delta_u_k(L(i, j), j, i, j, dep) -
                   restricted_delta_u_k(L(i, jj), jj, i, jj, dep));
  // p_i^k, k != i, is the common value of delta L_ij / delta u_jk over j != i.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i)
        continue;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t jj = j + 1; jj < m; ++jj)
          if (j != i && jj != i)
            emit(PluriKind::MomentumPk, {i, k, j, jj},
                 restricted_delta_u_km(L(i, j), j, k, dep) -
                     restricted_delta_u_km(L(i, jj), jj, k, dep));
    }
  for (const auto& t : increasing_tuples(m, 3)) {
    const std::size_t i = t[0], j = t[1], k = t[2];
    emit(PluriKind::Cyclic, t,
         restricted_delta_u_km(L(i, j), i, j, dep) + restricted_delta_u_km(L(j, k), j, k, dep) +
             restricted_delta_u_km(L(k, i), k, i, dep));
  }
  return sys;
}

ElClassification classify_el_system(const MultiTimeELSystem& system, const EquationSystem& rules) {
  ElClassification out;
  for (std::size_t n = 0; n < system.equations.size(); ++n) {
    const auto& eq = system.equations[n];
    Expr reduced = eq.expr.is_zero() ? eq.expr : reduce(eq.expr, rules);
    if (eq.expr.is_zero())
      out.identically_zero.push_back(n);
    else if (reduced.is_zero())
      out.reducible.push_back(n);
    else
      out.independent.push_back(n);
    out.reduced.push_back(std::move(reduced));
  }
  return out;
}

} // namespace pluricas
