#include "pluricas/symmetry.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pluricas/linear_solve.hpp"

namespace pluricas {

SymmetryCertificate check_variational_symmetry(const Expr& lagrangian,
                                               const EvolutionaryField& field,
                                               std::vector<Expr> witnesses,
                                               const EquationSystem* system) {
  const ContextPtr& ctx = field.context();
  check_same_context(ctx, lagrangian.context());
  Expr residual = prolong_apply(field, lagrangian) - divergence(ctx, witnesses);
  SymmetryCertificate cert{field, lagrangian, std::move(witnesses), residual, std::nullopt};
  if (system)
    cert.reduced_residual = reduce(residual, *system);
  return cert;
}

bool is_total_divergence(const Expr& f) {
  if (!f.context())
    return true; // a context-free constant; every Euler operator kills it
  for (std::size_t a = 0; a < f.context()->num_dependent(); ++a)
    if (!euler_operator(f, static_cast<int>(a)).is_zero())
      return false;
  return true;
}

std::string WitnessAnsatz::describe() const {
  std::ostringstream os;
  os << "order <= " << max_order << ", degree <= " << max_degree
     << ", trig " << (allow_trig ? "on" : "off");
  return os.str();
}

namespace {

struct Unknown {
  std::size_t direction;
  FactorList monomial;
};

/// All multi-indices of length n with total order <= max_order.
std::vector<MultiIndex> indices_up_to(std::size_t n, int max_order) {
  std::vector<MultiIndex> out;
  std::vector<int> counts(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == n) {
      out.emplace_back(counts);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
    counts[pos] = 0;
  };
  rec(rec, 0, max_order);
  std::sort(out.begin(), out.end());
  return out;
}

/// Monomials of degree 0..max_degree in `vars` (sorted ascending), as factor lists.
std::vector<FactorList> monomials(const std::vector<JetVar>& vars, int max_degree) {
  std::vector<FactorList> out;
  FactorList current;
  auto rec = [&](auto&& self, std::size_t start, int left) -> void {
    out.push_back(current);
    if (left == 0)
      return;
    for (std::size_t k = start; k < vars.size(); ++k) {
      Atom atom{AtomKind::Jet, vars[k]};
      if (!current.empty() && current.back().atom == atom) {
        ++current.back().power;
        self(self, k, left - 1);
        --current.back().power;
      } else {
        current.push_back({atom, 1});
        self(self, k, left - 1);
        current.pop_back();
      }
    }
  };
  rec(rec, 0, max_degree);
  return out;
}

std::vector<Unknown> build_basis(const Context& ctx, const WitnessAnsatz& ansatz,
                                 const OrderInfo* bounds) {
  const std::size_t n = ctx.num_independent();
  const auto all_indices = indices_up_to(n, ansatz.max_order);
  std::vector<Unknown> basis;
  for (std::size_t dir = 0; dir < n; ++dir) {
    std::vector<JetVar> vars;
    std::vector<int> trig_deps;
    for (std::size_t a = 0; a < ctx.num_dependent(); ++a) {
      if (bounds && !bounds->present[a])
        continue;
      for (const auto& idx : all_indices)
        if (!bounds || idx.shifted(dir).divides(bounds->max_index[a]))
          vars.push_back(JetVar{static_cast<int>(a), idx});
      if (ansatz.allow_trig &&
          (!bounds || MultiIndex::unit(n, dir).divides(bounds->max_index[a])))
        trig_deps.push_back(static_cast<int>(a));
    }
    std::sort(vars.begin(), vars.end());
    for (const auto& mono : monomials(vars, ansatz.max_degree)) {
      if (!mono.empty())
        basis.push_back({dir, mono});
      for (int a : trig_deps) {
        JetVar base{a, MultiIndex(n)};
        for (AtomKind kind : {AtomKind::Sin, AtomKind::Cos})
          basis.push_back({dir, merge_factors(mono, FactorList{{Atom{kind, base}, 1}})});
      }
    }
  }
  return basis;
}

std::optional<std::vector<Expr>> solve_for_witnesses(const ContextPtr& ctx, const Expr& f,
                                                     const std::vector<Unknown>& basis) {
  std::map<FactorList, std::size_t> row_of;
  std::vector<SparseRationalSystem::Row> rows;
  auto row_index = [&](const FactorList& m) {
    auto [it, inserted] = row_of.try_emplace(m, rows.size());
    if (inserted)
      rows.emplace_back();
    return it->second;
  };
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Expr image =
        total_derivative(Expr::monomial(ctx, 1, basis[k].monomial), basis[k].direction);
    for (const auto& [m, c] : image.terms())
      rows[row_index(m)][k] = c;
  }
  std::vector<Rational> rhs(rows.size(), 0);
  for (const auto& [m, c] : f.terms()) {
    auto it = row_of.find(m);
    if (it == row_of.end())
      return std::nullopt;
    rhs[it->second] = c;
  }
  SparseRationalSystem system(basis.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    system.add_equation(std::move(rows[r]), rhs[r]);
  auto solution = system.solve();
  if (!solution)
    return std::nullopt;
  std::vector<Expr> witnesses(ctx->num_independent(), Expr::constant(ctx, 0));
  for (std::size_t k = 0; k < basis.size(); ++k)
    if ((*solution)[k] != 0)
      witnesses[basis[k].direction] += Expr::monomial(ctx, (*solution)[k], basis[k].monomial);
  return witnesses;
}

} // namespace

std::vector<Expr> find_divergence_witnesses(const ContextPtr& ctx, const Expr& f,
                                            const WitnessAnsatz& ansatz) {
  if (!ctx)
    throw ContextError("witness search needs a context");
  check_same_context(ctx, f.context());
  std::vector<Expr> images;
  bool annihilated = true;
  for (std::size_t a = 0; a < ctx->num_dependent(); ++a) {
    images.push_back(euler_operator(f, static_cast<int>(a)));
    annihilated = annihilated && images.back().is_zero();
  }
  if (!annihilated)
    throw NotADivergence(std::move(images));
  if (f.is_zero())
    return std::vector<Expr>(ctx->num_independent(), Expr::constant(ctx, 0));

  const OrderInfo bounds = max_order(f, *ctx);
  std::size_t largest = 0;
  for (const OrderInfo* b : {&bounds, static_cast<const OrderInfo*>(nullptr)}) {
    const auto basis = build_basis(*ctx, ansatz, b);
    largest = std::max(largest, basis.size());
    if (basis.size() > ansatz.max_unknowns)
      continue;
    if (auto witnesses = solve_for_witnesses(ctx, f, basis)) {
      if (!(divergence(ctx, *witnesses) == f))
        throw InternalInconsistency("witness search produced witnesses that do not verify");
      return *witnesses;
    }
  }
  throw SearchFailure("ansatz exhausted (" + ansatz.describe() + ", up to " +
                      std::to_string(largest) + " unknowns)");
}

std::vector<Expr> conservation_law(const Expr& lagrangian, const EvolutionaryField& field,
                                   const std::vector<Expr>& witnesses) {
  const ContextPtr& ctx = field.context();
  const std::size_t n = ctx->num_independent();
  const auto cert = check_variational_symmetry(lagrangian, field, witnesses);
  if (!cert.exact())
    throw Error("witnesses do not certify a variational symmetry: D_phi L - Div M is nonzero");

  // D_phi L = Div G + sum_a phi^a E_a(L), G from repeated integration by parts.
  std::vector<Expr> g(n, Expr::constant(ctx, 0));
  for (const auto& v : jet_variables(lagrangian, true)) {
    if (v.idx.is_zero())
      continue;
    Expr carried = partial(lagrangian, v);
    MultiIndex remaining = v.idx;
    while (!remaining.is_zero()) {
      std::size_t j = 0;
      while (remaining[j] == 0)
        ++j;
      remaining = remaining.shifted(j, -1);
      g[j] += total_derivative(field[v.dep], remaining) * carried;
      carried = -total_derivative(carried, j);
    }
  }

  std::vector<Expr> fluxes(n);
  for (std::size_t i = 0; i < n; ++i)
    fluxes[i] = witnesses[i] - g[i];

  Expr source = Expr::constant(ctx, 0);
  for (std::size_t a = 0; a < ctx->num_dependent(); ++a)
    source += field[a] * euler_operator(lagrangian, static_cast<int>(a));
  if (!(divergence(ctx, fluxes) == source))
    throw InternalInconsistency("Noether identity failed for the computed fluxes");
  return fluxes;
}

} // namespace pluricas
