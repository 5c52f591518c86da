#pragma once

// Lagrangian k-forms on multi-time, exterior derivative, closedness on
// solutions, and the multi-time Euler-Lagrange system of second-order 2-forms.

#include <map>
#include <string>
#include <vector>

#include "pluricas/jet.hpp"
#include "pluricas/reduction.hpp"

namespace pluricas {

using IndexTuple = std::vector<std::size_t>;

/// sum over increasing tuples J of L_J dx^{j_1} ^ ... ^ dx^{j_k}.
class LagrangianForm {
public:
  LagrangianForm(ContextPtr ctx, std::size_t degree);

  const ContextPtr& context() const noexcept { return ctx_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t dimension() const noexcept { return ctx_->num_independent(); }

  /// Sets the coefficient at `tuple`, given in any order: the stored
  /// increasing-tuple coefficient becomes sign(permutation) * value.
  /// Throws ContextError on out-of-range or repeated indices, ArityError on a wrong length.
  void set(const IndexTuple& tuple, Expr value);

  /// Coefficient at any tuple, with the permutation sign applied; repeated
  /// indices give zero.
  Expr coefficient(const IndexTuple& tuple) const;

  /// Stored coefficients, keyed by increasing tuples; absent keys are zero.
  const std::map<IndexTuple, Expr>& coefficients() const noexcept { return coeffs_; }

  bool is_zero() const;

private:
  ContextPtr ctx_;
  std::size_t degree_;
  std::map<IndexTuple, Expr> coeffs_;
};

/// All increasing k-tuples from {0..m-1}.
std::vector<IndexTuple> increasing_tuples(std::size_t m, std::size_t k);

/// (dF)_{j_0..j_k} = sum_r (-1)^r D_{j_r} F_{j_0..^j_r..j_k}. Throws DegreeOverflow when k = m.
LagrangianForm exterior_derivative(const LagrangianForm& form);

struct ClosureEntry {
  IndexTuple tuple;
  Expr raw;
  Expr reduced;
};

/// Coefficients of dF together with their reductions modulo S. The form is
/// closed on solutions iff every reduced entry vanishes.
std::vector<ClosureEntry> closure_residual(const LagrangianForm& form, const EquationSystem& system);

enum class PluriKind { DeltaU = 1, DeltaUk = 2, DeltaUkm = 3, MomentumP = 4, MomentumPk = 5, Cyclic = 6 };

/// Provenance of one generated equation.
///   DeltaU     (i, j)            delta L_ij / delta u = 0
///   DeltaUk    (i, j, k)         delta L_ij / delta u_k = 0, k outside {i, j}
///   DeltaUkm   (i, j, k, m)      delta L_ij / delta u_km = 0, k, m outside {i, j}
///   MomentumP  (i, j, j')        delta L_ij/delta u_j - delta L_ij'/delta u_j' = 0
///   MomentumPk (i, k, j, j')     delta L_ij/delta u_jk - delta L_ij'/delta u_j'k = 0
///   Cyclic     (i, j, k)         delta L_ij/delta u_ij + delta L_jk/delta u_jk + delta L_ki/delta u_ki = 0
struct ElTag {
  PluriKind kind;
  IndexTuple indices;

  std::string describe(const Context& ctx) const;
};

struct ElEquation {
  ElTag tag;
  Expr expr;
  bool trivial = false;
};

struct MultiTimeELSystem {
  ContextPtr context;
  std::vector<ElEquation> equations;
};

/// Generates every equation of the multi-time Euler-Lagrange system of a
/// second-order 2-form for the dependent variable `dep`. Throws OrderOverflow
/// on coefficients of order >= 3 and UnsupportedOperation on degree != 2.
MultiTimeELSystem multi_time_el(const LagrangianForm& form, int dep = 0);

struct ElClassification {
  std::vector<std::size_t> identically_zero;
  std::vector<std::size_t> reducible;
  std::vector<std::size_t> independent;
  /// Reduced form of every equation, aligned with the system's equation list.
  std::vector<Expr> reduced;
};

ElClassification classify_el_system(const MultiTimeELSystem& system, const EquationSystem& rules);

} // namespace pluricas
