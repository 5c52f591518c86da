#pragma once

// Total derivatives, prolonged evolutionary vector fields, divergences and
// variational derivatives on autonomous differential functions.

#include <span>
#include <vector>

#include "pluricas/jet.hpp"

namespace pluricas {

/// D_j f = sum over jet variables of u_{I+e_j} * df/du_I (chain rule through sin/cos).
Expr total_derivative(const Expr& f, std::size_t direction);

/// D_I f = D_1^{i_1} ... D_p^{i_p} f.
Expr total_derivative(const Expr& f, const MultiIndex& index);

/// Characteristics phi^a, one per dependent variable.
class EvolutionaryField {
public:
  /// Throws ArityError unless there is exactly one characteristic per dependent variable.
  EvolutionaryField(ContextPtr ctx, std::vector<Expr> characteristics);

  static EvolutionaryField zero(ContextPtr ctx);

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<Expr>& characteristics() const noexcept { return chars_; }
  const Expr& operator[](std::size_t dep) const { return chars_.at(dep); }

private:
  ContextPtr ctx_;
  std::vector<Expr> chars_;
};

/// D_phi f = sum_{a,I} (D_I phi^a) df/du^a_I over the variables occurring in f.
Expr prolong_apply(const EvolutionaryField& field, const Expr& f);

/// sum_i D_i M_i; throws ArityError if M does not have one entry per independent variable.
Expr divergence(const ContextPtr& ctx, std::span<const Expr> components);

/// Full variational derivative delta f / delta u^dep = sum_I (-D)_I df/du^dep_I.
Expr euler_operator(const Expr& f, int dep);

// Plane-restricted variational derivatives of a second-order coefficient L_ij
// of a 2-form. Each throws OrderOverflow when L involves jets of order >= 3.

/// dL/du - D_i dL/du_i - D_j dL/du_j + D_i^2 dL/du_ii + D_iD_j dL/du_ij + D_j^2 dL/du_jj
Expr restricted_delta_u(const Expr& L, std::size_t i, std::size_t j, int dep = 0);

/// dL/du_k - D_i dL/du_ik - D_j dL/du_jk
Expr restricted_delta_u_k(const Expr& L, std::size_t k, std::size_t i, std::size_t j,
                          int dep = 0);

/// dL/du_km as a plain partial derivative.
///
/// The mixed case k in {i, j} (which the multi-time Euler-Lagrange equations
/// use for p_i^k) is also a plain partial; no first-order correction is added.
Expr restricted_delta_u_km(const Expr& L, std::size_t k, std::size_t m, int dep = 0);

} // namespace pluricas
