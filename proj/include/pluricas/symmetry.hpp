#pragma once

// Variational symmetries: D_phi L = Div M certificates, divergence tests,
// witness search by undetermined coefficients, and Noether fluxes.

#include <optional>
#include <string>
#include <vector>

#include "pluricas/calculus.hpp"
#include "pluricas/reduction.hpp"

namespace pluricas {

struct SymmetryCertificate {
  EvolutionaryField field;
  Expr lagrangian;
  std::vector<Expr> witnesses;
  /// D_phi L - sum_i D_i M_i
  Expr residual;
  /// residual reduced modulo the supplied system, if any.
  std::optional<Expr> reduced_residual;

  bool exact() const { return residual.is_zero(); }
  bool on_shell() const {
    return exact() || (reduced_residual && reduced_residual->is_zero());
  }
};

SymmetryCertificate check_variational_symmetry(const Expr& lagrangian,
                                               const EvolutionaryField& field,
                                               std::vector<Expr> witnesses,
                                               const EquationSystem* system = nullptr);

/// True iff every Euler operator annihilates f.
bool is_total_divergence(const Expr& f);

/// Raised by find_divergence_witnesses when f has a nonzero Euler image.
class NotADivergence : public Error {
public:
  explicit NotADivergence(std::vector<Expr> euler_images)
      : Error("expression is not a total divergence: its Euler image is nonzero"),
        images_(std::move(euler_images)) {}

  /// euler_operator(f, a) for every dependent variable a.
  const std::vector<Expr>& euler_images() const noexcept { return images_; }

private:
  std::vector<Expr> images_;
};

struct WitnessAnsatz {
  int max_order = 2;
  int max_degree = 3;
  bool allow_trig = true;
  /// Upper bound on the number of unknown coefficients of the unpruned basis.
  std::size_t max_unknowns = 6000;

  std::string describe() const;
};

/// Finds M with sum_i D_i M_i = f among polynomials in jet variables of
/// order <= max_order and degree <= max_degree, optionally times one sin or cos.
/// A basis pruned to the multi-indices occurring in f is tried first, then the
/// full basis. Throws NotADivergence or SearchFailure.
std::vector<Expr> find_divergence_witnesses(const ContextPtr& ctx, const Expr& f,
                                            const WitnessAnsatz& ansatz);

/// Fluxes F with sum_i D_i F_i = sum_a phi^a * euler_operator(L, a), obtained
/// from D_phi L = Div M by integrating D_phi L - phi * delta L by parts.
/// The identity is verified exactly; a failure raises InternalInconsistency.
std::vector<Expr> conservation_law(const Expr& lagrangian, const EvolutionaryField& field,
                                   const std::vector<Expr>& witnesses);

} // namespace pluricas
