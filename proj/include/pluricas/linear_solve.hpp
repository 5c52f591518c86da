#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace pluricas {

/// Sparse linear system A x = b over the rationals, solved by exact
/// Gaussian elimination. Rows are added one equation at a time.
class SparseRationalSystem {
public:
  using Row = std::map<std::size_t, mpq_class>;

  explicit SparseRationalSystem(std::size_t num_unknowns) : num_unknowns_(num_unknowns) {}

  std::size_t num_unknowns() const noexcept { return num_unknowns_; }
  std::size_t num_equations() const noexcept { return rows_.size(); }

  void add_equation(Row coefficients, mpq_class rhs);

  /// A particular solution with every free unknown set to zero, or nullopt
  /// when the system is inconsistent.
  std::optional<std::vector<mpq_class>> solve() const;

private:
  std::size_t num_unknowns_;
  std::vector<std::pair<Row, mpq_class>> rows_;
};

} // namespace pluricas
