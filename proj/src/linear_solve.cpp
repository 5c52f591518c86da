#include "pluricas/linear_solve.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pluricas {

void SparseRationalSystem::add_equation(Row coefficients, mpq_class rhs) {
  for (auto it = coefficients.begin(); it != coefficients.end();) {
    if (it->first >= num_unknowns_)
      throw std::out_of_range("unknown index out of range");
    it = it->second == 0 ? coefficients.erase(it) : std::next(it);
  }
  rows_.emplace_back(std::move(coefficients), std::move(rhs));
}

std::optional<std::vector<mpq_class>> SparseRationalSystem::solve() const {
  // Short rows first keeps fill-in down.
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows_[a].first.size() < rows_[b].first.size();
  });

  // Pivot rows are normalized to a leading 1 and only contain columns >= pivot.
  std::map<std::size_t, std::pair<Row, mpq_class>> pivots;
  for (std::size_t r : order) {
    Row row = rows_[r].first;
    mpq_class rhs = rows_[r].second;
    auto it = row.begin();
    while (it != row.end()) {
      auto pivot = pivots.find(it->first);
      if (pivot == pivots.end()) {
        ++it;
        continue;
      }
      const std::size_t col = it->first;
      const mpq_class factor = it->second;
      for (const auto& [c, v] : pivot->second.first) {
        auto [slot, inserted] = row.try_emplace(c, 0);
        slot->second -= factor * v;
        if (slot->second == 0)
          row.erase(slot);
      }
      rhs -= factor * pivot->second.second;
      it = row.upper_bound(col);
    }
    if (row.empty()) {
      if (rhs != 0)
        return std::nullopt;
      continue;
    }
    const std::size_t col = row.begin()->first;
    const mpq_class lead = row.begin()->second;
    for (auto& [c, v] : row)
      v /= lead;
    rhs /= lead;
    pivots.emplace(col, std::make_pair(std::move(row), std::move(rhs)));
  }

  std::vector<mpq_class> x(num_unknowns_, 0);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [row, rhs] = it->second;
    mpq_class value = rhs;
    for (const auto& [c, v] : row)
      if (c != it->first)
        value -= v * x[c];
    x[it->first] = value;
  }
  return x;
}

} // namespace pluricas
