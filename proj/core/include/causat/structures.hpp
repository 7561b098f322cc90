#pragma once

// Response-function tables: the per-u skeleton of a discrete SCM.
//
// For a fixed causal order every variable reads its parents (ascending by
// index). A table maps each parent assignment, in mixed radix with the first
// parent most significant, to a value; it is stored as a code whose base-c
// digit r is the value at parent row r. A row is one table per variable.

#include <cstdint>
#include <span>
#include <vector>

#include "causat/model.hpp"

namespace causat {

struct CausalOrder {
  std::vector<int> order;                 // topological
  std::vector<std::vector<int>> parents;  // per variable, ascending
  friend bool operator==(const CausalOrder&, const CausalOrder&) = default;
};

/// Every permutation of 0..n-1 in lexicographic order, each with the
/// complete predecessor parent sets.
std::vector<CausalOrder> allCausalOrders(int n);
/// Complete DAG of the given permutation.
CausalOrder completeOrder(const std::vector<int>& permutation);
/// Parents and lexicographically smallest topological order of a DAG whose
/// variable i is mapped to index `map[i]`.
CausalOrder dagOrder(const Dag& dag, const std::vector<int>& map);
/// Lexicographically smallest topological order of `parents`.
std::vector<int> smallestTopologicalOrder(const std::vector<std::vector<int>>& parents);

using RowCodes = std::vector<std::uint64_t>;

class RowSpace {
 public:
  /// With `constantTables` each variable only uses the c constant tables and
  /// its code is the constant value.
  RowSpace(CausalOrder order, int card, bool constantTables = false);

  const CausalOrder& order() const noexcept { return order_; }
  int card() const noexcept { return card_; }
  bool constantTables() const noexcept { return constant_; }
  std::size_t numVars() const noexcept { return order_.parents.size(); }

  /// Tables available to `var`. Throws ConfigError past 2^62.
  std::uint64_t tableCount(int var) const { return counts_[static_cast<std::size_t>(var)]; }
  /// Number of parent assignments of `var`.
  std::uint64_t parentRows(int var) const { return rows_[static_cast<std::size_t>(var)]; }
  /// Product of the table counts, saturating at UINT64_MAX.
  std::uint64_t size() const noexcept { return size_; }

  RowCodes first() const { return RowCodes(numVars(), 0); }
  /// Lexicographic successor (last variable fastest); false after the last.
  bool next(RowCodes& row) const;

  /// Value of `var` at parent row `r`.
  int tableValue(const RowCodes& row, int var, std::uint64_t r) const;
  /// Parent row index of `var` under the assignment x.
  std::uint64_t parentRow(int var, const Assignment& x) const;
  /// Endogenous values; forced[v] >= 0 overrides the table of v.
  Assignment evaluate(const RowCodes& row, std::span<const int> forced) const;
  /// Full table of `var` over its parent rows.
  std::vector<int> table(const RowCodes& row, int var) const;
  /// True when changing the parent at `parentPos` alone can change the value.
  bool dependsOn(const RowCodes& row, int var, std::size_t parentPos) const;

 private:
  CausalOrder order_;
  int card_;
  bool constant_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> rows_;
  std::uint64_t size_ = 1;
};

}  // namespace causat
