#include "causat/structures.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "causat/errors.hpp"

namespace causat {
namespace {

constexpr std::uint64_t kMaxCode = std::uint64_t{1} << 62;

// b^e, or 0 when it exceeds kMaxCode.
std::uint64_t boundedPow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (out > kMaxCode / b) return 0;
    out *= b;
  }
  return out;
}

}  // namespace

CausalOrder completeOrder(const std::vector<int>& permutation) {
  CausalOrder out;
  out.order = permutation;
  out.parents.resize(permutation.size());
  for (std::size_t k = 0; k < permutation.size(); ++k) {
    auto& pa = out.parents[static_cast<std::size_t>(permutation[k])];
    pa.assign(permutation.begin(), permutation.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(pa.begin(), pa.end());
  }
  return out;
}

std::vector<CausalOrder> allCausalOrders(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CausalOrder> out;
  do {
    out.push_back(completeOrder(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<int> smallestTopologicalOrder(const std::vector<std::vector<int>>& parents) {
  const std::size_t n = parents.size();
  std::vector<int> order;
  std::vector<bool> placed(n, false);
  while (order.size() < n) {
    bool progress = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      bool ready = std::all_of(parents[v].begin(), parents[v].end(),
                               [&](int p) { return placed[static_cast<std::size_t>(p)]; });
      if (ready) {
        placed[v] = true;
        order.push_back(static_cast<int>(v));
        progress = true;
        break;
      }
    }
    if (!progress) throw ConfigError("parent relation is cyclic");
  }
  return order;
}

CausalOrder dagOrder(const Dag& dag, const std::vector<int>& map) {
  CausalOrder out;
  out.parents.resize(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    auto& pa = out.parents[static_cast<std::size_t>(map[i])];
    for (int p : dag.parents(static_cast<int>(i))) pa.push_back(map[static_cast<std::size_t>(p)]);
    std::sort(pa.begin(), pa.end());
  }
  out.order = smallestTopologicalOrder(out.parents);
  return out;
}

RowSpace::RowSpace(CausalOrder order, int card, bool constantTables)
    : order_(std::move(order)), card_(card), constant_(constantTables) {
  if (card < 1) throw ConfigError("domain must be non-empty");
  const auto c = static_cast<std::uint64_t>(card);
  for (const auto& pa : order_.parents) {
    std::uint64_t rows = boundedPow(c, pa.size());
    if (rows == 0) throw ConfigError("too many parent assignments");
    std::uint64_t count = constant_ ? c : boundedPow(c, rows);
    if (count == 0) throw ConfigError("response table space too large");
    rows_.push_back(rows);
    counts_.push_back(count);
    if (size_ > std::numeric_limits<std::uint64_t>::max() / count) {
      size_ = std::numeric_limits<std::uint64_t>::max();
    } else if (size_ != std::numeric_limits<std::uint64_t>::max()) {
      size_ *= count;
    }
  }
}

bool RowSpace::next(RowCodes& row) const {
  for (std::size_t v = row.size(); v-- > 0;) {
    if (++row[v] < counts_[v]) return true;
    row[v] = 0;
  }
  return false;
}

int RowSpace::tableValue(const RowCodes& row, int var, std::uint64_t r) const {
  std::uint64_t code = row[static_cast<std::size_t>(var)];
  if (constant_) return static_cast<int>(code);
  const auto c = static_cast<std::uint64_t>(card_);
  for (std::uint64_t i = 0; i < r; ++i) code /= c;
  return static_cast<int>(code % c);
}

std::uint64_t RowSpace::parentRow(int var, const Assignment& x) const {
  std::uint64_t r = 0;
  for (int p : order_.parents[static_cast<std::size_t>(var)]) {
    r = r * static_cast<std::uint64_t>(card_) + static_cast<std::uint64_t>(x[static_cast<std::size_t>(p)]);
  }
  return r;
}

Assignment RowSpace::evaluate(const RowCodes& row, std::span<const int> forced) const {
  Assignment x(numVars(), 0);
  for (int v : order_.order) {
    const auto idx = static_cast<std::size_t>(v);
    x[idx] = forced[idx] >= 0 ? forced[idx] : tableValue(row, v, constant_ ? 0 : parentRow(v, x));
  }
  return x;
}

std::vector<int> RowSpace::table(const RowCodes& row, int var) const {
  std::vector<int> out(rows_[static_cast<std::size_t>(var)]);
  for (std::uint64_t r = 0; r < out.size(); ++r) out[r] = tableValue(row, var, r);
  return out;
}

bool RowSpace::dependsOn(const RowCodes& row, int var, std::size_t parentPos) const {
  if (constant_) return false;
  const auto& pa = order_.parents[static_cast<std::size_t>(var)];
  const auto c = static_cast<std::uint64_t>(card_);
  const std::uint64_t stride = boundedPow(c, pa.size() - 1 - parentPos);
  const std::uint64_t rows = rows_[static_cast<std::size_t>(var)];
  for (std::uint64_t r = 0; r < rows; ++r) {
    if ((r / stride) % c != 0) continue;
    int base = tableValue(row, var, r);
    for (std::uint64_t d = 1; d < c; ++d) {
      if (tableValue(row, var, r + d * stride) != base) return true;
    }
  }
  return false;
}

}  // namespace causat
