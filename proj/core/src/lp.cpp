#include "causat/lp.hpp"

#include "causat/errors.hpp"

namespace causat {
namespace {

class Tableau {
 public:
  // rows: coefficient rows over `cols` columns, plus right-hand sides >= 0.
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::vector<int> basis)
      : a_(std::move(rows)), b_(std::move(rhs)), basis_(std::move(basis)) {}

  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return a_.empty() ? 0 : a_.front().size(); }
  const std::vector<int>& basis() const { return basis_; }
  const Rational& rhs(std::size_t i) const { return b_[i]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i][j]; }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / a_[r][c];
    for (auto& v : a_[r]) v *= inv;
    b_[r] *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || sgn(a_[i][c]) == 0) continue;
      Rational factor = a_[i][c];
      for (std::size_t j = 0; j < a_[i].size(); ++j) {
        if (sgn(a_[r][j]) != 0) a_[i][j] -= factor * a_[r][j];
      }
      b_[i] -= factor * b_[r];
    }
    basis_[r] = static_cast<int>(c);
  }

  void dropRow(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  enum class Outcome { Optimal, Unbounded, PivotLimit };

  // Maximizes c·x over columns allowed by `usable`, using Bland's rule.
  Outcome maximize(const std::vector<Rational>& c, const std::vector<bool>& usable, std::size_t& pivots,
                   std::size_t maxPivots) {
    while (true) {
      // Reduced cost of column j: c_B · column_j - c_j; entering if negative.
      std::size_t entering = cols();
      for (std::size_t j = 0; j < cols() && entering == cols(); ++j) {
        if (!usable[j] || isBasic(j)) continue;
        Rational reduced = -c[j];
        for (std::size_t i = 0; i < rows(); ++i) {
          if (sgn(a_[i][j]) != 0) reduced += c[static_cast<std::size_t>(basis_[i])] * a_[i][j];
        }
        if (sgn(reduced) < 0) entering = j;
      }
      if (entering == cols()) return Outcome::Optimal;
      std::size_t leaving = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(a_[i][entering]) <= 0) continue;
        Rational ratio = b_[i] / a_[i][entering];
        if (leaving == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = ratio;
        }
      }
      if (leaving == rows()) return Outcome::Unbounded;
      if (pivots >= maxPivots) return Outcome::PivotLimit;
      ++pivots;
      pivot(leaving, entering);
    }
  }

  Rational value(const std::vector<Rational>& c) const {
    Rational total = 0;
    for (std::size_t i = 0; i < rows(); ++i) total += c[static_cast<std::size_t>(basis_[i])] * b_[i];
    return total;
  }

  bool isBasic(std::size_t j) const {
    for (int b : basis_) {
      if (static_cast<std::size_t>(b) == j) return true;
    }
    return false;
  }

 private:
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> b_;
  std::vector<int> basis_;
};

LpResult solve(const LinearSystem& sys, const std::vector<std::size_t>& active, const LpOptions& options) {
  const std::size_t n = static_cast<std::size_t>(sys.numVars);
  bool anyStrict = false;
  std::size_t slacks = 0;
  for (std::size_t idx : active) {
    const auto& c = sys.constraints[idx];
    if (c.rel == RelOp::Ne) throw ConfigError("linear systems do not accept '!=' rows");
    if (c.coeffs.size() != n) throw ConfigError("constraint arity does not match the number of unknowns");
    if (c.rel == RelOp::Lt || c.rel == RelOp::Gt) anyStrict = true;
    if (c.rel != RelOp::Eq) ++slacks;
  }
  if (anyStrict) ++slacks;  // t <= 1

  // Columns: x (n), t (1 if strict), slacks, artificials (one per row).
  const std::size_t tCol = n;
  const std::size_t firstSlack = n + (anyStrict ? 1 : 0);
  const std::size_t m = active.size() + (anyStrict ? 1 : 0);
  const std::size_t firstArt = firstSlack + slacks;
  const std::size_t cols = firstArt + m;

  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(cols, Rational(0)));
  std::vector<Rational> rhs(m);
  std::vector<int> basis(m);
  std::size_t slack = firstSlack;
  for (std::size_t r = 0; r < active.size(); ++r) {
    const auto& c = sys.constraints[active[r]];
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = c.coeffs[j];
    switch (c.rel) {
      case RelOp::Lt: rows[r][tCol] = 1; [[fallthrough]];
      case RelOp::Le: rows[r][slack++] = 1; break;
      case RelOp::Gt: rows[r][tCol] = -1; [[fallthrough]];
      case RelOp::Ge: rows[r][slack++] = -1; break;
      default: break;
    }
    rhs[r] = c.rhs;
  }
  if (anyStrict) {
    std::size_t r = m - 1;
    rows[r][tCol] = 1;
    rows[r][slack++] = 1;
    rhs[r] = 1;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (sgn(rhs[r]) < 0) {
      for (auto& v : rows[r]) v = -v;
      rhs[r] = -rhs[r];
    }
    rows[r][firstArt + r] = 1;
    basis[r] = static_cast<int>(firstArt + r);
  }

  LpResult result;
  Tableau tab(std::move(rows), std::move(rhs), std::move(basis));

  std::vector<Rational> phase1(cols, Rational(0));
  for (std::size_t j = firstArt; j < cols; ++j) phase1[j] = -1;
  std::vector<bool> all(cols, true);
  auto outcome = tab.maximize(phase1, all, result.pivots, options.maxPivots);
  if (outcome == Tableau::Outcome::PivotLimit) {
    result.status = LpResult::Status::PivotLimit;
    return result;
  }
  if (sgn(tab.value(phase1)) < 0) {
    result.status = LpResult::Status::Infeasible;
    return result;
  }

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (std::size_t r = tab.rows(); r-- > 0;) {
    if (static_cast<std::size_t>(tab.basis()[r]) < firstArt) continue;
    std::size_t col = firstArt;
    for (std::size_t j = 0; j < firstArt; ++j) {
      if (sgn(tab.at(r, j)) != 0) {
        col = j;
        break;
      }
    }
    if (col == firstArt) {
      tab.dropRow(r);
    } else {
      tab.pivot(r, col);
    }
  }

  std::vector<bool> usable(cols, true);
  for (std::size_t j = firstArt; j < cols; ++j) usable[j] = false;
  if (anyStrict) {
    std::vector<Rational> objective(cols, Rational(0));
    objective[tCol] = 1;
    outcome = tab.maximize(objective, usable, result.pivots, options.maxPivots);
    if (outcome == Tableau::Outcome::PivotLimit) {
      result.status = LpResult::Status::PivotLimit;
      return result;
    }
    if (sgn(tab.value(objective)) <= 0) {
      result.status = LpResult::Status::Infeasible;
      return result;
    }
  }

  result.status = LpResult::Status::Feasible;
  result.point.assign(n, Rational(0));
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    auto b = static_cast<std::size_t>(tab.basis()[r]);
    if (b < n) result.point[b] = tab.rhs(r);
  }
  return result;
}

}  // namespace

LpResult linearFeasibilityExact(const LinearSystem& sys, const LpOptions& options) {
  std::vector<std::size_t> active(sys.constraints.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  LpResult result = solve(sys, active, options);
  if (result.status != LpResult::Status::Infeasible || !options.certificate) return result;

  // Deletion filter: drop every row whose removal keeps the system infeasible.
  std::vector<std::size_t> core = active;
  for (std::size_t k = 0; k < core.size();) {
    std::vector<std::size_t> trial = core;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    LpResult sub = solve(sys, trial, options);
    result.pivots += sub.pivots;
    if (sub.status == LpResult::Status::Infeasible) {
      core = std::move(trial);
    } else {
      ++k;
    }
  }
  result.conflict = std::move(core);
  return result;
}

}  // namespace causat
