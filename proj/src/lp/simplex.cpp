#include "fpnc/lp/simplex.hpp"

#include <map>
#include <sstream>

#include "fpnc/budget.hpp"
#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

// Sparse tableau rows; column cols_ holds the right-hand side.
class Tableau {
 public:
  using Row = std::map<std::size_t, Rational>;

  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  Row& row(std::size_t r) { return rows_[r]; }
  const Rational& at(std::size_t r, std::size_t c) const {
    static const Rational zero;
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? zero : it->second;
  }
  void set(std::size_t r, std::size_t c, const Rational& v) {
    if (v != 0) rows_[r][c] = v;
  }
  const Rational& rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

 private:
  std::vector<Row> rows_;
  std::size_t cols_;
};

struct Simplex {
  Tableau tab;
  std::vector<Rational> cost;  // reduced costs, last entry = -objective value
  std::vector<std::size_t> basis;
  Budget* budget = nullptr;

  void pivot(std::size_t r, std::size_t c) {
    auto& pivot_row = tab.row(r);
    Rational inv = 1 / pivot_row.at(c);
    for (auto& [j, v] : pivot_row) v *= inv;
    Rational factor;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (i == r) continue;
      auto& target = tab.row(i);
      auto hit = target.find(c);
      if (hit == target.end()) continue;
      if (budget && i % 32 == 0) budget->check();
      factor = hit->second;
      for (const auto& [j, v] : pivot_row) {
        auto it = target.try_emplace(j).first;
        it->second -= factor * v;
        if (it->second == 0) target.erase(it);
      }
    }
    if (cost[c] != 0) {
      factor = cost[c];
      for (const auto& [j, v] : pivot_row) cost[j] -= factor * v;
    }
    basis[r] = c;
  }

  // Returns false when unbounded.
  bool optimize(std::size_t allowed_cols) {
    for (;;) {
      if (budget) budget->check();
      std::size_t entering = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (cost[j] < 0) {
          entering = j;
          break;
        }
      if (entering == allowed_cols) return true;

      std::size_t leaving = tab.rows();
      Rational best_ratio;
      for (std::size_t i = 0; i < tab.rows(); ++i) {
        const Rational& a = tab.at(i, entering);
        if (a <= 0) continue;
        Rational ratio = tab.rhs(i) / a;
        if (leaving == tab.rows() || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving == tab.rows()) return false;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

std::string LinearProgram::to_text() const {
  std::ostringstream out;
  out << "minimize: " << objective.to_string() << "\n";
  out << "subject to:\n";
  for (std::size_t i = 0; i < constraints.size(); ++i)
    out << "  c" << i << ": " << constraints[i].to_string() << " >= 0\n";
  out << "bounds:";
  for (std::size_t i = 0; i < variables.size(); ++i)
    out << (i ? ", " : " ") << "t" << variables[i].value;
  out << " >= 0\n";
  return out.str();
}

LpSolution solve(const LinearProgram& lp, Budget* budget) {
  std::map<ThetaId, std::size_t> column;
  for (const auto& v : lp.variables) column.try_emplace(v, column.size());
  const std::size_t nx = column.size();
  auto col_of = [&](ThetaId id) {
    auto it = column.find(id);
    if (it == column.end())
      throw UsageError("LP references undeclared variable t" + std::to_string(id.value));
    return it->second;
  };

  const std::size_t m = lp.constraints.size();
  std::vector<bool> needs_artificial(m);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    needs_artificial[i] = lp.constraints[i].constant() < 0;
    if (needs_artificial[i]) ++n_art;
  }
  const std::size_t slack0 = nx;
  const std::size_t art0 = nx + m;
  const std::size_t ncols = nx + m + n_art;

  // Initial nonzeros plus the dense cost row; fill-in is not tracked.
  std::size_t cells = ncols + 1;
  for (const auto& e : lp.constraints) cells += e.coefficients().size() + 3;
  const std::size_t bytes = cells * (sizeof(Rational) + 48);
  if (budget) budget->charge(bytes);
  struct Release {
    Budget* b;
    std::size_t n;
    ~Release() {
      if (b) b->release(n);
    }
  } release{budget, bytes};

  Simplex sx{Tableau(m, ncols), std::vector<Rational>(ncols + 1), std::vector<std::size_t>(m), budget};

  // a.x + c >= 0  <=>  a.x - s = -c.
  std::size_t art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const AffineExpr& e = lp.constraints[i];
    if (needs_artificial[i]) {
      for (const auto& [id, a] : e.coefficients()) sx.tab.set(i, col_of(id), a);
      sx.tab.set(i, slack0 + i, -1);
      sx.tab.set(i, ncols, -e.constant());
      sx.tab.set(i, art, 1);
      sx.basis[i] = art++;
    } else {
      for (const auto& [id, a] : e.coefficients()) sx.tab.set(i, col_of(id), -a);
      sx.tab.set(i, slack0 + i, 1);
      sx.tab.set(i, ncols, e.constant());
      sx.basis[i] = slack0 + i;
    }
  }
  for (const auto& [id, c] : lp.objective.coefficients()) (void)col_of(id);

  LpSolution solution;
  if (n_art > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!needs_artificial[i]) continue;
      for (const auto& [j, v] : sx.tab.row(i))
        if (j < art0 || j == ncols) sx.cost[j] -= v;
    }
    sx.optimize(ncols);
    if (sx.cost[ncols] != 0) {
      solution.status = LpStatus::infeasible;
      return solution;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (sx.basis[i] < art0) continue;
      const auto& row = sx.tab.row(i);
      if (!row.empty() && row.begin()->first < art0) sx.pivot(i, row.begin()->first);
    }
  }

  std::fill(sx.cost.begin(), sx.cost.end(), Rational(0));
  for (const auto& [id, c] : lp.objective.coefficients()) sx.cost[col_of(id)] = c;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t b = sx.basis[i];
    if (b >= art0 || sx.cost[b] == 0) continue;
    Rational f = sx.cost[b];
    for (const auto& [j, v] : sx.tab.row(i)) sx.cost[j] -= f * v;
  }
  if (!sx.optimize(art0)) {
    solution.status = LpStatus::unbounded;
    return solution;
  }

  solution.status = LpStatus::optimal;
  solution.value = -sx.cost[ncols] + lp.objective.constant();
  for (const auto& [id, j] : column) solution.assignment[id] = 0;
  std::vector<ThetaId> by_column(nx);
  for (const auto& [id, j] : column) by_column[j] = id;
  for (std::size_t i = 0; i < m; ++i)
    if (sx.basis[i] < nx) solution.assignment[by_column[sx.basis[i]]] = sx.tab.rhs(i);
  return solution;
}

}  // namespace fpnc
