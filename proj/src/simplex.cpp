#include "sitl/simplex.hpp"

#include <stdexcept>

namespace sitl {

void LinearProgram::add_eq(std::vector<Rat> row, Rat rhs) {
  row.resize(n, Rat(0));
  eq_lhs.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

void LinearProgram::add_le(std::vector<Rat> row, Rat rhs) {
  row.resize(n, Rat(0));
  le_lhs.push_back(std::move(row));
  le_rhs.push_back(std::move(rhs));
}

namespace {

// Dense tableau simplex.  Columns: structural vars, slacks, artificials,
// then rhs.  Bland's rule guarantees termination with exact arithmetic.
struct Tableau {
  size_t rows, cols; // cols includes rhs
  std::vector<std::vector<Rat>> t;
  std::vector<size_t> basis; // basis[r] = column basic in row r

  Tableau(size_t r, size_t c) : rows(r), cols(c), t(r, std::vector<Rat>(c, Rat(0))), basis(r) {}

  void pivot(size_t pr, size_t pc) {
    Rat inv = t[pr][pc];
    for (auto& v : t[pr]) v /= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == pr || t[r][pc] == 0) continue;
      Rat f = t[r][pc];
      for (size_t c = 0; c < cols; ++c) t[r][c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  }

  // maximize objective obj (length cols-1); returns false when unbounded
  bool run(std::vector<Rat>& obj, Rat& value) {
    // reduced costs row maintained separately
    while (true) {
      // price out basic columns
      std::vector<Rat> red = obj;
      Rat val = 0;
      for (size_t r = 0; r < rows; ++r) {
        size_t bc = basis[r];
        if (obj[bc] == 0) continue;
        Rat f = obj[bc];
        for (size_t c = 0; c + 1 < cols + 1 && c < red.size(); ++c)
          red[c] -= f * t[r][c];
        val += f * t[r][cols - 1];
      }
      // entering: smallest index with positive reduced cost (Bland)
      size_t enter = cols;
      for (size_t c = 0; c + 1 < cols; ++c)
        if (red[c] > 0) { enter = c; break; }
      if (enter == cols) { value = val; return true; }
      // leaving: min ratio, tie-break smallest basis column (Bland)
      size_t leave = rows;
      Rat best;
      for (size_t r = 0; r < rows; ++r) {
        if (t[r][enter] <= 0) continue;
        Rat ratio = t[r][cols - 1] / t[r][enter];
        if (leave == rows || ratio < best ||
            (ratio == best && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows) return false; // unbounded
      pivot(leave, enter);
    }
  }
};

} // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const size_t n = lp.n;
  const size_t m_eq = lp.eq_lhs.size(), m_le = lp.le_lhs.size();
  const size_t m = m_eq + m_le;
  const size_t n_slack = m_le;
  // one artificial per row keeps phase 1 uniform
  const size_t n_art = m;
  const size_t cols = n + n_slack + n_art + 1;

  Tableau tab(m, cols);
  for (size_t r = 0; r < m_eq; ++r) {
    for (size_t c = 0; c < n; ++c) tab.t[r][c] = lp.eq_lhs[r][c];
    tab.t[r][cols - 1] = lp.eq_rhs[r];
  }
  for (size_t r = 0; r < m_le; ++r) {
    size_t rr = m_eq + r;
    for (size_t c = 0; c < n; ++c) tab.t[rr][c] = lp.le_lhs[r][c];
    tab.t[rr][n + r] = 1; // slack
    tab.t[rr][cols - 1] = lp.le_rhs[r];
  }
  // nonnegative rhs
  for (size_t r = 0; r < m; ++r) {
    if (tab.t[r][cols - 1] < 0)
      for (size_t c = 0; c < cols; ++c) tab.t[r][c] = -tab.t[r][c];
  }
  for (size_t r = 0; r < m; ++r) {
    tab.t[r][n + n_slack + r] = 1;
    tab.basis[r] = n + n_slack + r;
  }

  // phase 1: maximize -sum(artificials)
  {
    std::vector<Rat> obj(cols - 1, Rat(0));
    for (size_t c = n + n_slack; c < n + n_slack + n_art; ++c) obj[c] = -1;
    Rat v;
    if (!tab.run(obj, v)) throw std::logic_error("phase 1 unbounded");
    if (v != 0) return {LpResult::Status::Infeasible, Rat(0), {}};
    // drive leftover artificials out of the basis where possible
    for (size_t r = 0; r < m; ++r) {
      if (tab.basis[r] < n + n_slack) continue;
      size_t pc = cols;
      for (size_t c = 0; c < n + n_slack; ++c)
        if (tab.t[r][c] != 0) { pc = c; break; }
      if (pc != cols) tab.pivot(r, pc);
      // else: redundant row, harmless to keep
    }
  }

  // phase 2: forbid artificials re-entering by zeroing their columns
  for (size_t r = 0; r < m; ++r)
    for (size_t c = n + n_slack; c < n + n_slack + n_art; ++c)
      if (tab.basis[r] != c) tab.t[r][c] = 0;

  std::vector<Rat> obj(cols - 1, Rat(0));
  for (size_t c = 0; c < n && c < lp.objective.size(); ++c) obj[c] = lp.objective[c];
  Rat value;
  if (!tab.run(obj, value)) return {LpResult::Status::Unbounded, Rat(0), {}};

  LpResult res;
  res.status = LpResult::Status::Optimal;
  res.value = value;
  res.x.assign(n, Rat(0));
  for (size_t r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.t[r][cols - 1];
  return res;
}

} // namespace sitl
