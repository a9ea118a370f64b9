#pragma once

// Exact-rational LP, two-phase primal simplex with Bland's rule.  Small and
// dense: the timing problems and feasibility checks here have tens of
// variables.  maximize c.x  s.t.  Aeq x = beq, Ale x <= ble, x >= 0.

#include "sitl/rational.hpp"

#include <optional>
#include <vector>

namespace sitl {

struct LinearProgram {
  size_t n = 0;                    // variables (all nonnegative)
  std::vector<std::vector<Rat>> eq_lhs;
  std::vector<Rat> eq_rhs;
  std::vector<std::vector<Rat>> le_lhs;
  std::vector<Rat> le_rhs;
  std::vector<Rat> objective;      // maximized

  void add_eq(std::vector<Rat> row, Rat rhs);
  void add_le(std::vector<Rat> row, Rat rhs);
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rat value;          // objective at optimum
  std::vector<Rat> x; // optimal point
};

LpResult solve_lp(const LinearProgram& lp);

} // namespace sitl
