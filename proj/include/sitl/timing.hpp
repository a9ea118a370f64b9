#pragma once

// Exact timing of a region lasso: affine constraints over the step durations
// tau_1..tau_{p+s} and the Zeno margin eps, solved by rational simplex with
// eps maximized.  The emission covers the per-step case split (guard
// equalities, pinned regions, interval bounds) plus everything exact replay
// needs: all guard atoms, target-region membership and fraction ordering
// for non-reset clocks, invariant bounds over each dwell, tau_j >= eps, and
// exact suffix recurrence of the clock valuation at the loop point.

#include "sitl/region.hpp"
#include "sitl/search.hpp"

#include <optional>
#include <string>

namespace sitl {

// Per-clock backward window of non-resetting steps before a lasso edge.
struct ClockHistory {
  // window[j][o]: indices i with tau_i contributing to clock o's value at
  // the firing of lasso edge j (i.e. steps since the last reset).
  std::vector<std::vector<std::vector<size_t>>> window;
  static ClockHistory build(const Tst& tst, const RegionAutomaton& ra,
                            const Lasso& lasso);
};

enum class StepCase { GuardEquality, PinnedRegion, Interval };

StepCase classify_step(const Tst& tst, const RegionAutomaton& ra,
                       const Lasso& lasso, size_t j);

struct LinConstraint {
  enum class Kind { Eq, Le };
  Kind kind = Kind::Le;
  std::vector<Rat> tau_coef; // index i -> tau_{i+1}
  Rat eps_coef;
  Rat rhs;
  std::string note;
};

struct TimingProblem {
  size_t steps = 0; // p+s
  std::vector<LinConstraint> constraints;
  Rat eps_cap = 1;
  std::string dump() const;
};

TimingProblem emit_constraints(const Tst& tst, const RegionAutomaton& ra,
                               const Lasso& lasso, const Rat& eps_cap = Rat(1));

struct TimingSolution {
  std::vector<Rat> tau; // tau[0] = 0, then tau_1..tau_{p+s}
  Rat eps;
  std::vector<Rat> cumulative; // T_j = sum_{k<=j} tau_k
  std::string to_json() const;
};

// Exact solve; nullopt when infeasible or the best margin is not positive.
std::optional<TimingSolution> solve_timing(const TimingProblem& p);

// Replays the solution as a concrete timed run along the lasso; throws
// std::logic_error when any guard, invariant, region, or the exact suffix
// periodicity is violated.  Two periods of the suffix are replayed.
void replay_timing(const Tst& tst, const RegionAutomaton& ra, const Lasso& lasso,
                   const TimingSolution& sol);

// Composite feasibility check used by the search layer.
bool lasso_realizable(const Tst& tst, const RegionAutomaton& ra, const Lasso& lasso,
                      TimingSolution* out = nullptr, const Rat& eps_cap = Rat(1));

} // namespace sitl
