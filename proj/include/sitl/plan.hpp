#pragma once

// Timed plans (the d_p / d_mu words), conversion between the proposition and
// predicate alphabets, the witness signal construction, and the controller
// schedule derived from an accepted abstraction run.

#include "sitl/abstraction.hpp"
#include "sitl/search.hpp"
#include "sitl/signal.hpp"
#include "sitl/timing.hpp"

namespace sitl {

struct PlanEntry {
  Rat t;          // T_j
  BcPtr instant;  // lambda(delta_j), holds exactly at T_j
  BcPtr interval; // lambda(s_{j+1}), holds on (T_j, T_{j+1})
};

struct TimedPlan {
  std::vector<PlanEntry> prefix; // entries 0..p
  std::vector<PlanEntry> suffix; // entries p+1..p+s, repeating with `period`
  Rat period;
  bool predicate_alphabet = false;

  Rat suffix_start() const { return prefix.back().t; } // T_p
  Rat end() const { return suffix.empty() ? prefix.back().t : suffix.back().t; }
  // Label active at time t (instant labels exactly at the T_j grid).
  BcPtr label_at(const Rat& t) const;
  const PlanEntry& entry(size_t j) const {
    return j < prefix.size() ? prefix[j] : suffix[j - prefix.size()];
  }
  size_t entries() const { return prefix.size() + suffix.size(); }

  std::string to_json() const;
  static TimedPlan from_json(const std::string& text);
};

// d_p from a lasso and its timings: instant labels from transition labels,
// interval labels from state labels, times from the cumulative solution.
// `time_scale` divides the (normalized) solution back into original units.
TimedPlan assemble_plan(const Tst& tst, const RegionAutomaton& ra,
                        const Lasso& lasso, const TimingSolution& timing,
                        const BigInt& time_scale);

// Leafwise Pr^-1 (or Pr when the plan already carries predicates).
TimedPlan to_predicate_plan(const TimedPlan& plan, const PropPredMap& map);
TimedPlan to_proposition_plan(const TimedPlan& plan, const PropPredMap& map);

// Witness signal: one oracle witness per plan label, predicates evaluated
// there, yielding a Boolean signal over the propositions (Lemma-2 shape).
BooleanSignal plan_to_signal(const TimedPlan& plan_mu, const PropPredMap& map,
                             const FeasibilityOracle& oracle);

struct ScheduleSegment {
  Rat t_start, t_end;          // window (t_start, t_end); [0, t_end) for the first
  std::string dwell_controller;
  BcPtr target_label;          // set the dash steers into (next interval label)
  std::string boundary_controller; // owner of the instant t_start
};

struct ControllerSchedule {
  std::vector<ScheduleSegment> prefix;  // covers [0, T_p]
  std::vector<ScheduleSegment> suffix;  // repeats with `period`
  Rat period;
  std::string to_json() const;
};

// Controller schedule from the plan and its accepted abstraction run; the
// boundary instant prefers the successor controller when both entailments
// hold.
ControllerSchedule schedule(const TimedPlan& plan_mu, const TstS& tsts,
                            const PlanCheck& run, const FeasibilityOracle& oracle);

} // namespace sitl
