#pragma once

// Timed abstraction of the controlled system: one uniquely labeled state per
// element of the predicate-side label alphabet of the compiled transducer,
// interval-guarded transitions backed by controller capabilities, and the
// accept/refuse check for timed plans.

#include "sitl/formula.hpp"
#include "sitl/predicates.hpp"
#include "sitl/tst.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sitl {

struct TimedPlan; // plan.hpp

struct IntervalGuard {
  Rat lo, hi;
  bool lo_closed = true, hi_closed = true;
  bool admits(const Rat& tau) const {
    if (tau < lo || (tau == lo && !lo_closed)) return false;
    if (tau > hi || (tau == hi && !hi_closed)) return false;
    return true;
  }
  std::string str() const {
    return (lo_closed ? "[" : "(") + rat_str(lo) + "," + rat_str(hi) +
           (hi_closed ? "]" : ")");
  }
};

struct TstsTransition {
  size_t src, dst;
  IntervalGuard guard;
  bool label_is_target; // first contract case: label = target state's label
  std::string controller;
};

struct TstS {
  std::vector<BcPtr> labels;    // predicate-side, pairwise inequivalent
  std::vector<size_t> initial;  // states whose label x0 satisfies
  std::vector<TstsTransition> transitions;

  const BcPtr& transition_label(const TstsTransition& t) const {
    return t.label_is_target ? labels[t.dst] : labels[t.src];
  }
  std::string dot() const;
};

// E := deduplicated predicate-side labels of the compiled transducer's
// states and transitions (mutual-entailment dedup via the oracle).
std::vector<BcPtr> label_alphabet(const Tst& tst_phi, const PropPredMap& map,
                                  const FeasibilityOracle& oracle);

struct AbstractionConfig {
  enum class Strategy { DeclaredComplete, DeclaredList, IntegratorChecked };
  Strategy strategy = Strategy::DeclaredComplete;
  IntervalGuard guard{Rat(1), Rat(4), true, true}; // global default
  bool include_self_loops = true;
  Rat u_max = 1;
  // declared-list entries: (source label text, target label text, guard)
  struct ListEntry {
    std::string src, dst;
    IntervalGuard guard;
  };
  std::vector<ListEntry> list;

  static AbstractionConfig from_json(const std::string& text);
};

TstS build_abstraction(const std::vector<BcPtr>& alphabet,
                       const FeasibilityOracle& oracle,
                       const AbstractionConfig& config);

struct PlanCheck {
  bool accepted = false;
  std::string reason;            // refusal reason, empty when accepted
  size_t violation_index = 0;    // first violated plan step
  std::vector<size_t> state_seq; // abstraction run, one state per entry
  std::vector<size_t> trans_seq; // transitions taken at T_1.. (one period)
};

// Runs the abstraction over a predicate-side plan: the run starts in the
// state matching the first interval label (must be initial), each later
// instant is a discrete step whose guard admits the step duration and whose
// transition label entails the plan's instant label.
PlanCheck check_plan(const TstS& tsts, const TimedPlan& plan,
                     const FeasibilityOracle& oracle);

} // namespace sitl
