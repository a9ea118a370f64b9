#pragma once

// Operations O1-O5: predicate-feasibility pruning of the compiled
// transducer, alignment against the timed abstraction, and the guard
// strengthening that grafts the abstraction clock onto every transition.

#include "sitl/abstraction.hpp"
#include "sitl/predicates.hpp"
#include "sitl/tst.hpp"

namespace sitl {

struct PruneReport {
  struct Removal {
    std::string what; // "state 3" / "transition 7"
    std::string label;
    std::string verdict; // oracle certificate or failed-entailment reason
  };
  std::vector<Removal> removed_states;
  std::vector<Removal> removed_transitions;
  std::vector<std::string> unknown_kept; // labels kept under Unknown
  std::vector<std::string> guard_log;    // O5 strengthening notes
  std::string to_json() const;
};

// O1 + O2: drop states and transitions whose predicate-side input label is
// provably unsatisfiable (Unknown keeps the item, logged).
Tst o1_o2(const Tst& tst, const PropPredMap& map, const FeasibilityOracle& oracle,
          PruneReport& report);

// O3 + O4: drop transitions without an abstraction counterpart (matching
// source/target labels through Pr with the transition-label entailment) and
// initial transitions whose labels x0 violates (both the target state label
// and the transition's own label).
Tst o3_o4(const Tst& tst_phi, const TstS& tsts, const PropPredMap& map,
          const FeasibilityOracle& oracle, PruneReport& report);

// O5: add the abstraction clock, conjoin every remaining transition's guard
// with its matched abstraction guard (weakest guard on ambiguity, logged),
// and reset the new clock on every transition including the initial ones.
Tst o5(const Tst& tst_m, const TstS& tsts, const PropPredMap& map,
       const FeasibilityOracle& oracle, PruneReport& report);

// True when some acceptance member lost all its items (specification
// unrealizable for this abstraction; report instead of searching).
bool acceptance_emptied(const Tst& before, const Tst& after);

} // namespace sitl
