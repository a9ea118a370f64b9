#pragma once

// Timed signal transducer data model: locations with invariants and
// input/output labels, guarded resetting transitions (also labeled on both
// sides), and a generalized Buchi acceptance family over states and
// transitions.  The initial state s0 lives outside the location set; every
// run starts with a discrete step from it at time 0.

#include "sitl/bc.hpp"
#include "sitl/rational.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace sitl {

enum class Rel { Lt, Le, Eq, Ge, Gt };

const char* rel_str(Rel r);
bool rel_eval(const Rat& lhs, Rel r, const Rat& rhs);

struct ClockAtom {
  size_t clock;
  Rel rel;
  Rat k; // nonnegative
};

// Conjunction of atoms; empty list is true.
struct ClockConstraint {
  std::vector<ClockAtom> atoms;
  bool is_true() const { return atoms.empty(); }
  static ClockConstraint top() { return {}; }
  static ClockConstraint single(size_t clock, Rel r, Rat k) {
    return {{ClockAtom{clock, r, std::move(k)}}};
  }
  ClockConstraint conj(const ClockConstraint& o) const {
    ClockConstraint r = *this;
    r.atoms.insert(r.atoms.end(), o.atoms.begin(), o.atoms.end());
    return r;
  }
  bool eval(const std::vector<Rat>& clocks) const {
    for (auto& a : atoms)
      if (!rel_eval(clocks[a.clock], a.rel, a.k)) return false;
    return true;
  }
  std::string str(const std::vector<std::string>& clock_names) const;
};

constexpr int kInitialState = -1; // transition source marker for s0

struct TstState {
  ClockConstraint invariant;
  BcPtr in_label;   // lambda(s), over inputs
  BcPtr out_label;  // gamma(s), over outputs
  std::string note; // provenance, for DOT dumps and deterministic ordering
};

struct TstTransition {
  int src = kInitialState; // kInitialState or state index
  int dst = 0;             // state index
  ClockConstraint guard;
  uint64_t reset = 0;      // bit i set: clock i := 0
  BcPtr in_label;
  BcPtr out_label;
};

struct AcceptSet {
  std::set<size_t> states;
  std::set<size_t> transitions;
  bool contains_state(size_t s) const { return states.count(s) > 0; }
  bool contains_transition(size_t t) const { return transitions.count(t) > 0; }
  bool empty() const { return states.empty() && transitions.empty(); }
};

struct Tst {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> clocks;
  std::vector<TstState> states;
  std::vector<TstTransition> transitions;
  std::vector<AcceptSet> acceptance;

  size_t add_state(TstState s) {
    states.push_back(std::move(s));
    return states.size() - 1;
  }
  size_t add_transition(TstTransition t) {
    transitions.push_back(std::move(t));
    return transitions.size() - 1;
  }

  std::vector<size_t> initial_transitions() const;
  // Largest constant comparing each clock anywhere (guards + invariants).
  std::vector<Rat> clock_max_constants() const;

  // Structural well-formedness; throws std::logic_error with a reason.
  void validate() const;

  // Drop states/transitions with propositionally false labels, then drop
  // everything unreachable from s0; acceptance sets are remapped.  Returns
  // the number of removed items.
  size_t cleanup();

  std::string dot() const;
  std::string to_json() const;
};

// Multiply all clock constants by the global least common denominator so
// region construction sees integers; returns the scale factor applied.
BigInt normalize_constants(Tst& t);

} // namespace sitl
