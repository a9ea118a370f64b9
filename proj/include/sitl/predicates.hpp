#pragma once

// Geometric predicate definitions and the feasibility oracle: satisfiability,
// entailment, and witness extraction for Boolean combinations of predicates.
//
// Decision strategy per DNF conjunct, in order:
//   1. affine-only literals: exact rational LP (phase-1 simplex), negated
//      halfspaces handled with a strict-slack variable;
//   2. ball literals: exact certificates -- pairwise/same-map tests, zero
//      linear sign-combinations of the affine maps, closed-form ball-in-ball
//      containment -- plus exact witness attempts (stacked solve of L x = c,
//      weighted least squares);
//   3. deterministic grid-plus-jitter sampling inside the bounding box
//      (fixed per-query seed): Sat when a point validates, else Unknown.
// Every Sat verdict carries a witness re-checked by direct evaluation.

#include "sitl/bc.hpp"
#include "sitl/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sitl {

struct PredicateDef {
  enum class Kind { Halfspace, Ball };
  Kind kind = Kind::Halfspace;
  std::string name;
  // halfspace: a.x + b >= 0
  RatVec a;
  Rat b;
  // ball: eps - ||L x - c||_2 >= 0
  RatMat L;
  RatVec c;
  Rat eps;

  // h(x), exactness preserved: halfspace returns a.x + b; ball returns
  // eps^2 - ||Lx - c||^2 (same sign as eps - ||Lx - c|| since eps > 0).
  Rat margin(const RatVec& x) const;
  bool sat_at(const RatVec& x) const { return margin(x) >= 0; }
};

struct Box {
  RatVec lo, hi;
};

struct SatResult {
  enum class Verdict { Sat, Unsat, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::optional<RatVec> witness; // Sat only, validated
  std::string certificate;       // human-readable reason for Unsat/Sat
};

enum class Entail { Yes, No, Unknown };

struct EntailResult {
  Entail verdict = Entail::Unknown;
  std::optional<RatVec> witness; // No: point in f and not g
};

class PredicateSet {
public:
  size_t dimension = 0;
  std::optional<Box> box;
  RatVec x0;
  uint64_t seed = 1;

  void add(PredicateDef def);
  const PredicateDef& get(const std::string& name) const;
  bool has(const std::string& name) const { return defs_.count(name) > 0; }
  std::vector<std::string> names() const;

  bool eval_pred(const std::string& name, const RatVec& x) const {
    return get(name).sat_at(x);
  }
  // direct evaluation of a Boolean combination at a point
  bool eval_bc(const Bc& f, const RatVec& x) const;

  static PredicateSet from_json(const std::string& text);
  std::string to_json() const;

private:
  std::map<std::string, PredicateDef> defs_;
};

class FeasibilityOracle {
public:
  explicit FeasibilityOracle(const PredicateSet& set) : set_(set) {}

  SatResult sat(const Bc& f) const;
  EntailResult entails(const Bc& f, const Bc& g) const;
  RatVec witness(const Bc& f) const; // throws when sat(f) is not Sat
  bool semantically_equal(const Bc& f, const Bc& g) const;

  const PredicateSet& predicates() const { return set_; }

  // Counters for the Unknown log demanded by the pruning policy.
  mutable size_t unknown_count = 0;

private:
  SatResult sat_conjunct(const Conjunct& c) const;
  const PredicateSet& set_;
  mutable std::map<std::string, SatResult> cache_;
};

} // namespace sitl
