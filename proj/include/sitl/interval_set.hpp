#pragma once

// Finite unions of rational intervals with open/closed endpoints, exact.
// Backbone of the continuous-time MITL evaluator: each subformula's truth
// set is one of these over a bounded horizon.

#include "sitl/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sitl {

struct Iv {
  Rat lo, hi;
  bool lo_open = false, hi_open = false;
  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  bool contains(const Rat& t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && lo_open) return false;
    if (t == hi && hi_open) return false;
    return true;
  }
};

class IntervalSet {
public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Iv> parts) { for (auto& p : parts) add(p); }

  static IntervalSet whole(const Rat& lo, const Rat& hi) {
    IntervalSet s;
    s.add({lo, hi, false, false});
    return s;
  }

  void add(const Iv& iv); // union with one interval, keeps normal form
  bool contains(const Rat& t) const;
  bool empty() const { return parts_.empty(); }
  const std::vector<Iv>& parts() const { return parts_; }

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  // Complement within [lo, hi] (closed container).
  IntervalSet complement(const Rat& lo, const Rat& hi) const;

  std::string str() const;

private:
  std::vector<Iv> parts_; // sorted, disjoint, non-mergeable
};

// {t : exists w in (t+lo, t+hi> with w in s}; window right endpoint closed
// iff win_hi_closed; win_hi absent means unbounded.  Window left end is
// always open at offset win_lo (the temporal-operator shape this project
// needs: intervals with left endpoint 0, plus (0,inf)).
IntervalSet shift_window(const IntervalSet& s, const Rat& win_hi, bool win_hi_closed);
IntervalSet shift_window_unbounded(const IntervalSet& s);

// Strict-until truth set over exact sets: {t : exists w > t, w in rhs,
// (t,w) subset of lhs}.  `horizon_open`: when a coverage stretch of lhs
// touches `horizon`, treat coverage as continuing past it (used by the
// optimistic pass and by the periodic wrap rule, see semantics.cpp).
IntervalSet until_set(const IntervalSet& lhs, const IntervalSet& rhs,
                      const Rat& horizon, bool optimistic_at_horizon);

} // namespace sitl
