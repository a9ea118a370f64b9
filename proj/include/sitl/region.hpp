#pragma once

// Clock regions (Alur-Dill equivalence classes) and the region automaton of
// the hybrid transition relation: delay within the source invariant, then a
// guarded resetting jump.  Constants must be integers (normalize_constants).

#include "sitl/tst.hpp"

#include <map>
#include <string>
#include <vector>

namespace sitl {

struct ClockRegion {
  // per clock: integer part 0..cmax, or -1 for "beyond max"
  std::vector<int> ip;
  // per clock: fraction is exactly zero (meaningful when ip >= 0)
  std::vector<bool> frac_zero;
  // increasing groups of clocks with equal positive fraction
  std::vector<std::vector<size_t>> order;

  bool operator==(const ClockRegion& o) const {
    return ip == o.ip && frac_zero == o.frac_zero && order == o.order;
  }
  std::string key() const;
  std::string pretty(const std::vector<std::string>& clock_names) const;

  bool beyond(size_t c) const { return ip[c] < 0; }
  bool is_boundary() const { // some finite clock sits exactly on an integer
    for (size_t c = 0; c < ip.size(); ++c)
      if (ip[c] >= 0 && frac_zero[c]) return true;
    return false;
  }
  bool all_beyond() const {
    for (int v : ip)
      if (v >= 0) return false;
    return true;
  }

  // Uniform truth of an atom over the region (constants integral).
  bool satisfies_atom(const ClockAtom& a) const;
  bool satisfies(const ClockConstraint& cc) const;

  ClockRegion apply_reset(uint64_t reset) const;
  ClockRegion time_successor(const std::vector<Rat>& cmax) const;

  // A concrete valuation inside the region (fractions spread uniformly).
  std::vector<Rat> representative(const std::vector<Rat>& cmax) const;
};

ClockRegion region_of(const std::vector<Rat>& valuation, const std::vector<Rat>& cmax);
ClockRegion zero_region(size_t clocks);

// Fire-candidate chain per the spec contract: empty when the region itself
// violates the invariant; otherwise the region followed by every region
// reachable by pure elapse while the invariant holds at all intermediate
// points (boundary regions may appear as final fire points even when they
// violate the invariant, since the elapse interval is right-open).
std::vector<ClockRegion> time_successors(const ClockRegion& r,
                                         const ClockConstraint& inv,
                                         const std::vector<Rat>& cmax);

struct RaState {
  int tst_state; // kInitialState for q0
  ClockRegion region;
};

struct RaEdge {
  size_t src, dst;
  size_t transition; // index into the transducer's transition list
  // some realization of this edge dwells a positive time before firing
  bool advances_time = false;
};

struct RegionAutomaton {
  std::vector<RaState> states; // index 0 is q0
  std::vector<RaEdge> edges;
  std::vector<AcceptSet> acceptance; // lifted over RA states/edges
  std::vector<Rat> cmax;

  std::vector<std::vector<size_t>> out_edges; // by source state

  std::string dot(const Tst& tst) const;
};

RegionAutomaton build_ra(const Tst& tst);

// Standard region-count bound for sanity assertions.
BigInt region_count_bound(const std::vector<Rat>& cmax);

} // namespace sitl
