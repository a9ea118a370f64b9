#pragma once

// Accepting-lasso search on the region automaton: counting-construction
// degeneralization of the generalized Buchi family (state- and edge-based
// members), nested depth-first emptiness, and a deterministic lasso
// enumerator used for backtracking when a candidate fails downstream
// timing feasibility.

#include "sitl/region.hpp"

#include <functional>
#include <optional>

namespace sitl {

struct Lasso {
  // states[0] = q0; edges[j] runs states[j] -> states[j+1], the last edge
  // wraps to states[prefix_len].  prefix = states[0..prefix_len-1].
  std::vector<size_t> states;
  std::vector<size_t> edges;
  size_t prefix_len = 0;

  size_t suffix_len() const { return states.size() - prefix_len; }
  std::string to_json(const RegionAutomaton& ra, const Tst& tst) const;
};

struct DegGraph {
  struct Node {
    size_t ra_state;
    size_t idx;      // acceptance counter copy
    bool pseudo;     // inserted midpoint of a wrap edge; accepting
    size_t in_src = SIZE_MAX;  // pseudo only: the wrap edge's source node
    size_t in_edge = SIZE_MAX; // pseudo only: the wrap edge's ra edge id
  };
  std::vector<Node> nodes;
  // adjacency: (target node, ra edge id or SIZE_MAX for pseudo exits)
  std::vector<std::vector<std::pair<size_t, size_t>>> adj;
  std::vector<bool> accepting;
  size_t root = 0;
  size_t members = 0;      // non-trivial acceptance members
  bool unrealizable = false; // an acceptance member is empty
};

// Counting construction over the non-trivial members of ra.acceptance.
// Members covering every reachable state and edge are dropped (always
// satisfied); an empty member marks the automaton unrealizable.
DegGraph degeneralize(const RegionAutomaton& ra);

// True when the degeneralized graph has no reachable accepting cycle.
bool ndfs_empty(const DegGraph& g);

// Language-emptiness verdict with the progressiveness criterion: a reachable
// strongly connected component must contain an accepting wrap edge, must let
// time advance, and every clock must either be reset inside it or sit beyond
// its largest constant throughout.  Sound and complete for the existence of
// a non-Zeno accepting run (exactly periodic witnesses may need the region
// cycle unrolled, which the plan-level search does separately).
bool ra_nonempty(const RegionAutomaton& ra, const Tst& tst, bool require_y_output);

// The lasso with the same prefix whose suffix cycle is traversed
// `suffix_loops` times, with `pre_loops` extra traversals appended to the
// prefix first (used to find exactly recurrent timings).
Lasso pump_lasso(const RegionAutomaton& ra, const Lasso& base, size_t pre_loops,
                 size_t suffix_loops);

// Structural sanity of a lasso against its automaton (connectivity, the
// wrap edge, acceptance hits in the suffix).  Throws on violation.
void check_lasso(const RegionAutomaton& ra, const Lasso& lasso);

class LassoEnumerator {
public:
  LassoEnumerator(const RegionAutomaton& ra, const Tst& tst,
                  bool require_y_output, size_t bound = 1000);

  // Next unseen lasso in the fixed order: pass one yields the BFS-shortest
  // cycle through each wrap edge, pass two enumerates DFS cycles with
  // bounded node repeats.  nullopt when exhausted or the bound was hit
  // (bound_hit() tells which).
  std::optional<Lasso> next();
  bool bound_hit() const { return bound_hit_; }
  bool unrealizable() const { return deg_.unrealizable; }
  const DegGraph& graph() const { return deg_; }
  const std::vector<char>& reachable() const { return reachable_; }
  const std::vector<char>& allowed_root_edges() const { return allowed_root_edge_; }

private:
  std::optional<Lasso> assemble(const std::vector<size_t>& cycle_nodes,
                                const std::vector<size_t>& cycle_edges);
  void dfs_pass();

  const RegionAutomaton& ra_;
  DegGraph deg_;
  std::vector<char> allowed_root_edge_; // gamma(delta0) entails y filter
  std::vector<size_t> wrap_nodes_;      // pseudo nodes in deterministic order
  size_t phase_ = 0;                    // index into wrap_nodes_ for pass one
  std::vector<Lasso> queue_;            // pass-two results, drained in order
  size_t queue_pos_ = 0;
  bool dfs_done_ = false;
  size_t emitted_ = 0;
  size_t bound_;
  bool bound_hit_ = false;
  std::set<std::string> seen_;
  std::vector<char> reachable_;
};

// First lasso accepted by `validate` (e.g. exact timing feasibility); None
// when none exists within the enumeration bound.
std::optional<Lasso> find_lasso(const RegionAutomaton& ra, const Tst& tst,
                                bool require_y_output,
                                const std::function<bool(const Lasso&)>& validate,
                                size_t bound = 1000, bool* bound_flag = nullptr);

} // namespace sitl
