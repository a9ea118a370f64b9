#include "sitl/search.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "json.hpp"

namespace sitl {

std::vector<char> progressive_nodes(const DegGraph& g, const RegionAutomaton& ra,
                                    const Tst& tst, const std::vector<char>& reach,
                                    const std::vector<char>& root_ok);

namespace {

std::vector<char> reachable_states(const RegionAutomaton& ra) {
  std::vector<char> seen(ra.states.size(), 0);
  std::vector<size_t> work = {0};
  seen[0] = 1;
  while (!work.empty()) {
    size_t q = work.back();
    work.pop_back();
    for (size_t e : ra.out_edges[q]) {
      size_t d = ra.edges[e].dst;
      if (!seen[d]) {
        seen[d] = 1;
        work.push_back(d);
      }
    }
  }
  return seen;
}

} // namespace

DegGraph degeneralize(const RegionAutomaton& ra) {
  DegGraph g;
  auto reach = reachable_states(ra);

  // classify members: empty -> unrealizable; trivial (covers everything
  // reachable) -> dropped
  std::vector<const AcceptSet*> members;
  for (auto& f : ra.acceptance) {
    bool any = false, covers_all = true;
    for (size_t q = 0; q < ra.states.size(); ++q) {
      if (!reach[q]) continue;
      bool in = f.contains_state(q);
      any = any || in;
      if (!in && q != 0) covers_all = false; // q0 sits on no cycle
    }
    for (size_t e = 0; e < ra.edges.size(); ++e) {
      if (!reach[ra.edges[e].src]) continue;
      bool in = f.contains_transition(e);
      any = any || in;
      if (!in) covers_all = false;
    }
    if (!any) {
      g.unrealizable = true;
      return g;
    }
    if (!covers_all) members.push_back(&f);
  }
  const size_t k = members.size();
  g.members = k;

  // node (q, i); with k == 0 every edge wraps
  std::map<std::pair<size_t, size_t>, size_t> intern;
  std::vector<std::pair<size_t, size_t>> work;
  auto node_id = [&](size_t q, size_t i) {
    auto key = std::make_pair(q, i);
    auto it = intern.find(key);
    if (it != intern.end()) return it->second;
    size_t id = g.nodes.size();
    g.nodes.push_back({q, i, false});
    g.adj.emplace_back();
    g.accepting.push_back(false);
    intern.emplace(key, id);
    work.push_back(key);
    return id;
  };

  g.root = node_id(0, 0);
  size_t cursor = 0;
  while (cursor < work.size()) {
    auto [q, i] = work[cursor++];
    size_t src = intern[{q, i}];
    // deterministic edge order
    for (size_t e : ra.out_edges[q]) {
      size_t v = ra.edges[e].dst;
      bool hit;
      if (k == 0) {
        hit = true;
      } else {
        hit = members[i]->contains_state(q) || members[i]->contains_transition(e);
      }
      size_t ni = k == 0 ? 0 : (hit ? (i + 1) % k : i);
      bool wrap = hit && (k == 0 || i == k - 1);
      size_t dst = node_id(v, ni);
      if (wrap) {
        size_t mid = g.nodes.size();
        g.nodes.push_back({v, ni, true, src, e});
        g.adj.emplace_back();
        g.accepting.push_back(true);
        g.adj[src].emplace_back(mid, e);
        g.adj[mid].emplace_back(dst, SIZE_MAX);
      } else {
        g.adj[src].emplace_back(dst, e);
      }
    }
  }
  return g;
}

bool ndfs_empty(const DegGraph& g) {
  if (g.unrealizable || g.nodes.empty()) return true;
  // CVWY nested DFS with the stack-hit improvement, iterative.  The red
  // search runs at the postorder of every accepting node and looks for any
  // node still on the blue stack (cyan); red marks persist across searches.
  enum : char { WHITE = 0, CYAN = 1, BLUE = 2, RED = 3 };
  std::vector<char> color(g.nodes.size(), WHITE);

  std::vector<std::pair<size_t, size_t>> stack; // (node, next edge index)
  auto red_search = [&](size_t from) -> bool {
    std::vector<size_t> rs;
    for (auto& [v, e] : g.adj[from]) rs.push_back(v);
    while (!rs.empty()) {
      size_t u = rs.back();
      rs.pop_back();
      if (color[u] == CYAN) return true; // blue stack hit: accepting cycle
      if (color[u] != BLUE) continue;    // red already, or not yet explored
      color[u] = RED;
      for (auto& [v, e] : g.adj[u]) rs.push_back(v);
    }
    return false;
  };

  stack.emplace_back(g.root, 0);
  color[g.root] = CYAN;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    if (next < g.adj[u].size()) {
      size_t v = g.adj[u][next].first;
      ++next;
      if (color[v] == WHITE) {
        color[v] = CYAN;
        stack.emplace_back(v, 0);
      }
    } else {
      size_t node = u;
      if (g.accepting[node] && red_search(node)) return false;
      color[node] = BLUE;
      stack.pop_back();
    }
  }
  return true;
}

void check_lasso(const RegionAutomaton& ra, const Lasso& l) {
  if (l.states.empty() || l.states.size() != l.edges.size())
    throw std::logic_error("lasso shape: need one edge per state");
  if (l.prefix_len == 0 || l.prefix_len >= l.states.size())
    throw std::logic_error("lasso needs nonempty prefix and suffix");
  if (l.states[0] != 0) throw std::logic_error("lasso must start at q0");
  for (size_t j = 0; j < l.edges.size(); ++j) {
    auto& e = ra.edges[l.edges[j]];
    size_t expect_dst = j + 1 < l.states.size() ? l.states[j + 1] : l.states[l.prefix_len];
    if (e.src != l.states[j] || e.dst != expect_dst)
      throw std::logic_error("lasso edge " + std::to_string(j) + " detached");
  }
  // every member hit within the suffix
  for (size_t m = 0; m < ra.acceptance.size(); ++m) {
    bool hit = false;
    for (size_t j = l.prefix_len; j < l.states.size() && !hit; ++j)
      hit = ra.acceptance[m].contains_state(l.states[j]);
    for (size_t j = l.prefix_len - 1; j < l.edges.size() && !hit; ++j)
      hit = ra.acceptance[m].contains_transition(l.edges[j]);
    if (!hit) {
      // empty members never get here: degeneralize reports them first
      bool member_empty = ra.acceptance[m].empty();
      if (!member_empty)
        throw std::logic_error("lasso suffix misses acceptance member " + std::to_string(m));
    }
  }
}

LassoEnumerator::LassoEnumerator(const RegionAutomaton& ra, const Tst& tst,
                                 bool require_y, size_t bound)
    : ra_(ra), bound_(bound) {
  deg_ = degeneralize(ra);
  reachable_.assign(deg_.nodes.size(), 1);
  if (deg_.unrealizable) return;

  // initial-edge filter: gamma(delta0) must entail the required output
  allowed_root_edge_.assign(ra.edges.size(), 1);
  if (require_y) {
    BcPtr want = Bc::lit(tst.outputs.at(0), true);
    for (size_t e = 0; e < ra.edges.size(); ++e) {
      if (ra.edges[e].src != 0) continue;
      auto& out = *tst.transitions[ra.edges[e].transition].out_label;
      allowed_root_edge_[e] = bc_taut_implies(out, *want) ? 1 : 0;
    }
  }

  // reachability under the root filter
  std::fill(reachable_.begin(), reachable_.end(), 0);
  std::vector<size_t> work;
  reachable_[deg_.root] = 1;
  work.push_back(deg_.root);
  while (!work.empty()) {
    size_t u = work.back();
    work.pop_back();
    for (auto& [v, e] : deg_.adj[u]) {
      if (u == deg_.root && e != SIZE_MAX && !allowed_root_edge_[e]) continue;
      if (!reachable_[v]) {
        reachable_[v] = 1;
        work.push_back(v);
      }
    }
  }

  // only wrap edges inside progressive components can carry a realizable
  // lasso; everything else would just burn feasibility checks
  auto mask = progressive_nodes(deg_, ra, tst, reachable_, allowed_root_edge_);
  for (size_t n = 0; n < deg_.nodes.size(); ++n)
    if (deg_.nodes[n].pseudo && reachable_[n] && mask[n]) wrap_nodes_.push_back(n);
}

std::optional<Lasso> LassoEnumerator::assemble(const std::vector<size_t>& cyc_nodes,
                                               const std::vector<size_t>& cyc_edges) {
  // BFS shortest path from root to any cycle node, honoring the root filter.
  std::vector<size_t> on_cycle_pos(deg_.nodes.size(), SIZE_MAX);
  for (size_t i = 0; i < cyc_nodes.size(); ++i)
    if (!deg_.nodes[cyc_nodes[i]].pseudo) on_cycle_pos[cyc_nodes[i]] = i;

  std::vector<std::pair<size_t, size_t>> parent(deg_.nodes.size(), {SIZE_MAX, SIZE_MAX});
  std::vector<char> vis(deg_.nodes.size(), 0);
  std::deque<size_t> bfs = {deg_.root};
  vis[deg_.root] = 1;
  size_t attach = SIZE_MAX;
  if (on_cycle_pos[deg_.root] != SIZE_MAX) attach = deg_.root;
  while (!bfs.empty() && attach == SIZE_MAX) {
    size_t u = bfs.front();
    bfs.pop_front();
    for (auto& [v, e] : deg_.adj[u]) {
      if (u == deg_.root && e != SIZE_MAX && !allowed_root_edge_[e]) continue;
      if (vis[v]) continue;
      vis[v] = 1;
      parent[v] = {u, e};
      if (on_cycle_pos[v] != SIZE_MAX) { attach = v; break; }
      bfs.push_back(v);
    }
  }
  if (attach == SIZE_MAX) return std::nullopt;

  // prefix edge list root -> attach; the attach node becomes the first
  // suffix state (the cycle re-enters it), so the prefix proper ends one
  // step earlier
  std::vector<size_t> prefix_edges;
  for (size_t v = attach; v != deg_.root; v = parent[v].first)
    prefix_edges.push_back(parent[v].second);
  std::reverse(prefix_edges.begin(), prefix_edges.end());

  // rotate the cycle to start at attach
  size_t start = on_cycle_pos[attach];
  std::vector<size_t> rot_edges;
  for (size_t i = 0; i < cyc_edges.size(); ++i)
    rot_edges.push_back(cyc_edges[(start + i) % cyc_edges.size()]);

  // project: drop pseudo hops (SIZE_MAX markers)
  Lasso l;
  l.states.push_back(0);
  for (size_t e : prefix_edges) {
    if (e == SIZE_MAX) continue;
    l.edges.push_back(e);
    l.states.push_back(ra_.edges[e].dst);
  }
  if (l.states.size() < 2) return std::nullopt; // attach must be reachable
  l.prefix_len = l.states.size() - 1;
  std::vector<size_t> suffix_edges;
  for (size_t e : rot_edges)
    if (e != SIZE_MAX) suffix_edges.push_back(e);
  if (suffix_edges.empty()) return std::nullopt;
  for (size_t i = 0; i < suffix_edges.size(); ++i) {
    l.edges.push_back(suffix_edges[i]);
    if (i + 1 < suffix_edges.size()) l.states.push_back(ra_.edges[suffix_edges[i]].dst);
  }
  if (l.prefix_len == 0 || l.prefix_len >= l.states.size() ||
      l.edges.size() != l.states.size())
    return std::nullopt;
  check_lasso(ra_, l);
  return l;
}

std::optional<Lasso> LassoEnumerator::next() {
  if (deg_.unrealizable) return std::nullopt;
  while (true) {
    if (emitted_ >= bound_) { bound_hit_ = true; return std::nullopt; }
    // pass one: shortest cycle through each wrap node
    if (phase_ < wrap_nodes_.size()) {
      size_t mid = wrap_nodes_[phase_++];
      size_t dst = deg_.adj[mid][0].first;
      size_t src = deg_.nodes[mid].in_src, ein = deg_.nodes[mid].in_edge;
      if (src == SIZE_MAX || !reachable_[src]) continue;
      // BFS dst -> src avoiding the root (q0 has no in-edges anyway)
      std::vector<std::pair<size_t, size_t>> parent(deg_.nodes.size(), {SIZE_MAX, SIZE_MAX});
      std::vector<char> vis(deg_.nodes.size(), 0);
      std::deque<size_t> bfs = {dst};
      vis[dst] = 1;
      bool found = (dst == src);
      while (!bfs.empty() && !found) {
        size_t u = bfs.front();
        bfs.pop_front();
        for (auto& [v, e] : deg_.adj[u]) {
          if (vis[v] || !reachable_[v]) continue;
          vis[v] = 1;
          parent[v] = {u, e};
          if (v == src) { found = true; break; }
          bfs.push_back(v);
        }
      }
      if (!found) continue;
      // path dst -> src along BFS parents (empty when dst == src)
      std::vector<size_t> path_nodes, path_edges;
      if (dst != src) {
        for (size_t v = src; v != dst; v = parent[v].first) {
          path_nodes.push_back(v);
          path_edges.push_back(parent[v].second);
        }
        std::reverse(path_nodes.begin(), path_nodes.end());
        std::reverse(path_edges.begin(), path_edges.end());
      }
      // cycle: src -ein-> mid -> dst -path...-> src, node list aligned with
      // the edge list (node i --edge i--> node i+1, last wraps to node 0)
      std::vector<size_t> nodes = {src, mid};
      std::vector<size_t> edges = {ein, deg_.adj[mid][0].second};
      if (dst != src) {
        nodes.push_back(dst);
        for (size_t i = 0; i + 1 < path_nodes.size(); ++i) nodes.push_back(path_nodes[i]);
        for (size_t e : path_edges) edges.push_back(e);
      }
      auto l = assemble(nodes, edges);
      if (!l) continue;
      std::string sig;
      for (size_t e : l->edges) sig += std::to_string(e) + ",";
      sig += "|" + std::to_string(l->prefix_len);
      if (!seen_.insert(sig).second) continue;
      ++emitted_;
      return l;
    }
    // pass two: bounded-repeat DFS cycle enumeration
    if (!dfs_done_) {
      dfs_pass();
      dfs_done_ = true;
    }
    while (queue_pos_ < queue_.size()) {
      Lasso l = queue_[queue_pos_++];
      std::string sig;
      for (size_t e : l.edges) sig += std::to_string(e) + ",";
      sig += "|" + std::to_string(l.prefix_len);
      if (!seen_.insert(sig).second) continue;
      ++emitted_;
      return l;
    }
    return std::nullopt;
  }
}

void LassoEnumerator::dfs_pass() {
  // Enumerate cycles through each wrap node with at most two visits per
  // node, depth-first in edge order; capped to keep worst cases bounded.
  const size_t step_cap = 2000000;
  size_t steps = 0;
  for (size_t mid : wrap_nodes_) {
    size_t dst = deg_.adj[mid][0].first;
    size_t src = deg_.nodes[mid].in_src, ein = deg_.nodes[mid].in_edge;
    if (src == SIZE_MAX || !reachable_[src]) continue;

    std::vector<int> visits(deg_.nodes.size(), 0);
    std::vector<size_t> node_path = {dst};
    std::vector<size_t> edge_path;
    // iterative DFS with explicit next-edge indices
    std::vector<size_t> next_edge = {0};
    visits[dst] = 1;
    while (!node_path.empty()) {
      if (++steps > step_cap) return;
      size_t u = node_path.back();
      if (u == src && edge_path.size() > 0) {
        // found dst ->* src: close the cycle src -ein-> mid -> dst
        std::vector<size_t> nodes = {src, mid};
        std::vector<size_t> edges = {ein, deg_.adj[mid][0].second};
        for (size_t i = 0; i + 1 < node_path.size(); ++i) {
          nodes.push_back(node_path[i]);
          edges.push_back(edge_path[i]);
        }
        nodes.resize(edges.size());
        if (auto l = assemble(nodes, edges)) queue_.push_back(*l);
        if (queue_.size() > bound_ * 4) return;
        // backtrack from src (do not extend through it)
        visits[u]--;
        node_path.pop_back();
        next_edge.pop_back();
        if (!edge_path.empty()) edge_path.pop_back();
        continue;
      }
      if (next_edge.back() < deg_.adj[u].size()) {
        auto [v, e] = deg_.adj[u][next_edge.back()++];
        if (!reachable_[v] || visits[v] >= 2 || v == deg_.root) continue;
        visits[v]++;
        node_path.push_back(v);
        next_edge.push_back(0);
        edge_path.push_back(e);
      } else {
        visits[u]--;
        node_path.pop_back();
        next_edge.pop_back();
        if (!edge_path.empty()) edge_path.pop_back();
      }
    }
  }
}

namespace {

// iterative Tarjan over the degeneralized graph, honoring the root filter
std::vector<int> scc_of(const DegGraph& g, const std::vector<char>& reachable,
                        const std::vector<char>& allowed_root_edge) {
  const size_t n = g.nodes.size();
  std::vector<int> comp(n, -1), low(n, 0), index(n, -1), on_stack(n, 0);
  std::vector<size_t> stack;
  int next_index = 0, next_comp = 0;
  struct Frame {
    size_t u;
    size_t next;
  };
  for (size_t start = 0; start < n; ++start) {
    if (index[start] != -1 || !reachable[start]) continue;
    std::vector<Frame> call = {{start, 0}};
    index[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!call.empty()) {
      auto& fr = call.back();
      if (fr.next < g.adj[fr.u].size()) {
        auto [v, e] = g.adj[fr.u][fr.next++];
        if (fr.u == g.root && e != SIZE_MAX && !allowed_root_edge.empty() &&
            !allowed_root_edge[e])
          continue;
        if (!reachable[v]) continue;
        if (index[v] == -1) {
          index[v] = low[v] = next_index++;
          stack.push_back(v);
          on_stack[v] = 1;
          call.push_back({v, 0});
        } else if (on_stack[v]) {
          low[fr.u] = std::min(low[fr.u], index[v]);
        }
      } else {
        size_t u = fr.u;
        call.pop_back();
        if (!call.empty()) call.back().next = call.back().next; // no-op
        if (!call.empty()) low[call.back().u] = std::min(low[call.back().u], low[u]);
        if (low[u] == index[u]) {
          while (true) {
            size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = next_comp;
            if (w == u) break;
          }
          ++next_comp;
        }
      }
    }
  }
  return comp;
}

} // namespace

// per-node flag: the node sits in a strongly connected component that can
// host a non-Zeno accepting run (accepting wrap edge, time advance, every
// clock reset inside or beyond-max throughout)
std::vector<char> progressive_nodes(const DegGraph& g, const RegionAutomaton& ra,
                                    const Tst& tst, const std::vector<char>& reach,
                                    const std::vector<char>& root_ok) {
  std::vector<char> out(g.nodes.size(), 0);
  if (g.nodes.empty()) return out;
  auto comp = scc_of(g, reach, root_ok);
  int max_comp = -1;
  for (int c : comp) max_comp = std::max(max_comp, c);
  if (max_comp < 0) return out;
  const size_t n_clocks = tst.clocks.size();
  struct CompInfo {
    bool has_cycle_edge = false;
    bool has_accepting = false;
    bool has_time = false;
    uint64_t resets = 0;
    std::vector<char> all_beyond;
  };
  std::vector<CompInfo> info(size_t(max_comp + 1));
  for (auto& ci : info) ci.all_beyond.assign(n_clocks, 1);
  for (size_t u = 0; u < g.nodes.size(); ++u) {
    if (!reach[u] || comp[u] < 0) continue;
    auto& ci = info[comp[u]];
    if (g.accepting[u]) ci.has_accepting = true;
    const ClockRegion& reg = ra.states[g.nodes[u].ra_state].region;
    for (size_t o = 0; o < n_clocks; ++o)
      if (!reg.beyond(o)) ci.all_beyond[o] = 0;
    for (auto& [v, e] : g.adj[u]) {
      if (!reach[v] || comp[v] != comp[u]) continue;
      ci.has_cycle_edge = true;
      if (e == SIZE_MAX) continue;
      ci.resets |= tst.transitions[ra.edges[e].transition].reset;
      if (ra.edges[e].advances_time) ci.has_time = true;
    }
  }
  std::vector<char> comp_ok(size_t(max_comp + 1), 0);
  for (size_t c = 0; c < info.size(); ++c) {
    auto& ci = info[c];
    if (!ci.has_cycle_edge || !ci.has_accepting || !ci.has_time) continue;
    bool progressive = true;
    for (size_t o = 0; o < n_clocks; ++o)
      if (!((ci.resets >> o) & 1) && !ci.all_beyond[o]) progressive = false;
    comp_ok[c] = progressive;
  }
  for (size_t u = 0; u < g.nodes.size(); ++u)
    if (reach[u] && comp[u] >= 0 && comp_ok[comp[u]]) out[u] = 1;
  return out;
}

bool ra_nonempty(const RegionAutomaton& ra, const Tst& tst, bool require_y) {
  LassoEnumerator en(ra, tst, require_y, 1); // reuse its filtered reachability
  if (en.unrealizable()) return false;
  auto mask = progressive_nodes(en.graph(), ra, tst, en.reachable(),
                                en.allowed_root_edges());
  for (size_t u = 0; u < mask.size(); ++u)
    if (mask[u] && en.graph().accepting[u]) return true;
  return false;
}

Lasso pump_lasso(const RegionAutomaton& ra, const Lasso& base, size_t pre_loops,
                 size_t suffix_loops) {
  if (suffix_loops == 0) throw std::invalid_argument("need at least one loop");
  Lasso l;
  std::vector<size_t> cycle(base.edges.begin() + base.prefix_len, base.edges.end());
  std::vector<size_t> all(base.edges.begin(), base.edges.begin() + base.prefix_len);
  for (size_t k = 0; k < pre_loops; ++k) all.insert(all.end(), cycle.begin(), cycle.end());
  size_t prefix_edges = all.size();
  for (size_t k = 0; k < suffix_loops; ++k) all.insert(all.end(), cycle.begin(), cycle.end());
  l.edges = all;
  l.states.push_back(0);
  for (size_t i = 0; i + 1 < all.size(); ++i) l.states.push_back(ra.edges[all[i]].dst);
  l.prefix_len = prefix_edges;
  check_lasso(ra, l);
  return l;
}

std::optional<Lasso> find_lasso(const RegionAutomaton& ra, const Tst& tst,
                                bool require_y,
                                const std::function<bool(const Lasso&)>& validate,
                                size_t bound, bool* bound_flag) {
  if (bound_flag) *bound_flag = false;
  if (!ra_nonempty(ra, tst, require_y)) return std::nullopt;
  LassoEnumerator en(ra, tst, require_y, bound);

  // exact recurrence needs every bounded clock reset somewhere on the cycle
  // (pumping repeats the same edges, so a miss disqualifies all variants),
  // and the cycle must let time advance
  auto cycle_plausible = [&](const Lasso& l) {
    uint64_t resets = 0;
    bool adv = false;
    std::vector<char> beyond_everywhere(tst.clocks.size(), 1);
    for (size_t j = l.prefix_len; j < l.states.size(); ++j) {
      const ClockRegion& reg = ra.states[l.states[j]].region;
      for (size_t o = 0; o < tst.clocks.size(); ++o)
        if (!reg.beyond(o)) beyond_everywhere[o] = 0;
    }
    for (size_t j = l.prefix_len; j < l.edges.size(); ++j) {
      auto& e = ra.edges[l.edges[j]];
      resets |= tst.transitions[e.transition].reset;
      adv = adv || e.advances_time;
    }
    if (!adv) return false;
    for (size_t o = 0; o < tst.clocks.size(); ++o)
      if (!((resets >> o) & 1) && !beyond_everywhere[o]) return false;
    return true;
  };

  // exactly recurrent witnesses may need the cycle unrolled a few times or
  // entered after extra traversals; try a fixed variant family per base,
  // within an overall effort budget
  static const std::pair<size_t, size_t> kVariants[] = {
      {0, 1}, {0, 2}, {1, 1}, {0, 3}, {1, 2}, {2, 1}, {0, 6}, {1, 6}, {3, 3}};
  const size_t kMaxEdges = 48;
  size_t budget = std::max<size_t>(bound, 50); // validation calls, not lassos
  while (auto l = en.next()) {
    if (!validate) return l;
    if (!cycle_plausible(*l)) continue;
    for (auto [pre, loops] : kVariants) {
      size_t sz = l->prefix_len + (pre + loops) * l->suffix_len();
      if (sz > kMaxEdges && !(pre == 0 && loops == 1)) continue;
      if (budget == 0) {
        if (bound_flag) *bound_flag = true;
        return std::nullopt;
      }
      --budget;
      Lasso cand = (pre == 0 && loops == 1) ? *l : pump_lasso(ra, *l, pre, loops);
      if (validate(cand)) return cand;
    }
  }
  if (bound_flag) *bound_flag = en.bound_hit();
  return std::nullopt;
}

std::string Lasso::to_json(const RegionAutomaton& ra, const Tst& tst) const {
  nlohmann::ordered_json j;
  j["prefix_len"] = prefix_len;
  nlohmann::ordered_json st = nlohmann::ordered_json::array();
  for (size_t q : states) {
    nlohmann::ordered_json e;
    e["ra_state"] = q;
    e["tst_state"] = ra.states[q].tst_state;
    e["region"] = ra.states[q].region.pretty(tst.clocks);
    st.push_back(e);
  }
  j["states"] = st;
  nlohmann::ordered_json ed = nlohmann::ordered_json::array();
  for (size_t e : edges) {
    nlohmann::ordered_json x;
    x["ra_edge"] = e;
    x["transition"] = ra.edges[e].transition;
    ed.push_back(x);
  }
  j["edges"] = ed;
  return j.dump(2);
}

} // namespace sitl
