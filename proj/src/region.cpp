#include "sitl/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace sitl {

std::string ClockRegion::key() const {
  std::string s;
  for (size_t c = 0; c < ip.size(); ++c) {
    s += std::to_string(ip[c]);
    s += (ip[c] >= 0 && frac_zero[c]) ? "z" : ".";
    s += ",";
  }
  s += "|";
  for (auto& g : order) {
    for (auto c : g) s += std::to_string(c) + "~";
    s += ";";
  }
  return s;
}

std::string ClockRegion::pretty(const std::vector<std::string>& names) const {
  std::string s;
  for (size_t c = 0; c < ip.size(); ++c) {
    if (c) s += " ";
    if (ip[c] < 0) {
      s += names[c] + ">max";
    } else if (frac_zero[c]) {
      s += names[c] + "=" + std::to_string(ip[c]);
    } else {
      s += names[c] + "in(" + std::to_string(ip[c]) + "," + std::to_string(ip[c] + 1) + ")";
    }
  }
  if (!order.empty()) {
    s += " frac:";
    for (size_t g = 0; g < order.size(); ++g) {
      if (g) s += "<";
      s += "{";
      for (auto c : order[g]) s += names[c];
      s += "}";
    }
  }
  return s;
}

bool ClockRegion::satisfies_atom(const ClockAtom& a) const {
  if (!is_integer(a.k))
    throw std::logic_error("region constraint with non-integer constant");
  long long k = a.k.convert_to<long long>();
  if (ip[a.clock] < 0) { // beyond every compared constant
    return a.rel == Rel::Ge || a.rel == Rel::Gt;
  }
  long long v = ip[a.clock];
  if (frac_zero[a.clock]) return rel_eval(Rat(v), a.rel, Rat(k));
  // value strictly inside (v, v+1), k integral
  switch (a.rel) {
    case Rel::Lt:
    case Rel::Le: return k >= v + 1;
    case Rel::Eq: return false;
    case Rel::Ge:
    case Rel::Gt: return k <= v;
  }
  return false;
}

bool ClockRegion::satisfies(const ClockConstraint& cc) const {
  for (auto& a : cc.atoms)
    if (!satisfies_atom(a)) return false;
  return true;
}

ClockRegion ClockRegion::apply_reset(uint64_t reset) const {
  ClockRegion r = *this;
  for (size_t c = 0; c < ip.size(); ++c) {
    if (!(reset & (uint64_t(1) << c))) continue;
    r.ip[c] = 0;
    r.frac_zero[c] = true;
  }
  // drop reset clocks from the fraction order
  std::vector<std::vector<size_t>> no;
  for (auto& g : order) {
    std::vector<size_t> ng;
    for (auto c : g)
      if (!(reset & (uint64_t(1) << c))) ng.push_back(c);
    if (!ng.empty()) no.push_back(std::move(ng));
  }
  r.order = std::move(no);
  return r;
}

ClockRegion ClockRegion::time_successor(const std::vector<Rat>& cmax) const {
  ClockRegion r = *this;
  // zero-fraction clocks leave their integer first
  std::vector<size_t> zeros;
  for (size_t c = 0; c < ip.size(); ++c)
    if (ip[c] >= 0 && frac_zero[c]) zeros.push_back(c);
  if (!zeros.empty()) {
    std::vector<size_t> fresh;
    for (auto c : zeros) {
      r.frac_zero[c] = false;
      if (Rat(ip[c]) >= cmax[c]) r.ip[c] = -1; // crossed the last constant
      else fresh.push_back(c);
    }
    if (!fresh.empty())
      r.order.insert(r.order.begin(), fresh); // smallest fractions now
    return r;
  }
  // otherwise the largest fraction group reaches the next integer
  if (r.order.empty()) return r; // everything beyond: absorbing
  std::vector<size_t> top = r.order.back();
  r.order.pop_back();
  for (auto c : top) {
    r.ip[c] += 1;
    if (Rat(r.ip[c]) > cmax[c]) {
      r.ip[c] = -1;
    } else {
      r.frac_zero[c] = true;
    }
  }
  return r;
}

std::vector<Rat> ClockRegion::representative(const std::vector<Rat>& cmax) const {
  std::vector<Rat> v(ip.size());
  size_t m = order.size();
  std::vector<Rat> frac_of(ip.size(), Rat(0));
  for (size_t g = 0; g < m; ++g)
    for (auto c : order[g]) frac_of[c] = Rat(long(g) + 1) / Rat(long(m) + 1);
  for (size_t c = 0; c < ip.size(); ++c) {
    if (ip[c] < 0) v[c] = cmax[c] + Rat(1, 2);
    else v[c] = Rat(ip[c]) + frac_of[c];
  }
  return v;
}

ClockRegion region_of(const std::vector<Rat>& val, const std::vector<Rat>& cmax) {
  ClockRegion r;
  size_t n = val.size();
  r.ip.resize(n);
  r.frac_zero.assign(n, false);
  std::vector<std::pair<Rat, size_t>> fracs;
  for (size_t c = 0; c < n; ++c) {
    if (val[c] < 0) throw std::invalid_argument("negative clock value");
    if (val[c] > cmax[c]) {
      r.ip[c] = -1;
      continue;
    }
    BigInt fl = rat_floor(val[c]);
    r.ip[c] = int(fl.convert_to<long long>());
    Rat frac = val[c] - Rat(fl);
    if (frac == 0) r.frac_zero[c] = true;
    else fracs.emplace_back(frac, c);
  }
  std::sort(fracs.begin(), fracs.end());
  for (size_t i = 0; i < fracs.size();) {
    size_t j = i;
    std::vector<size_t> g;
    while (j < fracs.size() && fracs[j].first == fracs[i].first) g.push_back(fracs[j++].second);
    std::sort(g.begin(), g.end());
    r.order.push_back(std::move(g));
    i = j;
  }
  return r;
}

ClockRegion zero_region(size_t clocks) {
  ClockRegion r;
  r.ip.assign(clocks, 0);
  r.frac_zero.assign(clocks, true);
  return r;
}

std::vector<ClockRegion> time_successors(const ClockRegion& r,
                                         const ClockConstraint& inv,
                                         const std::vector<Rat>& cmax) {
  std::vector<ClockRegion> out;
  if (!r.satisfies(inv)) return out;
  out.push_back(r);
  ClockRegion cur = r;
  while (true) {
    ClockRegion nxt = cur.time_successor(cmax);
    if (nxt == cur) break; // absorbing
    bool nxt_ok = nxt.satisfies(inv);
    if (nxt.is_boundary() || nxt_ok) out.push_back(nxt);
    if (!nxt_ok) break; // cannot elapse through it
    cur = nxt;
  }
  return out;
}

RegionAutomaton build_ra(const Tst& tst) {
  for (auto& s : tst.states)
    for (auto& a : s.invariant.atoms)
      if (!is_integer(a.k)) throw std::invalid_argument("normalize constants first");
  for (auto& t : tst.transitions)
    for (auto& a : t.guard.atoms)
      if (!is_integer(a.k)) throw std::invalid_argument("normalize constants first");

  RegionAutomaton ra;
  ra.cmax = tst.clock_max_constants();
  const size_t n_clocks = tst.clocks.size();

  // transitions grouped by source for deterministic expansion
  std::vector<std::vector<size_t>> by_src(tst.states.size());
  std::vector<size_t> from_init;
  for (size_t i = 0; i < tst.transitions.size(); ++i) {
    int s = tst.transitions[i].src;
    if (s == kInitialState) from_init.push_back(i);
    else by_src[s].push_back(i);
  }

  std::map<std::string, size_t> intern;
  std::vector<size_t> work;
  auto state_id = [&](int s, const ClockRegion& reg) {
    std::string k = std::to_string(s) + "#" + reg.key();
    auto it = intern.find(k);
    if (it != intern.end()) return it->second;
    size_t id = ra.states.size();
    ra.states.push_back({s, reg});
    intern.emplace(std::move(k), id);
    work.push_back(id);
    return id;
  };

  state_id(kInitialState, zero_region(n_clocks));
  std::map<std::string, size_t> edge_seen;
  size_t cursor = 0;
  BigInt bound = region_count_bound(ra.cmax);
  while (cursor < work.size()) {
    size_t cur = work[cursor++];
    // copy: ra.states may reallocate during expansion
    int s = ra.states[cur].tst_state;
    ClockRegion reg = ra.states[cur].region;
    std::vector<ClockRegion> fire;
    const std::vector<size_t>* outs;
    if (s == kInitialState) {
      fire = {reg}; // runs start with a discrete step at time 0
      outs = &from_init;
    } else {
      fire = time_successors(reg, tst.states[s].invariant, ra.cmax);
      if (fire.empty() || !(fire.front() == reg))
        fire.insert(fire.begin(), reg); // immediate fire, invariant-exempt
      outs = &by_src[s];
    }
    for (auto& beta : fire) {
      // a fire inside a later region took positive delay; firing within the
      // starting region takes positive delay only off the boundary
      bool adv = !(beta == reg) || !reg.is_boundary();
      for (size_t ti : *outs) {
        auto& tr = tst.transitions[ti];
        if (!beta.satisfies(tr.guard)) continue;
        ClockRegion after = beta.apply_reset(tr.reset);
        size_t dst = state_id(tr.dst, after);
        if (BigInt(ra.states.size()) > bound * BigInt(tst.states.size() + 1))
          throw std::logic_error("region enumeration exceeded the theoretical bound");
        std::string ek = std::to_string(cur) + ">" + std::to_string(dst) + "@" +
                         std::to_string(ti);
        auto ins = edge_seen.emplace(ek, ra.edges.size());
        if (ins.second) ra.edges.push_back({cur, dst, ti, adv});
        else if (adv) ra.edges[ins.first->second].advances_time = true;
      }
    }
  }

  // acceptance lifting: states by TST state, edges by TST transition; RA
  // edges are additionally accepting for a member containing their delta.
  for (auto& f : tst.acceptance) {
    AcceptSet g;
    for (size_t q = 0; q < ra.states.size(); ++q) {
      int s = ra.states[q].tst_state;
      if (s >= 0 && f.contains_state(size_t(s))) g.states.insert(q);
    }
    for (size_t e = 0; e < ra.edges.size(); ++e)
      if (f.contains_transition(ra.edges[e].transition)) g.transitions.insert(e);
    ra.acceptance.push_back(std::move(g));
  }

  ra.out_edges.assign(ra.states.size(), {});
  for (size_t e = 0; e < ra.edges.size(); ++e) ra.out_edges[ra.edges[e].src].push_back(e);
  return ra;
}

BigInt region_count_bound(const std::vector<Rat>& cmax) {
  // O! * 2^O * prod(2*cmax + 2)
  BigInt b = 1;
  for (size_t i = 1; i <= cmax.size(); ++i) b *= BigInt(i);
  for (size_t i = 0; i < cmax.size(); ++i) {
    b *= 2;
    BigInt c = rat_floor(cmax[i]);
    b *= 2 * c + 2;
  }
  return b;
}

std::string RegionAutomaton::dot(const Tst& tst) const {
  std::string s = "digraph ra {\n";
  for (size_t q = 0; q < states.size(); ++q) {
    s += "  r" + std::to_string(q) + " [label=\"";
    s += states[q].tst_state == kInitialState
             ? std::string("s0")
             : "q" + std::to_string(states[q].tst_state);
    s += "\\n" + states[q].region.pretty(tst.clocks) + "\"];\n";
  }
  for (auto& e : edges)
    s += "  r" + std::to_string(e.src) + " -> r" + std::to_string(e.dst) +
         " [label=\"d" + std::to_string(e.transition) + "\"];\n";
  s += "}\n";
  return s;
}

} // namespace sitl
