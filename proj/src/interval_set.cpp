#include "sitl/interval_set.hpp"

#include <algorithm>

namespace sitl {

namespace {

// a's lower endpoint vs b's lower endpoint: -1/0/1
int cmp_lo(const Iv& a, const Iv& b) {
  if (a.lo != b.lo) return a.lo < b.lo ? -1 : 1;
  if (a.lo_open != b.lo_open) return a.lo_open ? 1 : -1; // closed starts first
  return 0;
}

// Union-mergeable: overlapping, or touching with at least one closed side.
bool mergeable(const Iv& a, const Iv& b) { // requires a.lo <= b.lo order
  if (b.lo < a.hi) return true;
  if (b.lo == a.hi) return !(a.hi_open && b.lo_open);
  return false;
}

} // namespace

void IntervalSet::add(const Iv& iv) {
  if (iv.empty()) return;
  std::vector<Iv> out;
  Iv cur = iv;
  for (auto& p : parts_) {
    const Iv *first = &p, *second = &cur;
    if (cmp_lo(p, cur) > 0) std::swap(first, second);
    if (mergeable(*first, *second)) {
      // merge into cur
      Iv m = *first;
      if (second->hi > m.hi || (second->hi == m.hi && !second->hi_open)) {
        m.hi = second->hi;
        m.hi_open = second->hi_open;
      }
      cur = m;
    } else {
      out.push_back(p);
    }
  }
  out.push_back(cur);
  std::sort(out.begin(), out.end(), [](const Iv& a, const Iv& b) { return cmp_lo(a, b) < 0; });
  parts_ = std::move(out);
}

bool IntervalSet::contains(const Rat& t) const {
  for (auto& p : parts_)
    if (p.contains(t)) return true;
  return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  IntervalSet r = *this;
  for (auto& p : o.parts_) r.add(p);
  return r;
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  IntervalSet r;
  for (auto& a : parts_)
    for (auto& b : o.parts_) {
      Iv c;
      if (a.lo > b.lo || (a.lo == b.lo && a.lo_open)) {
        c.lo = a.lo; c.lo_open = a.lo_open;
      } else {
        c.lo = b.lo; c.lo_open = b.lo_open;
      }
      if (a.hi < b.hi || (a.hi == b.hi && a.hi_open)) {
        c.hi = a.hi; c.hi_open = a.hi_open;
      } else {
        c.hi = b.hi; c.hi_open = b.hi_open;
      }
      if (!c.empty()) r.add(c);
    }
  return r;
}

IntervalSet IntervalSet::complement(const Rat& lo, const Rat& hi) const {
  IntervalSet r;
  Rat cur = lo;
  bool cur_open = false; // next gap starts closed at cur unless flipped
  for (auto& p : parts_) {
    Iv gap{cur, p.lo, cur_open, !p.lo_open};
    if (!gap.empty()) r.add(gap);
    cur = p.hi;
    cur_open = !p.hi_open;
  }
  Iv tail{cur, hi, cur_open, false};
  if (!tail.empty()) r.add(tail);
  return r;
}

std::string IntervalSet::str() const {
  std::string s;
  for (auto& p : parts_) {
    s += (p.lo_open ? "(" : "[") + rat_str(p.lo) + "," + rat_str(p.hi) +
         (p.hi_open ? ")" : "]") + " ";
  }
  return s.empty() ? "{}" : s;
}

IntervalSet shift_window(const IntervalSet& s, const Rat& b, bool closed) {
  // Contribution of component <a,e| to {t : (t, t+b> meets <a,e|}:
  //   upper end: t < e always (witness must be strictly after t).
  //   lower end: t > a-b when the window is right-open or the component
  //   start is open; t >= a-b when both window end and start are closed.
  // Truth sets live on [0, inf): clamp below at 0.
  IntervalSet r;
  for (auto& p : s.parts()) {
    Iv c;
    c.lo = p.lo - b;
    c.lo_open = !(closed && !p.lo_open);
    if (c.lo < 0) { c.lo = 0; c.lo_open = false; }
    c.hi = p.hi;
    c.hi_open = true;
    if (!c.empty()) r.add(c);
  }
  return r;
}

IntervalSet shift_window_unbounded(const IntervalSet& s) {
  // F over (0,inf): {t : exists w > t in s} = [0, max e) over components.
  IntervalSet r;
  Rat best_hi;
  bool have = false;
  for (auto& p : s.parts()) {
    if (!have || p.hi > best_hi) { best_hi = p.hi; have = true; }
  }
  if (have && best_hi > 0) r.add({Rat(0), best_hi, false, true});
  return r;
}

IntervalSet until_set(const IntervalSet& lhs, const IntervalSet& rhs,
                      const Rat& horizon, bool optimistic_at_horizon) {
  // Coverage stretches: maximal open intervals (l, r) with (l, r) inside lhs.
  // Those are exactly the interiors of the normalized components (isolated
  // points that glue two stretches were already merged by normalization).
  IntervalSet out;
  for (auto& p : lhs.parts()) {
    const Rat& l = p.lo;
    const Rat& r = p.hi;
    if (l >= r) continue; // single point: no open coverage
    if (optimistic_at_horizon && r == horizon && !p.hi_open) {
      // Coverage reaches the horizon: everything from l on may still get a
      // witness later.
      out.add({l, horizon, false, false});
      continue;
    }
    // Witnesses: rhs restricted to (l, r]; t ranges over [l, sup-witness).
    Rat wit;
    bool have = false;
    for (auto& q : rhs.parts()) {
      if (q.hi <= l) continue;                            // entirely left of (l, r]
      if (q.lo > r || (q.lo == r && q.lo_open)) continue; // entirely right of it
      // sup of witnesses from this component, clipped at r (r itself is a
      // valid witness: (t, r) stays inside the stretch)
      Rat hi = q.hi < r ? q.hi : r;
      if (!have || hi > wit) { wit = hi; have = true; }
    }
    if (have) out.add({l, wit, false, true});
  }
  return out;
}

} // namespace sitl
