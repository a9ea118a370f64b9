#include "sitl/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace sitl {

namespace {

// Demand: how far past t the signal must be known to decide the formula at t.
// Unbounded operators contribute one period on periodic signals (resolved by
// the wrap rule); on aperiodic signals they contribute nothing (three-valued
// output absorbs the uncertainty).
Rat demand(const Formula& f, const Rat& unbounded_extra) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::True:
    case Op::Atom:
      return 0;
    case Op::Not:
      return demand(*f.kids[0], unbounded_extra);
    case Op::And:
    case Op::Or: {
      Rat a = demand(*f.kids[0], unbounded_extra);
      Rat b = demand(*f.kids[1], unbounded_extra);
      return a > b ? a : b;
    }
    case Op::Eventually:
    case Op::Always: {
      Rat d = demand(*f.kids[0], unbounded_extra);
      return f.iv.hi_inf ? d + unbounded_extra : d + f.iv.hi;
    }
    case Op::Until: {
      Rat a = demand(*f.kids[0], unbounded_extra);
      Rat b = demand(*f.kids[1], unbounded_extra);
      Rat d = a > b ? a : b;
      return f.iv.hi_inf ? d + unbounded_extra : d + f.iv.hi;
    }
  }
  return 0;
}

struct NodeSets {
  IntervalSet truth;   // definitely true (pessimistic)
  IntervalSet maybe;   // could be true (optimistic superset)
  Rat exact_to;        // both sets exact on [0, exact_to]
};

struct Evaluator {
  const BooleanSignal& sig; // unrolled
  Rat E;                    // last materialized breakpoint
  bool periodic;
  Rat delta;                // period (periodic only)
  Rat stable_from;          // signal periodic on (stable_from, inf)

  IntervalSet atom_set(const std::string& name) const {
    auto it = std::find(sig.props.begin(), sig.props.end(), name);
    if (it == sig.props.end())
      throw std::invalid_argument("formula proposition not in signal: " + name);
    size_t pi = it - sig.props.begin();
    IntervalSet s;
    for (size_t j = 0; j < sig.times.size(); ++j) {
      if (sig.point_vals[j][pi]) s.add({sig.times[j], sig.times[j], false, false});
      if (j + 1 < sig.times.size() && sig.interval_vals[j][pi])
        s.add({sig.times[j], sig.times[j + 1], true, true});
    }
    return s;
  }

  static IntervalSet clip(const IntervalSet& s, const Rat& hi) {
    return s.intersect(IntervalSet::whole(0, hi));
  }

  // Unbounded until with the periodic wrap rule.  Sets must be exact on
  // [0, x_child]; the result is exact on [0, x_child - delta].
  IntervalSet until_periodic(const IntervalSet& lhs, const IntervalSet& rhs,
                             const Rat& x_child) const {
    if (x_child - delta <= stable_from)
      throw std::logic_error("periodic evaluation horizon too small");
    IntervalSet out;
    IntervalSet lhs_c = clip(lhs, x_child);
    for (auto& p : lhs_c.parts()) {
      const Rat& l = p.lo;
      const Rat& r = p.hi;
      if (l >= r) continue;
      bool infinite_cover = (r == x_child) && (r - l >= delta);
      // witnesses within (l, r]
      Rat wit;
      bool have = false;
      bool tail_wit = false;
      for (auto& q : rhs.parts()) {
        if (q.hi <= l) continue;
        if (q.lo > r || (q.lo == r && q.lo_open)) continue;
        Rat hi = q.hi < r ? q.hi : r;
        if (!have || hi > wit) { wit = hi; have = true; }
        // does this witness component intersect the representative tail
        // window (x_child - delta, x_child]?
        if (q.hi > x_child - delta) tail_wit = true;
      }
      if (infinite_cover && tail_wit) {
        out.add({l, x_child, false, false}); // true through the horizon
      } else if (have) {
        out.add({l, wit, false, true});
      }
    }
    return out;
  }

  // F over (0,inf) with the periodic wrap rule.
  IntervalSet ev_unbounded_periodic(const IntervalSet& s, const Rat& x_child) const {
    if (x_child - delta <= stable_from)
      throw std::logic_error("periodic evaluation horizon too small");
    IntervalSet c = clip(s, x_child);
    for (auto& q : c.parts())
      if (q.hi > x_child - delta) // witnesses recur every period
        return IntervalSet::whole(0, x_child);
    return shift_window_unbounded(c);
  }

  // Bounded until over open-left window (t, t+b>.
  static IntervalSet until_bounded(const IntervalSet& lhs, const IntervalSet& rhs,
                                   const Rat& b, bool closed) {
    IntervalSet out;
    for (auto& p : lhs.parts()) {
      const Rat& l = p.lo;
      const Rat& r = p.hi;
      if (l >= r) continue;
      IntervalSet w; // rhs clipped to (l, r]
      for (auto& q : rhs.parts()) {
        Iv c = q;
        if (c.lo < l || (c.lo == l && !c.lo_open)) { c.lo = l; c.lo_open = true; }
        if (c.hi > r) { c.hi = r; c.hi_open = false; }
        if (!c.empty()) w.add(c);
      }
      IntervalSet contrib = shift_window(w, b, closed)
                                .intersect(IntervalSet::whole(l, r));
      out = out.unite(contrib);
    }
    return out;
  }

  NodeSets eval(const Formula& f) const {
    using Op = Formula::Op;
    switch (f.op) {
      case Op::True: {
        auto s = IntervalSet::whole(0, E);
        return {s, s, E};
      }
      case Op::Atom: {
        auto s = atom_set(f.name);
        return {s, s, E};
      }
      case Op::Not: {
        auto k = eval(*f.kids[0]);
        NodeSets r;
        r.truth = k.maybe.complement(0, k.exact_to);
        r.maybe = k.truth.complement(0, k.exact_to).unite(beyond(k.exact_to));
        r.exact_to = k.exact_to;
        return r;
      }
      case Op::And:
      case Op::Or: {
        auto a = eval(*f.kids[0]);
        auto b = eval(*f.kids[1]);
        NodeSets r;
        r.exact_to = a.exact_to < b.exact_to ? a.exact_to : b.exact_to;
        if (f.op == Op::And) {
          r.truth = a.truth.intersect(b.truth);
          r.maybe = a.maybe.intersect(b.maybe);
        } else {
          r.truth = a.truth.unite(b.truth);
          r.maybe = a.maybe.unite(b.maybe);
        }
        r.truth = clip(r.truth, r.exact_to);
        r.maybe = clip(r.maybe, r.exact_to).unite(beyond(r.exact_to));
        return r;
      }
      case Op::Always: {
        // G_I a == !F_I !a, expanded here so callers may pass raw formulas
        Formula neg_inner;
        neg_inner.op = Op::Not;
        neg_inner.kids = {f.kids[0]};
        Formula ev;
        ev.op = Op::Eventually;
        ev.iv = f.iv;
        ev.kids = {std::make_shared<Formula>(neg_inner)};
        Formula top;
        top.op = Op::Not;
        top.kids = {std::make_shared<Formula>(ev)};
        return eval(top);
      }
      case Op::Eventually: {
        auto k = eval(*f.kids[0]);
        NodeSets r;
        if (f.iv.hi_inf) {
          if (periodic) {
            r.exact_to = k.exact_to - delta;
            r.truth = clip(ev_unbounded_periodic(k.truth, k.exact_to), r.exact_to);
            r.maybe = r.truth.unite(beyond(r.exact_to));
          } else {
            // a seen witness is definite at every earlier instant; a later
            // one may always appear
            r.exact_to = E;
            r.truth = shift_window_unbounded(k.truth);
            r.maybe = IntervalSet::whole(0, E);
          }
        } else if (periodic) {
          r.exact_to = k.exact_to - f.iv.hi;
          r.truth = shift_window(clip(k.truth, k.exact_to), f.iv.hi, f.iv.hi_closed);
          r.truth = clip(r.truth, r.exact_to);
          r.maybe = r.truth.unite(beyond(r.exact_to));
        } else {
          r.exact_to = E;
          r.truth = shift_window(k.truth, f.iv.hi, f.iv.hi_closed);
          r.maybe = shift_window(k.maybe, f.iv.hi, f.iv.hi_closed);
          // windows poking past the horizon stay undecided-at-most
          Iv tail{E - f.iv.hi, E, true, false};
          if (!tail.empty()) {
            IntervalSet t;
            t.add(tail);
            r.maybe = r.maybe.unite(t);
          }
        }
        if (f.iv.lo_closed) { // F_[0,..> a == a | F_(0,..> a
          r.truth = r.truth.unite(clip(k.truth, r.exact_to));
          r.maybe = r.maybe.unite(clip(k.maybe, r.exact_to));
        }
        return r;
      }
      case Op::Until: {
        auto a = eval(*f.kids[0]);
        auto b = eval(*f.kids[1]);
        Rat xc = a.exact_to < b.exact_to ? a.exact_to : b.exact_to;
        NodeSets r;
        if (f.iv.hi_inf) {
          if (periodic) {
            r.exact_to = xc - delta;
            r.truth = clip(until_periodic(clip(a.truth, xc), clip(b.truth, xc), xc),
                           r.exact_to);
            r.maybe = r.truth.unite(beyond(r.exact_to));
          } else {
            r.exact_to = E;
            r.truth = until_set(a.truth, b.truth, E, false);
            r.maybe = until_set(a.maybe, b.maybe, E, true);
          }
        } else if (periodic) {
          r.exact_to = xc - f.iv.hi;
          r.truth = clip(until_bounded(clip(a.truth, xc), clip(b.truth, xc),
                                       f.iv.hi, f.iv.hi_closed),
                         r.exact_to);
          r.maybe = r.truth.unite(beyond(r.exact_to));
        } else {
          r.exact_to = E;
          r.truth = until_bounded(a.truth, b.truth, f.iv.hi, f.iv.hi_closed);
          r.maybe = until_bounded(a.maybe, b.maybe, f.iv.hi, f.iv.hi_closed);
          // optimistic continuation where coverage touches the horizon and
          // the window is not fully observed
          for (auto& p : a.maybe.parts()) {
            if (p.hi != E) continue;
            Iv tail{p.lo > E - f.iv.hi ? p.lo : E - f.iv.hi, E, false, false};
            if (p.lo > E - f.iv.hi) tail.lo_open = p.lo_open;
            else tail.lo_open = true;
            if (!tail.empty()) {
              IntervalSet t;
              t.add(tail);
              r.maybe = r.maybe.unite(t);
            }
          }
        }
        if (f.iv.lo_closed) { // peel the t''=t witness
          r.truth = r.truth.unite(clip(b.truth, r.exact_to));
          r.maybe = r.maybe.unite(clip(b.maybe, r.exact_to));
        }
        return r;
      }
    }
    throw std::logic_error("unreachable");
  }

  IntervalSet beyond(const Rat& x) const {
    Rat lo = x < 0 ? Rat(0) : x;
    if (lo >= E) return IntervalSet();
    return IntervalSet::whole(lo, E); // unknown zone: optimistically true
  }
};

} // namespace

Rat formula_demand(const FormulaPtr& phi) { return demand(*phi, 0); }

Verdict eval_mitl(const BooleanSignal& sig, const FormulaPtr& phi, const Rat& t) {
  sig.validate();
  if (t < 0) throw std::out_of_range("negative evaluation time");
  if (!sig.periodic() && t > sig.end())
    throw std::out_of_range("evaluation time outside signal domain");

  if (!sig.periodic()) {
    Evaluator ev{sig, sig.end(), false, Rat(0), sig.end()};
    auto sets = ev.eval(*phi);
    if (sets.truth.contains(t)) return Verdict::True;
    if (!sets.maybe.contains(t)) return Verdict::False;
    return Verdict::Unknown;
  }

  Rat tq = sig.fold(t);
  Rat delta = *sig.period;
  Rat d = demand(*phi, delta);
  // Materialize enough periods that every node's exactness horizon clears
  // the folded evaluation point and the wrap rule's stable-zone requirement.
  Rat target = sig.prefix_end() + tq + d + 4 * delta + 1;
  BooleanSignal big = sig.unroll(target);
  Evaluator ev{big, big.end(), true, delta, sig.prefix_end()};
  auto sets = ev.eval(*phi);
  Rat x_root = big.end() - d; // conservative; per-node tracking is tighter
  if (tq > x_root) throw std::logic_error("evaluation horizon too small");
  if (sets.truth.contains(tq)) return Verdict::True;
  if (!sets.maybe.contains(tq)) return Verdict::False;
  return Verdict::Unknown;
}

} // namespace sitl
