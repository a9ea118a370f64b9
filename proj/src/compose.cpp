#include "sitl/compose.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "sitl/elementary.hpp"

namespace sitl {

namespace {

std::vector<std::string> union_names(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (auto& x : b)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

ClockConstraint shift_clocks(const ClockConstraint& cc, size_t offset) {
  ClockConstraint r = cc;
  for (auto& a : r.atoms) a.clock += offset;
  return r;
}

uint64_t shift_reset(uint64_t reset, size_t offset) { return reset << offset; }

// Transition provenance inside a product: either a factor transition index
// or a factor state the component sits in across the instant.
struct Part {
  bool is_transition;
  size_t idx;
};

struct PendingTransition {
  TstTransition t;
  Part p1, p2;
};

std::string trans_key(const TstTransition& t, const std::vector<std::string>& clocks) {
  return std::to_string(t.src) + ">" + std::to_string(t.dst) + "|" +
         t.guard.str(clocks) + "|" + std::to_string(t.reset) + "|" +
         bc_str(*t.in_label) + "|" + bc_str(*t.out_label);
}

// Shared assembly for both compositions.  `keep_state`: pair filter.
// `keep_sim`, `keep_left`, `keep_right`: transition-pair side conditions.
// Label builders differ between product and composition.
struct ProductBuilder {
  const Tst& t1;
  const Tst& t2;
  Tst out;
  std::vector<std::vector<int>> pair_id; // [s1][s2] -> out state or -1
  std::vector<std::pair<size_t, size_t>> pair_of;
  std::vector<PendingTransition> pending;

  ProductBuilder(const Tst& a, const Tst& b) : t1(a), t2(b) {
    out.clocks = t1.clocks;
    for (auto& c : t2.clocks) out.clocks.push_back(c);
    pair_id.assign(t1.states.size(), std::vector<int>(t2.states.size(), -1));
  }

  void make_states(bool (*keep)(const Tst&, const Tst&, size_t, size_t),
                   BcPtr (*in_label)(const Tst&, const Tst&, size_t, size_t),
                   BcPtr (*out_label)(const Tst&, const Tst&, size_t, size_t)) {
    for (size_t i = 0; i < t1.states.size(); ++i)
      for (size_t j = 0; j < t2.states.size(); ++j) {
        if (!keep(t1, t2, i, j)) continue;
        TstState s;
        s.invariant = t1.states[i].invariant.conj(
            shift_clocks(t2.states[j].invariant, t1.clocks.size()));
        s.in_label = in_label(t1, t2, i, j);
        s.out_label = out_label(t1, t2, i, j);
        s.note = t1.states[i].note + "." + t2.states[j].note;
        if (s.in_label->kind == Bc::Kind::False || s.out_label->kind == Bc::Kind::False)
          continue;
        pair_id[i][j] = int(out.add_state(std::move(s)));
        pair_of.emplace_back(i, j);
      }
  }

  void add_pending(TstTransition t, Part p1, Part p2) {
    if (t.in_label->kind == Bc::Kind::False || t.out_label->kind == Bc::Kind::False)
      return;
    pending.push_back({std::move(t), p1, p2});
  }

  // kInitialState when both components are at s0; -2 when only one is
  // (no such product configuration); -3 when the pair state was dropped.
  int state_of(int s1, int s2) const {
    if (s1 == kInitialState || s2 == kInitialState)
      return (s1 == kInitialState && s2 == kInitialState) ? kInitialState : -2;
    int id = pair_id[s1][s2];
    return id < 0 ? -3 : id;
  }

  // Deduplicate identical transitions, uniting acceptance provenance.
  void finish_transitions(std::vector<std::vector<Part>>& prov1,
                          std::vector<std::vector<Part>>& prov2) {
    std::map<std::string, size_t> seen;
    for (auto& p : pending) {
      std::string key = trans_key(p.t, out.clocks);
      auto it = seen.find(key);
      if (it == seen.end()) {
        size_t id = out.add_transition(p.t);
        seen.emplace(std::move(key), id);
        prov1.push_back({p.p1});
        prov2.push_back({p.p2});
      } else {
        prov1[it->second].push_back(p.p1);
        prov2[it->second].push_back(p.p2);
      }
    }
  }

  // Lift one factor's acceptance member through the product.
  AcceptSet lift(const AcceptSet& f, bool first,
                 const std::vector<std::vector<Part>>& prov) const {
    AcceptSet g;
    for (size_t q = 0; q < pair_of.size(); ++q) {
      size_t comp = first ? pair_of[q].first : pair_of[q].second;
      if (f.contains_state(comp)) g.states.insert(q);
    }
    for (size_t tr = 0; tr < prov.size(); ++tr) {
      for (auto& part : prov[tr]) {
        bool in = part.is_transition ? f.contains_transition(part.idx)
                                     : f.contains_state(part.idx);
        if (in) { g.transitions.insert(tr); break; }
      }
    }
    return g;
  }
};

bool keep_all(const Tst&, const Tst&, size_t, size_t) { return true; }
bool keep_io(const Tst& a, const Tst& b, size_t i, size_t j) {
  return bc_taut_implies(*a.states[i].out_label, *b.states[j].in_label);
}

BcPtr in_conj(const Tst& a, const Tst& b, size_t i, size_t j) {
  return Bc::conj2(a.states[i].in_label, b.states[j].in_label);
}
BcPtr out_conj(const Tst& a, const Tst& b, size_t i, size_t j) {
  return Bc::conj2(a.states[i].out_label, b.states[j].out_label);
}
BcPtr in_first(const Tst& a, const Tst&, size_t i, size_t) { return a.states[i].in_label; }
BcPtr out_second(const Tst&, const Tst& b, size_t, size_t j) { return b.states[j].out_label; }

} // namespace

Tst sync_product(const Tst& t1, const Tst& t2) {
  ProductBuilder pb(t1, t2);
  pb.out.inputs = union_names(t1.inputs, t2.inputs);
  pb.out.outputs = union_names(t1.outputs, t2.outputs);
  pb.make_states(keep_all, in_conj, out_conj);
  const size_t off = t1.clocks.size();

  // simultaneous transitions
  for (size_t i = 0; i < t1.transitions.size(); ++i)
    for (size_t j = 0; j < t2.transitions.size(); ++j) {
      auto& d1 = t1.transitions[i];
      auto& d2 = t2.transitions[j];
      int src = pb.state_of(d1.src, d2.src);
      int dst = pb.state_of(d1.dst, d2.dst);
      if (dst < 0 || (src < 0 && src != kInitialState)) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = d1.guard.conj(shift_clocks(d2.guard, off));
      t.reset = d1.reset | shift_reset(d2.reset, off);
      t.in_label = Bc::conj2(d1.in_label, d2.in_label);
      t.out_label = Bc::conj2(d1.out_label, d2.out_label);
      pb.add_pending(std::move(t), {true, i}, {true, j});
    }
  // left-sided: component 2 sits in a state across the instant
  for (size_t i = 0; i < t1.transitions.size(); ++i) {
    auto& d1 = t1.transitions[i];
    if (d1.src == kInitialState) continue; // runs start with joint steps
    for (size_t j = 0; j < t2.states.size(); ++j) {
      int src = pb.pair_id[d1.src][j];
      int dst = pb.pair_id[d1.dst][j];
      if (src < 0 || dst < 0) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = d1.guard.conj(shift_clocks(t2.states[j].invariant, off));
      t.reset = d1.reset;
      t.in_label = Bc::conj2(d1.in_label, t2.states[j].in_label);
      t.out_label = Bc::conj2(d1.out_label, t2.states[j].out_label);
      pb.add_pending(std::move(t), {true, i}, {false, j});
    }
  }
  // right-sided
  for (size_t j = 0; j < t2.transitions.size(); ++j) {
    auto& d2 = t2.transitions[j];
    if (d2.src == kInitialState) continue;
    for (size_t i = 0; i < t1.states.size(); ++i) {
      int src = pb.pair_id[i][d2.src];
      int dst = pb.pair_id[i][d2.dst];
      if (src < 0 || dst < 0) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = t1.states[i].invariant.conj(shift_clocks(d2.guard, off));
      t.reset = shift_reset(d2.reset, off);
      t.in_label = Bc::conj2(t1.states[i].in_label, d2.in_label);
      t.out_label = Bc::conj2(t1.states[i].out_label, d2.out_label);
      pb.add_pending(std::move(t), {false, i}, {true, j});
    }
  }

  std::vector<std::vector<Part>> prov1, prov2;
  pb.finish_transitions(prov1, prov2);
  for (auto& f : t1.acceptance) pb.out.acceptance.push_back(pb.lift(f, true, prov1));
  for (auto& f : t2.acceptance) pb.out.acceptance.push_back(pb.lift(f, false, prov2));
  pb.out.cleanup();
  return pb.out;
}

Tst io_compose(const Tst& t1, const Tst& t2) {
  {
    auto g1 = t1.outputs, l2 = t2.inputs;
    std::sort(g1.begin(), g1.end());
    std::sort(l2.begin(), l2.end());
    if (g1 != l2)
      throw std::invalid_argument("io_compose: output/input alphabets differ");
  }
  // labels repeat heavily across transitions; memoize the implications
  std::map<std::pair<std::string, std::string>, bool> impl_memo;
  auto implies = [&](const BcPtr& a, const BcPtr& b) {
    auto key = std::make_pair(bc_str(*a), bc_str(*b));
    auto it = impl_memo.find(key);
    if (it != impl_memo.end()) return it->second;
    bool r = bc_taut_implies(*a, *b);
    impl_memo.emplace(std::move(key), r);
    return r;
  };

  ProductBuilder pb(t1, t2);
  pb.out.inputs = t1.inputs;
  pb.out.outputs = t2.outputs;
  pb.make_states(keep_io, in_first, out_second);
  const size_t off = t1.clocks.size();

  // simultaneous: gamma1(delta1) implies lambda2(delta2)
  for (size_t i = 0; i < t1.transitions.size(); ++i)
    for (size_t j = 0; j < t2.transitions.size(); ++j) {
      auto& d1 = t1.transitions[i];
      auto& d2 = t2.transitions[j];
      int src = pb.state_of(d1.src, d2.src);
      int dst = pb.state_of(d1.dst, d2.dst);
      if (dst < 0 || (src < 0 && src != kInitialState)) continue;
      if (!implies(d1.out_label, d2.in_label)) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = d1.guard.conj(shift_clocks(d2.guard, off));
      t.reset = d1.reset | shift_reset(d2.reset, off);
      t.in_label = d1.in_label;
      t.out_label = d2.out_label;
      pb.add_pending(std::move(t), {true, i}, {true, j});
    }
  // left-sided: gamma1(delta1) implies lambda2(s2)
  for (size_t i = 0; i < t1.transitions.size(); ++i) {
    auto& d1 = t1.transitions[i];
    if (d1.src == kInitialState) continue;
    for (size_t j = 0; j < t2.states.size(); ++j) {
      int src = pb.pair_id[d1.src][j];
      int dst = pb.pair_id[d1.dst][j];
      if (src < 0 || dst < 0) continue;
      if (!implies(d1.out_label, t2.states[j].in_label)) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = d1.guard.conj(shift_clocks(t2.states[j].invariant, off));
      t.reset = d1.reset;
      t.in_label = d1.in_label;
      t.out_label = t2.states[j].out_label;
      pb.add_pending(std::move(t), {true, i}, {false, j});
    }
  }
  // right-sided: gamma1(s1) implies lambda2(delta2)
  for (size_t j = 0; j < t2.transitions.size(); ++j) {
    auto& d2 = t2.transitions[j];
    if (d2.src == kInitialState) continue;
    for (size_t i = 0; i < t1.states.size(); ++i) {
      int src = pb.pair_id[i][d2.src];
      int dst = pb.pair_id[i][d2.dst];
      if (src < 0 || dst < 0) continue;
      if (!implies(t1.states[i].out_label, d2.in_label)) continue;
      TstTransition t;
      t.src = src;
      t.dst = dst;
      t.guard = t1.states[i].invariant.conj(shift_clocks(d2.guard, off));
      t.reset = shift_reset(d2.reset, off);
      t.in_label = t1.states[i].in_label;
      t.out_label = d2.out_label;
      pb.add_pending(std::move(t), {false, i}, {true, j});
    }
  }

  std::vector<std::vector<Part>> prov1, prov2;
  pb.finish_transitions(prov1, prov2);
  for (auto& f : t1.acceptance) pb.out.acceptance.push_back(pb.lift(f, true, prov1));
  for (auto& f : t2.acceptance) pb.out.acceptance.push_back(pb.lift(f, false, prov2));
  pb.out.cleanup();
  return pb.out;
}

const char* kRootOutputWire = "y";

namespace {

struct CompileCtx {
  size_t wire_counter = 0;
  size_t clock_counter = 0;
  CompileStats* stats;

  std::string fresh_wire() { return "w" + std::to_string(wire_counter++); }
  std::string fresh_clock() { return "x" + std::to_string(clock_counter++); }

  void log(const std::string& what, const Tst& t) {
    if (!stats) return;
    stats->log.push_back(what + ": " + std::to_string(t.states.size()) + " states, " +
                         std::to_string(t.transitions.size()) + " transitions");
  }

  Tst build(const Core& c, const std::string& out_wire) {
    using Op = Core::Op;
    switch (c.op) {
      case Op::True: {
        Tst t = const_true_tst(out_wire);
        log("const", t);
        return t;
      }
      case Op::Prop: {
        Tst t = identity_tst(c.name, out_wire);
        log("leaf " + c.name, t);
        return t;
      }
      case Op::Not: {
        std::string w = fresh_wire();
        Tst child = build(*c.kids[0], w);
        Tst t = io_compose(child, elementary_not(w, out_wire));
        log("not", t);
        return t;
      }
      case Op::And: {
        std::string wl = fresh_wire(), wr = fresh_wire();
        Tst l = build(*c.kids[0], wl);
        Tst r = build(*c.kids[1], wr);
        Tst prod = sync_product(l, r);
        log("and.product", prod);
        Tst t = io_compose(prod, elementary_and(wl, wr, out_wire));
        log("and", t);
        return t;
      }
      case Op::Until: {
        std::string wl = fresh_wire(), wr = fresh_wire();
        Tst l = build(*c.kids[0], wl);
        Tst r = build(*c.kids[1], wr);
        Tst prod = sync_product(l, r);
        log("until.product", prod);
        Tst t = io_compose(prod, elementary_until(wl, wr, out_wire));
        log("until", t);
        return t;
      }
      case Op::EvBounded: {
        std::string w = fresh_wire();
        Tst child = build(*c.kids[0], w);
        Tst t = io_compose(
            child, elementary_eventually(c.bound, c.right_closed, w, out_wire,
                                         fresh_clock()));
        log("eventually", t);
        return t;
      }
    }
    throw std::logic_error("unreachable");
  }
};

} // namespace

Tst compile_formula(const CorePtr& core, CompileStats* stats) {
  CompileCtx ctx{0, 0, stats};
  Tst t = ctx.build(*core, kRootOutputWire);
  t.validate();
  if (t.outputs.size() != 1)
    throw std::logic_error("compiled transducer must have one output");
  if (stats) {
    stats->states = t.states.size();
    stats->transitions = t.transitions.size();
  }
  return t;
}

} // namespace sitl
