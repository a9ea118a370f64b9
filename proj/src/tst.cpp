#include "sitl/tst.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace sitl {

const char* rel_str(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool rel_eval(const Rat& lhs, Rel r, const Rat& rhs) {
  switch (r) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Eq: return lhs == rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Gt: return lhs > rhs;
  }
  return false;
}

std::string ClockConstraint::str(const std::vector<std::string>& names) const {
  if (atoms.empty()) return "true";
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += " & ";
    s += names[atoms[i].clock];
    s += rel_str(atoms[i].rel);
    s += rat_str(atoms[i].k);
  }
  return s;
}

std::vector<size_t> Tst::initial_transitions() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].src == kInitialState) out.push_back(i);
  return out;
}

std::vector<Rat> Tst::clock_max_constants() const {
  std::vector<Rat> mx(clocks.size(), Rat(0));
  auto scan = [&](const ClockConstraint& cc) {
    for (auto& a : cc.atoms)
      if (a.k > mx[a.clock]) mx[a.clock] = a.k;
  };
  for (auto& s : states) scan(s.invariant);
  for (auto& t : transitions) scan(t.guard);
  return mx;
}

void Tst::validate() const {
  auto check_cc = [&](const ClockConstraint& cc, const std::string& where) {
    for (auto& a : cc.atoms) {
      if (a.clock >= clocks.size())
        throw std::logic_error("clock out of range in " + where);
      if (a.k < 0) throw std::logic_error("negative clock constant in " + where);
    }
  };
  auto check_label = [&](const BcPtr& l, const std::vector<std::string>& alphabet,
                         const std::string& where) {
    if (!l) throw std::logic_error("missing label in " + where);
    for (auto& atom : bc_atoms(*l))
      if (std::find(alphabet.begin(), alphabet.end(), atom) == alphabet.end())
        throw std::logic_error("label atom '" + atom + "' outside alphabet in " + where);
  };
  for (size_t i = 0; i < states.size(); ++i) {
    check_cc(states[i].invariant, "state " + std::to_string(i));
    check_label(states[i].in_label, inputs, "state " + std::to_string(i));
    check_label(states[i].out_label, outputs, "state " + std::to_string(i));
  }
  bool any_initial = false;
  for (size_t i = 0; i < transitions.size(); ++i) {
    auto& t = transitions[i];
    if (t.src != kInitialState && (t.src < 0 || size_t(t.src) >= states.size()))
      throw std::logic_error("bad source in transition " + std::to_string(i));
    if (t.dst < 0 || size_t(t.dst) >= states.size())
      throw std::logic_error("bad target in transition " + std::to_string(i));
    if (t.src == kInitialState) any_initial = true;
    check_cc(t.guard, "transition " + std::to_string(i));
    if (clocks.size() < 64 && (t.reset >> clocks.size()) != 0)
      throw std::logic_error("reset mask beyond clock set");
    check_label(t.in_label, inputs, "transition " + std::to_string(i));
    check_label(t.out_label, outputs, "transition " + std::to_string(i));
  }
  if (!states.empty() && !any_initial)
    throw std::logic_error("no initial transition");
  for (auto& f : acceptance) {
    for (auto s : f.states)
      if (s >= states.size()) throw std::logic_error("acceptance references bad state");
    for (auto t : f.transitions)
      if (t >= transitions.size()) throw std::logic_error("acceptance references bad transition");
  }
}

size_t Tst::cleanup() {
  size_t removed = 0;
  // proposition-level falsity
  std::vector<bool> state_dead(states.size(), false);
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].in_label->kind == Bc::Kind::False ||
        states[i].out_label->kind == Bc::Kind::False)
      state_dead[i] = true;
  std::vector<bool> trans_dead(transitions.size(), false);
  for (size_t i = 0; i < transitions.size(); ++i) {
    auto& t = transitions[i];
    if (t.in_label->kind == Bc::Kind::False || t.out_label->kind == Bc::Kind::False ||
        (t.src != kInitialState && state_dead[t.src]) || state_dead[t.dst])
      trans_dead[i] = true;
  }
  // forward reachability from s0
  std::vector<bool> reach(states.size(), false);
  std::vector<int> work;
  for (auto& t : transitions)
    if (!trans_dead[&t - transitions.data()] && t.src == kInitialState && !state_dead[t.dst] &&
        !reach[t.dst]) {
      reach[t.dst] = true;
      work.push_back(t.dst);
    }
  while (!work.empty()) {
    int s = work.back();
    work.pop_back();
    for (size_t i = 0; i < transitions.size(); ++i) {
      auto& t = transitions[i];
      if (trans_dead[i] || t.src != s) continue;
      if (!reach[t.dst]) {
        reach[t.dst] = true;
        work.push_back(t.dst);
      }
    }
  }
  for (size_t i = 0; i < states.size(); ++i)
    if (!reach[i]) state_dead[i] = true;
  for (size_t i = 0; i < transitions.size(); ++i) {
    auto& t = transitions[i];
    if ((t.src != kInitialState && state_dead[t.src]) || state_dead[t.dst])
      trans_dead[i] = true;
  }

  // compact
  std::vector<int> smap(states.size(), -1);
  std::vector<TstState> ns;
  for (size_t i = 0; i < states.size(); ++i) {
    if (state_dead[i]) { ++removed; continue; }
    smap[i] = int(ns.size());
    ns.push_back(states[i]);
  }
  std::vector<int> tmap(transitions.size(), -1);
  std::vector<TstTransition> nt;
  for (size_t i = 0; i < transitions.size(); ++i) {
    if (trans_dead[i]) { ++removed; continue; }
    TstTransition t = transitions[i];
    if (t.src != kInitialState) t.src = smap[t.src];
    t.dst = smap[t.dst];
    tmap[i] = int(nt.size());
    nt.push_back(std::move(t));
  }
  std::vector<AcceptSet> na;
  for (auto& f : acceptance) {
    AcceptSet g;
    for (auto s : f.states)
      if (smap[s] >= 0) g.states.insert(size_t(smap[s]));
    for (auto t : f.transitions)
      if (tmap[t] >= 0) g.transitions.insert(size_t(tmap[t]));
    na.push_back(std::move(g));
  }
  states = std::move(ns);
  transitions = std::move(nt);
  acceptance = std::move(na);
  return removed;
}

std::string Tst::dot() const {
  std::string s = "digraph tst {\n  rankdir=LR;\n  s0 [shape=point];\n";
  for (size_t i = 0; i < states.size(); ++i) {
    s += "  q" + std::to_string(i) + " [shape=box,label=\"q" + std::to_string(i);
    if (!states[i].note.empty()) s += "\\n" + states[i].note;
    s += "\\nin: " + bc_str(*states[i].in_label);
    s += "\\nout: " + bc_str(*states[i].out_label);
    if (!states[i].invariant.is_true())
      s += "\\ninv: " + states[i].invariant.str(clocks);
    s += "\"];\n";
  }
  for (size_t i = 0; i < transitions.size(); ++i) {
    auto& t = transitions[i];
    std::string from = t.src == kInitialState ? "s0" : "q" + std::to_string(t.src);
    s += "  " + from + " -> q" + std::to_string(t.dst) + " [label=\"";
    if (!t.guard.is_true()) s += t.guard.str(clocks) + "; ";
    if (t.reset) {
      s += "reset{";
      for (size_t c = 0; c < clocks.size(); ++c)
        if (t.reset & (uint64_t(1) << c)) s += clocks[c] + " ";
      s += "}; ";
    }
    s += bc_str(*t.in_label) + " / " + bc_str(*t.out_label) + "\"];\n";
  }
  // acceptance marks as comments, one line per member
  for (size_t f = 0; f < acceptance.size(); ++f) {
    s += "  // accept[" + std::to_string(f) + "]: states{";
    for (auto st : acceptance[f].states) s += std::to_string(st) + " ";
    s += "} transitions{";
    for (auto tr : acceptance[f].transitions) s += std::to_string(tr) + " ";
    s += "}\n";
  }
  s += "}\n";
  return s;
}

std::string Tst::to_json() const {
  nlohmann::ordered_json j;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["clocks"] = clocks;
  nlohmann::ordered_json st = nlohmann::ordered_json::array();
  for (auto& s : states) {
    nlohmann::ordered_json e;
    e["in"] = bc_str(*s.in_label);
    e["out"] = bc_str(*s.out_label);
    e["inv"] = s.invariant.str(clocks);
    if (!s.note.empty()) e["note"] = s.note;
    st.push_back(e);
  }
  j["states"] = st;
  nlohmann::ordered_json tr = nlohmann::ordered_json::array();
  for (auto& t : transitions) {
    nlohmann::ordered_json e;
    e["src"] = t.src;
    e["dst"] = t.dst;
    e["guard"] = t.guard.str(clocks);
    e["reset"] = t.reset;
    e["in"] = bc_str(*t.in_label);
    e["out"] = bc_str(*t.out_label);
    tr.push_back(e);
  }
  j["transitions"] = tr;
  nlohmann::ordered_json acc = nlohmann::ordered_json::array();
  for (auto& f : acceptance) {
    nlohmann::ordered_json e;
    e["states"] = f.states;
    e["transitions"] = f.transitions;
    acc.push_back(e);
  }
  j["acceptance"] = acc;
  return j.dump(2);
}

BigInt normalize_constants(Tst& t) {
  BigInt lcd = 1;
  auto scan = [&](const ClockConstraint& cc) {
    for (auto& a : cc.atoms) {
      BigInt d = rat_den(a.k);
      lcd = lcd / gcd(lcd, d) * d;
    }
  };
  for (auto& s : t.states) scan(s.invariant);
  for (auto& tr : t.transitions) scan(tr.guard);
  if (lcd == 1) return lcd;
  auto scale = [&](ClockConstraint& cc) {
    for (auto& a : cc.atoms) a.k *= Rat(lcd);
  };
  for (auto& s : t.states) scale(s.invariant);
  for (auto& tr : t.transitions) scale(tr.guard);
  return lcd;
}

} // namespace sitl
