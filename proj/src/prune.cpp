#include "sitl/prune.hpp"

#include <algorithm>

#include "json.hpp"

namespace sitl {

namespace {

// Rebuild a transducer after marking states/transitions dead, remapping
// acceptance member-wise (subset property preserved by construction).
Tst compact(const Tst& t, const std::vector<bool>& state_dead,
            std::vector<bool> trans_dead) {
  for (size_t i = 0; i < t.transitions.size(); ++i) {
    auto& tr = t.transitions[i];
    if ((tr.src != kInitialState && state_dead[tr.src]) || state_dead[tr.dst])
      trans_dead[i] = true;
  }
  Tst out;
  out.inputs = t.inputs;
  out.outputs = t.outputs;
  out.clocks = t.clocks;
  std::vector<int> smap(t.states.size(), -1);
  for (size_t i = 0; i < t.states.size(); ++i) {
    if (state_dead[i]) continue;
    smap[i] = int(out.add_state(t.states[i]));
  }
  std::vector<int> tmap(t.transitions.size(), -1);
  for (size_t i = 0; i < t.transitions.size(); ++i) {
    if (trans_dead[i]) continue;
    TstTransition tr = t.transitions[i];
    if (tr.src != kInitialState) tr.src = smap[tr.src];
    tr.dst = smap[tr.dst];
    tmap[i] = int(out.add_transition(std::move(tr)));
  }
  for (auto& f : t.acceptance) {
    AcceptSet g;
    for (auto s : f.states)
      if (smap[s] >= 0) g.states.insert(size_t(smap[s]));
    for (auto tr : f.transitions)
      if (tmap[tr] >= 0) g.transitions.insert(size_t(tmap[tr]));
    out.acceptance.push_back(std::move(g));
  }
  return out;
}

BcPtr pred_label(const BcPtr& prop_label, const PropPredMap& map) {
  return bc_rename(*prop_label, map.prop_to_pred());
}

// The abstraction state matching a transducer state label through Pr.
std::optional<size_t> tsts_state_of(const BcPtr& prop_label, const TstS& tsts,
                                    const PropPredMap& map,
                                    const FeasibilityOracle& oracle) {
  BcPtr mu = pred_label(prop_label, map);
  for (size_t i = 0; i < tsts.labels.size(); ++i)
    if (oracle.semantically_equal(*tsts.labels[i], *mu)) return i;
  return std::nullopt;
}

Rat guard_width(const IntervalGuard& g) { return g.hi - g.lo; }

// All abstraction transitions matching delta per the O3 condition.
std::vector<size_t> matches_of(const Tst& tst, const TstTransition& delta,
                               const TstS& tsts, const PropPredMap& map,
                               const FeasibilityOracle& oracle) {
  std::vector<size_t> out;
  if (delta.src == kInitialState) return out;
  auto s_src = tsts_state_of(tst.states[delta.src].in_label, tsts, map, oracle);
  auto s_dst = tsts_state_of(tst.states[delta.dst].in_label, tsts, map, oracle);
  if (!s_src || !s_dst)
    throw std::logic_error("transducer state label missing from abstraction alphabet");
  BcPtr mu = pred_label(delta.in_label, map);
  for (size_t ti = 0; ti < tsts.transitions.size(); ++ti) {
    auto& tr = tsts.transitions[ti];
    if (tr.src != *s_src || tr.dst != *s_dst) continue;
    if (oracle.entails(*tsts.transition_label(tr), *mu).verdict != Entail::Yes)
      continue; // Unknown fails the requirement (conservative)
    out.push_back(ti);
  }
  return out;
}

} // namespace

Tst o1_o2(const Tst& tst, const PropPredMap& map, const FeasibilityOracle& oracle,
          PruneReport& report) {
  std::vector<bool> state_dead(tst.states.size(), false);
  std::vector<bool> trans_dead(tst.transitions.size(), false);
  for (size_t i = 0; i < tst.states.size(); ++i) {
    BcPtr mu = pred_label(tst.states[i].in_label, map);
    auto r = oracle.sat(*mu);
    if (r.verdict == SatResult::Verdict::Unsat) {
      state_dead[i] = true;
      report.removed_states.push_back(
          {"state " + std::to_string(i), bc_str(*mu), r.certificate});
    } else if (r.verdict == SatResult::Verdict::Unknown) {
      report.unknown_kept.push_back("state " + std::to_string(i) + ": " + bc_str(*mu));
    }
  }
  for (size_t i = 0; i < tst.transitions.size(); ++i) {
    BcPtr mu = pred_label(tst.transitions[i].in_label, map);
    auto r = oracle.sat(*mu);
    if (r.verdict == SatResult::Verdict::Unsat) {
      trans_dead[i] = true;
      report.removed_transitions.push_back(
          {"transition " + std::to_string(i), bc_str(*mu), r.certificate});
    } else if (r.verdict == SatResult::Verdict::Unknown) {
      report.unknown_kept.push_back("transition " + std::to_string(i) + ": " + bc_str(*mu));
    }
  }
  Tst out = compact(tst, state_dead, trans_dead);
  out.cleanup(); // drop whatever the removals disconnected
  return out;
}

Tst o3_o4(const Tst& tst_phi, const TstS& tsts, const PropPredMap& map,
          const FeasibilityOracle& oracle, PruneReport& report) {
  const RatVec& x0 = oracle.predicates().x0;
  std::vector<bool> state_dead(tst_phi.states.size(), false);
  std::vector<bool> trans_dead(tst_phi.transitions.size(), false);
  for (size_t i = 0; i < tst_phi.transitions.size(); ++i) {
    auto& tr = tst_phi.transitions[i];
    if (tr.src == kInitialState) {
      // O4: x0 must satisfy the target state label and the transition's own
      // label (the latter pins the proposition values at t = 0)
      BcPtr mu_dst = pred_label(tst_phi.states[tr.dst].in_label, map);
      BcPtr mu_tr = pred_label(tr.in_label, map);
      if (x0.empty()) throw std::logic_error("O4 needs x0 in the predicate config");
      if (!oracle.predicates().eval_bc(*mu_dst, x0)) {
        trans_dead[i] = true;
        report.removed_transitions.push_back({"initial transition " + std::to_string(i),
                                              bc_str(*mu_dst), "x0 violates target label"});
        continue;
      }
      if (!oracle.predicates().eval_bc(*mu_tr, x0)) {
        trans_dead[i] = true;
        report.removed_transitions.push_back({"initial transition " + std::to_string(i),
                                              bc_str(*mu_tr),
                                              "x0 violates the instant label at t=0"});
      }
      continue;
    }
    // O3
    if (matches_of(tst_phi, tr, tsts, map, oracle).empty()) {
      trans_dead[i] = true;
      report.removed_transitions.push_back(
          {"transition " + std::to_string(i), bc_str(*pred_label(tr.in_label, map)),
           "no abstraction transition matches (O3)"});
    }
  }
  Tst out = compact(tst_phi, state_dead, trans_dead);
  out.cleanup();
  return out;
}

Tst o5(const Tst& tst_m, const TstS& tsts, const PropPredMap& map,
       const FeasibilityOracle& oracle, PruneReport& report) {
  Tst out = tst_m;
  const size_t ct = out.clocks.size();
  out.clocks.push_back("ct");
  const uint64_t ct_bit = uint64_t(1) << ct;
  for (size_t i = 0; i < out.transitions.size(); ++i) {
    auto& tr = out.transitions[i];
    tr.reset |= ct_bit; // the abstraction clock restarts at every step
    if (tr.src == kInitialState) continue; // no abstraction counterpart
    auto ms = matches_of(tst_m, tst_m.transitions[i], tsts, map, oracle);
    if (ms.empty()) throw std::logic_error("O5 on a transition O3 should have removed");
    size_t pick = ms[0];
    if (ms.size() > 1) {
      for (size_t k = 1; k < ms.size(); ++k)
        if (guard_width(tsts.transitions[ms[k]].guard) >
            guard_width(tsts.transitions[pick].guard))
          pick = ms[k];
      report.guard_log.push_back("transition " + std::to_string(i) + ": " +
                                 std::to_string(ms.size()) +
                                 " abstraction matches, widest guard " +
                                 tsts.transitions[pick].guard.str() + " chosen");
    }
    const IntervalGuard& g = tsts.transitions[pick].guard;
    tr.guard.atoms.push_back({ct, g.lo_closed ? Rel::Ge : Rel::Gt, g.lo});
    tr.guard.atoms.push_back({ct, g.hi_closed ? Rel::Le : Rel::Lt, g.hi});
    report.guard_log.push_back("transition " + std::to_string(i) + ": guard & " +
                               g.str() + " on ct");
  }
  return out;
}

bool acceptance_emptied(const Tst& before, const Tst& after) {
  for (size_t m = 0; m < after.acceptance.size(); ++m) {
    bool was = m < before.acceptance.size() && !before.acceptance[m].empty();
    if (was && after.acceptance[m].empty()) return true;
  }
  return false;
}

std::string PruneReport::to_json() const {
  nlohmann::ordered_json j;
  auto dump = [](const std::vector<Removal>& rs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& r : rs) {
      nlohmann::ordered_json e;
      e["what"] = r.what;
      e["label"] = r.label;
      e["verdict"] = r.verdict;
      arr.push_back(e);
    }
    return arr;
  };
  j["removed_states"] = dump(removed_states);
  j["removed_transitions"] = dump(removed_transitions);
  j["unknown_kept"] = unknown_kept;
  j["guard_log"] = guard_log;
  return j.dump(2);
}

} // namespace sitl
