#include "sitl/plan.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace sitl {

BcPtr TimedPlan::label_at(const Rat& t) const {
  if (t < 0) throw std::out_of_range("negative plan time");
  Rat tt = t;
  if (!suffix.empty() && tt > end()) {
    // fold into (T_p, T_{p+s}]
    Rat excess = tt - end();
    BigInt k = rat_floor(excess / period);
    Rat r = excess - Rat(k) * period;
    tt = (r == 0) ? end() : suffix_start() + r;
  }
  if (tt > end()) throw std::out_of_range("time beyond aperiodic plan");
  const PlanEntry* before = nullptr;
  for (size_t j = 0; j < entries(); ++j) {
    const PlanEntry& e = entry(j);
    if (e.t == tt) return e.instant;
    if (e.t < tt) before = &e;
  }
  if (!before) throw std::out_of_range("time precedes the plan start");
  return before->interval;
}

TimedPlan assemble_plan(const Tst& tst, const RegionAutomaton& ra,
                        const Lasso& lasso, const TimingSolution& timing,
                        const BigInt& time_scale) {
  if (lasso.suffix_len() == 0)
    throw std::invalid_argument("lasso without a suffix loop");
  TimedPlan p;
  p.predicate_alphabet = false;
  const Rat scale(time_scale);
  const size_t m = lasso.edges.size() - 1;
  auto state_label = [&](size_t idx) {
    int s = ra.states[idx].tst_state;
    return tst.states[s].in_label;
  };
  for (size_t j = 0; j <= m; ++j) {
    PlanEntry e;
    e.t = timing.cumulative[j] / scale;
    e.instant = tst.transitions[ra.edges[lasso.edges[j]].transition].in_label;
    e.interval = state_label(j + 1 < lasso.states.size() ? lasso.states[j + 1]
                                                         : lasso.states[lasso.prefix_len]);
    if (j + 1 < lasso.prefix_len) p.prefix.push_back(std::move(e));
    else if (j + 1 == lasso.prefix_len) p.prefix.push_back(std::move(e));
    else p.suffix.push_back(std::move(e));
  }
  p.period = (timing.cumulative[m] - timing.cumulative[lasso.prefix_len - 1]) / scale;
  if (p.period <= 0) throw std::logic_error("plan period must be positive");
  return p;
}

namespace {

TimedPlan rename_plan(const TimedPlan& plan,
                      const std::map<std::string, std::string>& table,
                      bool to_pred) {
  TimedPlan out = plan;
  auto ren = [&](std::vector<PlanEntry>& es) {
    for (auto& e : es) {
      e.instant = bc_rename(*e.instant, table);
      e.interval = bc_rename(*e.interval, table);
    }
  };
  ren(out.prefix);
  ren(out.suffix);
  out.predicate_alphabet = to_pred;
  return out;
}

} // namespace

TimedPlan to_predicate_plan(const TimedPlan& plan, const PropPredMap& map) {
  if (plan.predicate_alphabet) return plan;
  return rename_plan(plan, map.prop_to_pred(), true);
}

TimedPlan to_proposition_plan(const TimedPlan& plan, const PropPredMap& map) {
  if (!plan.predicate_alphabet) return plan;
  return rename_plan(plan, map.pred_to_prop(), false);
}

BooleanSignal plan_to_signal(const TimedPlan& plan_mu, const PropPredMap& map,
                             const FeasibilityOracle& oracle) {
  if (!plan_mu.predicate_alphabet)
    throw std::invalid_argument("plan_to_signal expects a predicate plan");
  const PredicateSet& set = oracle.predicates();
  BooleanSignal sig;
  for (auto& [prop, pred] : map.prop_to_pred()) sig.props.push_back(prop);

  auto valuation = [&](const BcPtr& label) {
    auto r = oracle.sat(*label);
    if (r.verdict != SatResult::Verdict::Sat)
      throw std::logic_error("plan label unsatisfiable after pruning: " + bc_str(*label));
    std::vector<bool> row;
    for (auto& prop : sig.props)
      row.push_back(set.eval_pred(map.pred_of(prop), *r.witness));
    return row;
  };

  // Breakpoints T_0..T_{p+s}; the final point carries the wrap instant and
  // the periodic fold regenerates everything after it (the representative
  // window (T_p, T_{p+s}] matches the signal's own fold convention).
  for (size_t j = 0; j < plan_mu.entries(); ++j) {
    const PlanEntry& e = plan_mu.entry(j);
    sig.times.push_back(e.t);
    sig.point_vals.push_back(valuation(e.instant));
    if (j + 1 < plan_mu.entries()) sig.interval_vals.push_back(valuation(e.interval));
  }
  if (!plan_mu.suffix.empty()) sig.period = plan_mu.period;
  sig.validate();
  return sig;
}

ControllerSchedule schedule(const TimedPlan& plan_mu, const TstS& tsts,
                            const PlanCheck& run, const FeasibilityOracle& oracle) {
  if (!run.accepted) throw std::invalid_argument("schedule needs an accepted run");
  ControllerSchedule sch;
  sch.period = plan_mu.period;
  const size_t total = plan_mu.entries();
  // segment j covers (T_j, T_{j+1}): dwell controller u_{delta_{j+1}}
  for (size_t j = 0; j < total; ++j) {
    const PlanEntry& e = plan_mu.entry(j);
    Rat t_end = j + 1 < total ? plan_mu.entry(j + 1).t
                              : plan_mu.entry(plan_mu.prefix.size()).t + plan_mu.period;
    // transition fired at the end of this segment
    size_t trans_idx = j < run.trans_seq.size() ? run.trans_seq[j] : run.trans_seq.back();
    ScheduleSegment seg;
    seg.t_start = e.t;
    seg.t_end = t_end;
    seg.dwell_controller = tsts.transitions[trans_idx].controller;
    seg.target_label = tsts.labels[tsts.transitions[trans_idx].dst];
    // boundary owner at t_start: successor when its state label entails the
    // instant label, else the predecessor (uniform case split, successor
    // preferred on ties)
    size_t here = run.state_seq[j];
    bool succ_ok =
        oracle.entails(*tsts.labels[here], *e.instant).verdict == Entail::Yes;
    if (j == 0) {
      seg.boundary_controller = seg.dwell_controller;
    } else {
      size_t prev_trans = run.trans_seq[j - 1];
      std::string pred_ctrl = tsts.transitions[prev_trans].controller;
      seg.boundary_controller = succ_ok ? seg.dwell_controller : pred_ctrl;
      if (!succ_ok) {
        size_t before = run.state_seq[j - 1];
        if (oracle.entails(*tsts.labels[before], *e.instant).verdict != Entail::Yes)
          throw std::logic_error("neither boundary entailment holds at step " +
                                 std::to_string(j));
      }
    }
    if (j < plan_mu.prefix.size()) sch.prefix.push_back(std::move(seg));
    else sch.suffix.push_back(std::move(seg));
  }
  return sch;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json entry_json(const PlanEntry& e) {
  nlohmann::ordered_json j;
  j["t"] = rat_str(e.t);
  j["instant_label"] = bc_str(*e.instant);
  j["interval_label"] = bc_str(*e.interval);
  return j;
}

BcPtr parse_conj_label(const std::string& text) {
  // labels serialize as conjunctions of literals: "(a & !b & c)" or "T"
  if (text == "T") return Bc::mk_true();
  if (text == "F") return Bc::mk_false();
  std::vector<BcPtr> lits;
  std::string body = text;
  if (!body.empty() && body.front() == '(') body = body.substr(1, body.size() - 2);
  size_t pos = 0;
  while (pos < body.size()) {
    size_t amp = body.find('&', pos);
    std::string tok = body.substr(pos, amp == std::string::npos ? amp : amp - pos);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (!tok.empty()) {
      bool neg = tok.front() == '!';
      lits.push_back(Bc::lit(neg ? tok.substr(1) : tok, !neg));
    }
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return Bc::conj(std::move(lits));
}

PlanEntry entry_from_json(const nlohmann::json& j) {
  PlanEntry e;
  e.t = parse_rat(j.at("t").get<std::string>());
  e.instant = parse_conj_label(j.at("instant_label").get<std::string>());
  e.interval = parse_conj_label(j.at("interval_label").get<std::string>());
  return e;
}

} // namespace

std::string TimedPlan::to_json() const {
  nlohmann::ordered_json j;
  j["alphabet"] = predicate_alphabet ? "predicates" : "propositions";
  nlohmann::ordered_json pre = nlohmann::ordered_json::array();
  for (auto& e : prefix) pre.push_back(entry_json(e));
  j["prefix"] = pre;
  nlohmann::ordered_json suf = nlohmann::ordered_json::array();
  for (auto& e : suffix) suf.push_back(entry_json(e));
  j["suffix"] = suf;
  j["period"] = rat_str(period);
  return j.dump(2);
}

TimedPlan TimedPlan::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  TimedPlan p;
  p.predicate_alphabet = j.at("alphabet").get<std::string>() == "predicates";
  for (auto& e : j.at("prefix")) p.prefix.push_back(entry_from_json(e));
  for (auto& e : j.at("suffix")) p.suffix.push_back(entry_from_json(e));
  p.period = parse_rat(j.at("period").get<std::string>());
  return p;
}

std::string ControllerSchedule::to_json() const {
  nlohmann::ordered_json j;
  auto seg_json = [](const ScheduleSegment& s) {
    nlohmann::ordered_json e;
    e["t_start"] = rat_str(s.t_start);
    e["t_end"] = rat_str(s.t_end);
    e["dwell_controller"] = s.dwell_controller;
    e["boundary_controller"] = s.boundary_controller;
    e["target_label"] = bc_str(*s.target_label);
    return e;
  };
  nlohmann::ordered_json pre = nlohmann::ordered_json::array();
  for (auto& s : prefix) pre.push_back(seg_json(s));
  j["prefix"] = pre;
  nlohmann::ordered_json suf = nlohmann::ordered_json::array();
  for (auto& s : suffix) suf.push_back(seg_json(s));
  j["suffix"] = suf;
  j["period"] = rat_str(period);
  return j.dump(2);
}

} // namespace sitl
