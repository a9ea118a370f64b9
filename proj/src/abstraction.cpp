#include "sitl/abstraction.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "sitl/plan.hpp"

namespace sitl {

std::vector<BcPtr> label_alphabet(const Tst& tst_phi, const PropPredMap& map,
                                  const FeasibilityOracle& oracle) {
  std::vector<BcPtr> raw;
  std::set<std::string> seen; // structural prefilter
  auto push = [&](const BcPtr& prop_label) {
    BcPtr mu = bc_rename(*prop_label, map.prop_to_pred());
    if (seen.insert(bc_str(*mu)).second) raw.push_back(mu);
  };
  for (auto& s : tst_phi.states) push(s.in_label);
  for (auto& t : tst_phi.transitions) push(t.in_label);

  // semantic dedup: keep the first representative of each equivalence class
  std::vector<BcPtr> alphabet;
  for (auto& f : raw) {
    bool dup = false;
    for (auto& g : alphabet)
      if (oracle.semantically_equal(*f, *g)) { dup = true; break; }
    if (!dup) alphabet.push_back(f);
  }
  return alphabet;
}

AbstractionConfig AbstractionConfig::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  AbstractionConfig c;
  std::string strat = j.value("strategy", std::string("declared-complete"));
  if (strat == "declared-complete") c.strategy = Strategy::DeclaredComplete;
  else if (strat == "declared-list") c.strategy = Strategy::DeclaredList;
  else if (strat == "integrator-checked") c.strategy = Strategy::IntegratorChecked;
  else throw std::invalid_argument("unknown abstraction strategy: " + strat);
  auto parse_guard = [](const nlohmann::json& g) {
    IntervalGuard iv;
    iv.lo = parse_rat(g.at("lo").is_string() ? g.at("lo").get<std::string>()
                                             : std::to_string(g.at("lo").get<long long>()));
    iv.hi = parse_rat(g.at("hi").is_string() ? g.at("hi").get<std::string>()
                                             : std::to_string(g.at("hi").get<long long>()));
    iv.lo_closed = g.value("lo_closed", true);
    iv.hi_closed = g.value("hi_closed", true);
    if (iv.lo > iv.hi) throw std::invalid_argument("abstraction guard with lo > hi");
    if (iv.lo < 0) throw std::invalid_argument("abstraction guard must be nonnegative");
    return iv;
  };
  if (j.contains("guard")) c.guard = parse_guard(j.at("guard"));
  c.include_self_loops = j.value("include_self_loops", true);
  if (j.contains("u_max"))
    c.u_max = parse_rat(j.at("u_max").is_string() ? j.at("u_max").get<std::string>()
                                                  : std::to_string(j.at("u_max").get<long long>()));
  if (j.contains("transitions"))
    for (auto& e : j.at("transitions")) {
      ListEntry le;
      le.src = e.at("src").get<std::string>();
      le.dst = e.at("dst").get<std::string>();
      le.guard = e.contains("guard") ? parse_guard(e.at("guard")) : c.guard;
      c.list.push_back(std::move(le));
    }
  return c;
}

namespace {

std::string controller_name(size_t src, size_t dst) {
  return "u_" + std::to_string(src) + "_" + std::to_string(dst);
}

// Conservative upper bound on sup_{x in src-set} ||x - target_witness||.
// Exact-ish when the source carries a full-dimension ball; otherwise the
// bounding box corners dominate.
std::optional<Rat> sup_distance_sq_bound(const FeasibilityOracle& oracle,
                                         const Bc& src_label, const RatVec& wt) {
  const PredicateSet& set = oracle.predicates();
  // full-dimension identity ball in some positive literal of every conjunct?
  auto conjs = bc_dnf(src_label);
  std::optional<Rat> best;
  for (auto& cj : conjs) {
    std::optional<Rat> this_conj;
    for (auto& name : cj.pos) {
      auto& d = set.get(name);
      if (d.kind != PredicateDef::Kind::Ball) continue;
      if (d.L.rows != set.dimension) continue;
      bool ident = true;
      for (size_t r = 0; r < d.L.rows && ident; ++r)
        for (size_t c = 0; c < d.L.cols && ident; ++c)
          if (d.L.at(r, c) != (r == c ? 1 : 0)) ident = false;
      if (!ident) continue;
      // sup ||x - wt|| <= ||c - wt|| + eps; compare on squares via
      // (||c-wt|| + eps)^2 <= ||c-wt||^2 + 2*eps*bound_linear + eps^2 with
      // bound via  ||c-wt|| <= 1 + ||c-wt||^2  (loose but rational)
      Rat d2 = norm_sq(vec_sub(d.c, wt));
      Rat bound = d2 + 2 * d.eps * (1 + d2) + d.eps * d.eps;
      if (!this_conj || bound < *this_conj) this_conj = bound;
    }
    if (!this_conj) {
      if (!set.box) return std::nullopt;
      // max over box corners
      const Box& b = *set.box;
      size_t n = set.dimension;
      Rat mx = 0;
      for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        RatVec corner(n);
        for (size_t i = 0; i < n; ++i)
          corner[i] = (mask >> i) & 1 ? b.hi[i] : b.lo[i];
        Rat d2 = norm_sq(vec_sub(corner, wt));
        if (d2 > mx) mx = d2;
      }
      this_conj = mx;
    }
    if (!best || *this_conj > *best) best = this_conj; // sup over conjuncts
  }
  return best;
}

} // namespace

TstS build_abstraction(const std::vector<BcPtr>& alphabet,
                       const FeasibilityOracle& oracle,
                       const AbstractionConfig& config) {
  TstS t;
  t.labels = alphabet;
  // unique labeling: pairwise semantic inequality is the caller's contract,
  // asserted here
  for (size_t i = 0; i < t.labels.size(); ++i)
    for (size_t j = i + 1; j < t.labels.size(); ++j)
      if (oracle.semantically_equal(*t.labels[i], *t.labels[j]))
        throw std::logic_error("abstraction labels not pairwise distinct");

  const RatVec& x0 = oracle.predicates().x0;
  if (!x0.empty())
    for (size_t i = 0; i < t.labels.size(); ++i)
      if (oracle.predicates().eval_bc(*t.labels[i], x0)) t.initial.push_back(i);

  using Strategy = AbstractionConfig::Strategy;
  switch (config.strategy) {
    case Strategy::DeclaredComplete: {
      for (size_t i = 0; i < t.labels.size(); ++i)
        for (size_t j = 0; j < t.labels.size(); ++j) {
          if (i == j && !config.include_self_loops) continue;
          t.transitions.push_back({i, j, config.guard, true, controller_name(i, j)});
        }
      break;
    }
    case Strategy::DeclaredList: {
      auto find_label = [&](const std::string& text) -> size_t {
        for (size_t i = 0; i < t.labels.size(); ++i)
          if (bc_str(*t.labels[i]) == text) return i;
        throw std::invalid_argument("declared-list label not in alphabet: " + text);
      };
      for (auto& e : config.list)
        t.transitions.push_back({find_label(e.src), find_label(e.dst), e.guard, true,
                                 controller_name(find_label(e.src), find_label(e.dst))});
      break;
    }
    case Strategy::IntegratorChecked: {
      // single integrator at speed u_max: admit src -> dst when the sup
      // distance bound is within reach of the earliest admissible arrival
      for (size_t i = 0; i < t.labels.size(); ++i)
        for (size_t j = 0; j < t.labels.size(); ++j) {
          if (i == j && !config.include_self_loops) continue;
          if (i == j) {
            t.transitions.push_back({i, j, config.guard, true, controller_name(i, j)});
            continue; // dwell realizes a self pair for any duration
          }
          auto satj = oracle.sat(*t.labels[j]);
          if (satj.verdict != SatResult::Verdict::Sat) continue;
          auto bound = sup_distance_sq_bound(oracle, *t.labels[i], *satj.witness);
          if (!bound) continue; // cannot certify: no transition declared
          Rat reach = config.u_max * config.guard.lo;
          if (*bound <= reach * reach)
            t.transitions.push_back({i, j, config.guard, true, controller_name(i, j)});
        }
      break;
    }
  }
  return t;
}

PlanCheck check_plan(const TstS& tsts, const TimedPlan& plan,
                     const FeasibilityOracle& oracle) {
  PlanCheck out;
  if (!plan.predicate_alphabet) {
    out.reason = "plan must carry predicate labels";
    return out;
  }
  auto find_state = [&](const Bc& label) -> std::optional<size_t> {
    for (size_t i = 0; i < tsts.labels.size(); ++i)
      if (oracle.semantically_equal(*tsts.labels[i], label)) return i;
    return std::nullopt;
  };

  const size_t total = plan.entries();
  // interval label of entry j occupies (T_j, T_{j+1}); the run dwells there
  std::vector<size_t> states;
  for (size_t j = 0; j < total; ++j) {
    auto s = find_state(*plan.entry(j).interval);
    if (!s) {
      out.reason = "unknown label: " + bc_str(*plan.entry(j).interval);
      out.violation_index = j;
      return out;
    }
    states.push_back(*s);
  }
  // start: the first interval label must admit x0
  if (std::find(tsts.initial.begin(), tsts.initial.end(), states[0]) ==
      tsts.initial.end()) {
    out.reason = "initial state does not contain x0";
    out.violation_index = 0;
    return out;
  }

  // discrete steps at T_1..T_{p+s} and the wrap back into the suffix
  auto step_check = [&](size_t j, size_t from, size_t to, const Rat& tau,
                        const Bc& instant) -> bool {
    for (size_t ti = 0; ti < tsts.transitions.size(); ++ti) {
      auto& tr = tsts.transitions[ti];
      if (tr.src != from || tr.dst != to) continue;
      if (!tr.guard.admits(tau)) continue;
      if (oracle.entails(*tsts.transition_label(tr), instant).verdict != Entail::Yes)
        continue; // Unknown counts as failure (conservative)
      out.trans_seq.push_back(ti);
      return true;
    }
    out.violation_index = j;
    out.reason = "no admissible transition at step " + std::to_string(j) +
                 " (tau=" + rat_str(tau) + ")";
    return false;
  };

  out.state_seq = states;
  for (size_t j = 1; j < total; ++j) {
    Rat tau = plan.entry(j).t - plan.entry(j - 1).t;
    if (!step_check(j, states[j - 1], states[j], tau, *plan.entry(j).instant))
      return out;
  }
  // wrap: after the last listed instant the suffix repeats, so the next
  // step re-fires entry pe's transition tau_{p+1} later; one period check
  // suffices since timings and labels then repeat verbatim
  if (!plan.suffix.empty()) {
    size_t pe = plan.prefix.size();
    Rat wrap_tau = plan.entry(pe).t - plan.prefix.back().t;
    if (!step_check(total, states[total - 1], states[pe], wrap_tau,
                    *plan.entry(pe).instant))
      return out;
  }
  out.accepted = true;
  return out;
}

std::string TstS::dot() const {
  std::string s = "digraph tsts {\n  rankdir=LR;\n";
  for (size_t i = 0; i < labels.size(); ++i) {
    bool init = std::find(initial.begin(), initial.end(), i) != initial.end();
    s += "  a" + std::to_string(i) + " [shape=" + (init ? "doublecircle" : "ellipse") +
         ",label=\"" + bc_str(*labels[i]) + "\"];\n";
  }
  for (auto& t : transitions)
    s += "  a" + std::to_string(t.src) + " -> a" + std::to_string(t.dst) +
         " [label=\"" + t.guard.str() + " " + t.controller + "\"];\n";
  s += "}\n";
  return s;
}

} // namespace sitl
