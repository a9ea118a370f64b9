#include "sitl/timing.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "sitl/simplex.hpp"

namespace sitl {

namespace {

size_t wrap_state(const Lasso& l, size_t j) {
  return j + 1 < l.states.size() ? l.states[j + 1] : l.states[l.prefix_len];
}

} // namespace

ClockHistory ClockHistory::build(const Tst& tst, const RegionAutomaton& ra,
                                 const Lasso& lasso) {
  ClockHistory h;
  const size_t m = lasso.edges.size() - 1;
  const size_t n_clocks = tst.clocks.size();
  h.window.assign(m + 1, std::vector<std::vector<size_t>>(n_clocks));
  for (size_t j = 0; j <= m; ++j) {
    for (size_t o = 0; o < n_clocks; ++o) {
      // walk back over edges j-1 .. 1; edge 0 fires at time zero where all
      // clocks are zero, so the walk stops there regardless of its reset
      for (size_t k = j; k-- > 1;) {
        auto& tr = tst.transitions[ra.edges[lasso.edges[k]].transition];
        if (tr.reset & (uint64_t(1) << o)) break;
        h.window[j][o].push_back(k);
      }
    }
  }
  return h;
}

StepCase classify_step(const Tst& tst, const RegionAutomaton& ra,
                       const Lasso& lasso, size_t j) {
  auto& edge = ra.edges[lasso.edges[j]];
  auto& tr = tst.transitions[edge.transition];
  for (auto& a : tr.guard.atoms)
    if (a.rel == Rel::Eq) return StepCase::GuardEquality;
  const ClockRegion& target = ra.states[wrap_state(lasso, j)].region;
  for (size_t o = 0; o < tst.clocks.size(); ++o) {
    if (tr.reset & (uint64_t(1) << o)) continue;
    if (!target.beyond(o) && target.frac_zero[o]) return StepCase::PinnedRegion;
  }
  return StepCase::Interval;
}

namespace {

struct Emitter {
  const Tst& tst;
  const RegionAutomaton& ra;
  const Lasso& lasso;
  TimingProblem problem;
  size_t m; // steps

  // backward non-reset window per (edge index, clock): tau indices
  std::vector<size_t> window(size_t j, size_t o) const {
    std::vector<size_t> w;
    for (size_t k = j; k-- > 1;) {
      auto& tr = tst.transitions[ra.edges[lasso.edges[k]].transition];
      if (tr.reset & (uint64_t(1) << o)) break;
      w.push_back(k);
    }
    return w;
  }

  // coefficients of clock o's value at the firing of edge j
  std::vector<Rat> fire_expr(size_t j, size_t o) const {
    std::vector<Rat> c(m, Rat(0));
    if (j == 0) return c; // fires at time zero, value 0
    c[j - 1] = 1; // tau_j
    for (size_t k : window(j, o)) c[k - 1] += 1;
    return c;
  }

  // value at the start of dwell j (just after edge j-1)
  std::vector<Rat> start_expr(size_t j, size_t o) const {
    std::vector<Rat> c(m, Rat(0));
    if (j == 0) return c;
    auto& prev = tst.transitions[ra.edges[lasso.edges[j - 1]].transition];
    if (prev.reset & (uint64_t(1) << o)) return c;
    return fire_expr(j - 1, o);
  }

  void add(LinConstraint::Kind kind, std::vector<Rat> tau, Rat epsc, Rat rhs,
           std::string note) {
    problem.constraints.push_back(
        {kind, std::move(tau), std::move(epsc), std::move(rhs), std::move(note)});
  }

  void le(std::vector<Rat> tau, Rat epsc, Rat rhs, std::string note) {
    add(LinConstraint::Kind::Le, std::move(tau), std::move(epsc), std::move(rhs),
        std::move(note));
  }
  void eq(std::vector<Rat> tau, Rat epsc, Rat rhs, std::string note) {
    add(LinConstraint::Kind::Eq, std::move(tau), std::move(epsc), std::move(rhs),
        std::move(note));
  }

  static std::vector<Rat> neg(std::vector<Rat> v) {
    for (auto& x : v) x = -x;
    return v;
  }
  static std::vector<Rat> sub(std::vector<Rat> a, const std::vector<Rat>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  }

  void emit() {
    problem.steps = m;
    const size_t pe = lasso.prefix_len;
    for (size_t j = 1; j <= m; ++j) {
      std::string sj = "step " + std::to_string(j);
      // progress: tau_j >= eps
      {
        std::vector<Rat> c(m, Rat(0));
        c[j - 1] = -1;
        le(std::move(c), Rat(1), Rat(0), sj + ": tau >= eps");
      }
      // dwell invariant over (T_{j-1}, T_j) in the state entered by edge j-1
      int s = ra.states[lasso.states[j]].tst_state;
      for (auto& a : tst.states[s].invariant.atoms) {
        auto vfire = fire_expr(j, a.clock);
        auto vstart = start_expr(j, a.clock);
        switch (a.rel) {
          case Rel::Lt:
          case Rel::Le: // sup over the open dwell is the fire value
            le(vfire, Rat(0), a.k, sj + ": invariant upper");
            break;
          case Rel::Ge:
          case Rel::Gt: // inf is the start value, not attained
            le(neg(vstart), Rat(0), -a.k, sj + ": invariant lower");
            break;
          case Rel::Eq:
            le(vfire, Rat(0), a.k, sj + ": invariant eq upper");
            le(neg(vstart), Rat(0), -a.k, sj + ": invariant eq lower");
            break;
        }
      }
      // guard atoms at the firing instant
      auto& tr = tst.transitions[ra.edges[lasso.edges[j]].transition];
      for (auto& a : tr.guard.atoms) {
        auto v = fire_expr(j, a.clock);
        switch (a.rel) {
          case Rel::Lt: le(v, Rat(1), a.k, sj + ": guard <"); break;
          case Rel::Le: le(v, Rat(0), a.k, sj + ": guard <="); break;
          case Rel::Eq: eq(v, Rat(0), a.k, sj + ": guard ="); break;
          case Rel::Ge: le(neg(v), Rat(0), -a.k, sj + ": guard >="); break;
          case Rel::Gt: le(neg(v), Rat(1), -a.k, sj + ": guard >"); break;
        }
      }
      // target region membership for non-reset clocks
      const ClockRegion& reg = ra.states[wrap_state(lasso, j)].region;
      for (size_t o = 0; o < tst.clocks.size(); ++o) {
        if (tr.reset & (uint64_t(1) << o)) continue;
        auto v = fire_expr(j, o);
        if (reg.beyond(o)) {
          le(neg(v), Rat(1), -ra.cmax[o], sj + ": region beyond " + tst.clocks[o]);
        } else if (reg.frac_zero[o]) {
          eq(v, Rat(0), Rat(reg.ip[o]), sj + ": region pin " + tst.clocks[o]);
        } else {
          le(neg(v), Rat(1), Rat(-reg.ip[o]), sj + ": region > " + tst.clocks[o]);
          le(v, Rat(1), Rat(reg.ip[o] + 1), sj + ": region < " + tst.clocks[o]);
        }
      }
      // fraction ordering inside the target region
      const auto& order = reg.order;
      for (size_t g = 0; g < order.size(); ++g) {
        // equal fractions within a group
        for (size_t i = 1; i < order[g].size(); ++i) {
          size_t o1 = order[g][0], o2 = order[g][i];
          auto d = sub(fire_expr(j, o1), fire_expr(j, o2));
          eq(d, Rat(0), Rat(reg.ip[o1] - reg.ip[o2]), sj + ": equal fractions");
        }
        if (g + 1 < order.size()) {
          size_t o1 = order[g][0], o2 = order[g + 1][0];
          // frac(o1) + eps <= frac(o2)
          auto d = sub(fire_expr(j, o1), fire_expr(j, o2));
          le(d, Rat(1), Rat(reg.ip[o1] - reg.ip[o2]), sj + ": fraction order");
        }
      }
    }
    // exact suffix recurrence at the loop point, skipped for clocks the
    // shared region marks beyond (their exact value stays irrelevant)
    const ClockRegion& loop_reg = ra.states[lasso.states[pe]].region;
    auto& tr_in = tst.transitions[ra.edges[lasso.edges[pe - 1]].transition];
    auto& tr_wrap = tst.transitions[ra.edges[lasso.edges[m]].transition];
    for (size_t o = 0; o < tst.clocks.size(); ++o) {
      if (loop_reg.beyond(o)) continue;
      std::vector<Rat> z1(m, Rat(0)), z2(m, Rat(0));
      if (!(tr_in.reset & (uint64_t(1) << o))) z1 = fire_expr(pe - 1, o);
      if (!(tr_wrap.reset & (uint64_t(1) << o))) z2 = fire_expr(m, o);
      eq(sub(z1, z2), Rat(0), Rat(0),
         "suffix recurrence " + tst.clocks[o]);
    }
  }
};

} // namespace

TimingProblem emit_constraints(const Tst& tst, const RegionAutomaton& ra,
                               const Lasso& lasso, const Rat& eps_cap) {
  Emitter e{tst, ra, lasso, {}, lasso.edges.size() - 1};
  e.problem.eps_cap = eps_cap;
  e.emit();
  return e.problem;
}

std::optional<TimingSolution> solve_timing(const TimingProblem& p) {
  LinearProgram lp;
  lp.n = p.steps + 1; // tau_1..tau_m, eps
  for (auto& c : p.constraints) {
    std::vector<Rat> row = c.tau_coef;
    row.resize(lp.n, Rat(0));
    row[p.steps] = c.eps_coef;
    if (c.kind == LinConstraint::Kind::Eq) lp.add_eq(std::move(row), c.rhs);
    else lp.add_le(std::move(row), c.rhs);
  }
  {
    std::vector<Rat> row(lp.n, Rat(0));
    row[p.steps] = 1;
    lp.add_le(std::move(row), p.eps_cap);
  }
  lp.objective.assign(lp.n, Rat(0));
  lp.objective[p.steps] = 1; // maximize the margin
  auto res = solve_lp(lp);
  if (res.status != LpResult::Status::Optimal || res.value <= 0) return std::nullopt;
  TimingSolution sol;
  sol.eps = res.value;
  sol.tau.assign(p.steps + 1, Rat(0));
  for (size_t j = 1; j <= p.steps; ++j) sol.tau[j] = res.x[j - 1];
  sol.cumulative.assign(p.steps + 1, Rat(0));
  for (size_t j = 1; j <= p.steps; ++j)
    sol.cumulative[j] = sol.cumulative[j - 1] + sol.tau[j];
  return sol;
}

void replay_timing(const Tst& tst, const RegionAutomaton& ra, const Lasso& lasso,
                   const TimingSolution& sol) {
  const size_t m = lasso.edges.size() - 1;
  const size_t pe = lasso.prefix_len;
  const size_t n_clocks = tst.clocks.size();
  std::vector<Rat> v(n_clocks, Rat(0));

  std::vector<Rat> at_loop_entry;
  auto step = [&](size_t j, bool check_region) {
    // dwell tau_j in the state entered by edge j-1
    int s = ra.states[lasso.states[j]].tst_state;
    const Rat& tau = sol.tau[j];
    if (tau <= 0) throw std::logic_error("replay: nonpositive dwell");
    for (auto& a : tst.states[s].invariant.atoms) {
      Rat sup = v[a.clock] + tau;
      Rat inf = v[a.clock];
      bool ok = true;
      switch (a.rel) {
        case Rel::Lt:
        case Rel::Le: ok = sup <= a.k; break;
        case Rel::Ge:
        case Rel::Gt: ok = inf >= a.k; break;
        case Rel::Eq: ok = sup <= a.k && inf >= a.k; break;
      }
      if (!ok) throw std::logic_error("replay: invariant violated at step " + std::to_string(j));
    }
    for (auto& x : v) x += tau;
    auto& tr = tst.transitions[ra.edges[lasso.edges[j]].transition];
    for (auto& a : tr.guard.atoms)
      if (!rel_eval(v[a.clock], a.rel, a.k))
        throw std::logic_error("replay: guard violated at step " + std::to_string(j));
    for (size_t o = 0; o < n_clocks; ++o)
      if (tr.reset & (uint64_t(1) << o)) v[o] = 0;
    if (check_region) {
      ClockRegion want = ra.states[wrap_state(lasso, j)].region;
      if (!(region_of(v, ra.cmax) == want))
        throw std::logic_error("replay: region sequence diverged at step " + std::to_string(j));
    }
  };

  // prefix + first period
  for (size_t j = 1; j <= m; ++j) {
    step(j, true);
    if (j == pe - 1) at_loop_entry = v;
  }
  if (pe == 1) at_loop_entry.assign(n_clocks, Rat(0));
  // exact valuation recurrence at the loop point, beyond-max clocks exempt
  const ClockRegion& loop_reg = ra.states[lasso.states[pe]].region;
  for (size_t o = 0; o < n_clocks; ++o) {
    if (loop_reg.beyond(o)) continue;
    if (v[o] != at_loop_entry[o])
      throw std::logic_error("replay: suffix valuation did not recur for " + tst.clocks[o]);
  }
  // second period: guards and invariants must hold again
  for (size_t j = pe; j <= m; ++j) step(j, false);
}

bool lasso_realizable(const Tst& tst, const RegionAutomaton& ra, const Lasso& lasso,
                      TimingSolution* out, const Rat& eps_cap) {
  auto problem = emit_constraints(tst, ra, lasso, eps_cap);
  auto sol = solve_timing(problem);
  if (!sol) return false;
  replay_timing(tst, ra, lasso, *sol);
  if (out) *out = *sol;
  return true;
}

std::string TimingProblem::dump() const {
  std::string s = "timing problem, " + std::to_string(steps) + " steps, eps_cap=" +
                  rat_str(eps_cap) + "\n";
  for (auto& c : constraints) {
    std::string row;
    for (size_t i = 0; i < c.tau_coef.size(); ++i) {
      if (c.tau_coef[i] == 0) continue;
      row += (row.empty() ? "" : " + ") + rat_str(c.tau_coef[i]) + "*tau" +
             std::to_string(i + 1);
    }
    if (c.eps_coef != 0)
      row += (row.empty() ? "" : " + ") + rat_str(c.eps_coef) + "*eps";
    if (row.empty()) row = "0";
    row += c.kind == LinConstraint::Kind::Eq ? " = " : " <= ";
    row += rat_str(c.rhs) + "   [" + c.note + "]";
    s += row + "\n";
  }
  return s;
}

std::string TimingSolution::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json taus = nlohmann::ordered_json::array();
  for (auto& t : tau) taus.push_back(rat_str(t));
  j["tau"] = taus;
  j["eps"] = rat_str(eps);
  nlohmann::ordered_json cum = nlohmann::ordered_json::array();
  for (auto& t : cumulative) cum.push_back(rat_str(t));
  j["T"] = cum;
  return j.dump(2);
}

} // namespace sitl
