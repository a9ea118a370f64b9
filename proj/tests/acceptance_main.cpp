// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion.  Exit status is nonzero when any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "sitl/elementary.hpp"
#include "sitl/pipeline.hpp"
#include "support/testutil.hpp"

using namespace sitl;
using test::Rng;

namespace {

struct Gate {
  int failures = 0;
  void line(int num, bool pass, const std::string& detail) {
    std::cout << "CRITERION " << num << ": " << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << " - " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
  }
};

PipelineConfig example_config() {
  PipelineConfig c;
  c.formula_text = test::paper_example_formula();
  c.predicates = test::paper_example_set();
  c.abstraction.guard = {Rat(1), Rat(4), true, true};
  c.u_max = Rat(400);
  return c;
}

// collected plans for the theorem-1 sweep (criterion 6) and solutions for
// the replay sweep (criterion 8)
struct Emitted {
  PropPredMap map;
  FormulaPtr varphi;
  TimedPlan plan_mu;
  PredicateSet predicates;
};
std::vector<Emitted> g_plans;
struct EmittedTiming {
  Tst tst;
  RegionAutomaton ra;
  Lasso lasso;
  TimingSolution sol;
  size_t n_clocks_beyond_exempt = 0;
};
std::vector<EmittedTiming> g_timings;

void record(const CompileResult& c, const PlanResult& p, const PipelineConfig& cfg) {
  g_plans.push_back({c.map, c.varphi, p.plan_mu, cfg.predicates});
  g_timings.push_back({c.tst_m, p.ra, p.lasso, p.timing});
}

// feasibility of a fixed tau vector within the emitted constraints: collect
// the implied bounds on eps and ask for a positive value
bool tau_satisfies(const TimingProblem& prob, const std::vector<Rat>& tau) {
  Rat eps_lo = 0;           // need eps > eps_lo is handled via margin search
  Rat eps_hi = prob.eps_cap;
  bool has_hi = true;
  for (auto& c : prob.constraints) {
    Rat acc = 0;
    for (size_t i = 0; i < c.tau_coef.size(); ++i) acc += c.tau_coef[i] * tau[i + 1];
    if (c.kind == LinConstraint::Kind::Eq) {
      if (c.eps_coef == 0) {
        if (acc != c.rhs) return false;
      } else {
        Rat eps = (c.rhs - acc) / c.eps_coef;
        if (eps <= 0) return false;
        eps_lo = std::max(eps_lo, eps);
        eps_hi = std::min(eps_hi, eps);
      }
      continue;
    }
    if (c.eps_coef == 0) {
      if (!(acc <= c.rhs)) return false;
    } else if (c.eps_coef > 0) { // acc + k*eps <= rhs: eps <= (rhs-acc)/k
      Rat bound = (c.rhs - acc) / c.eps_coef;
      if (has_hi) eps_hi = std::min(eps_hi, bound);
      else eps_hi = bound;
    } else { // acc - k*eps <= rhs: eps >= (acc-rhs)/k
      Rat bound = (acc - c.rhs) / (-c.eps_coef);
      eps_lo = std::max(eps_lo, bound);
    }
  }
  // need some eps with eps > 0, eps >= eps_lo, eps <= eps_hi
  Rat lo = std::max(eps_lo, Rat(0));
  if (eps_hi < lo) return false;
  if (eps_hi == lo && lo == 0) return false;
  return true;
}

std::string fmt_seconds(std::chrono::steady_clock::duration d) {
  double s = std::chrono::duration<double>(d).count();
  std::ostringstream out;
  out.precision(1);
  out << std::fixed << s << "s";
  return out.str();
}

} // namespace

int main() {
  Gate gate;
  auto t_start = std::chrono::steady_clock::now();

  // ---- criteria 1, 2, 7: the worked-example pipeline --------------------
  PipelineConfig config = example_config();
  CompileResult comp;
  PlanResult plan;
  bool pipeline_ok = false;
  std::string pipeline_err;
  try {
    comp = run_compile(config);
    if (comp.unrealizable) pipeline_err = comp.unrealizable_reason;
    else {
      plan = run_plan(comp, config);
      if (!plan.found) pipeline_err = plan.reason;
      else {
        pipeline_ok = true;
        record(comp, plan, config);
      }
    }
  } catch (const std::exception& e) {
    pipeline_err = e.what();
  }

  {
    bool pass = pipeline_ok;
    std::string detail;
    if (!pipeline_ok) {
      detail = "pipeline failed: " + pipeline_err;
    } else {
      FeasibilityOracle oracle(config.predicates);
      auto mk = [&](std::vector<std::pair<std::string, bool>> lits) {
        std::vector<BcPtr> v;
        for (auto& [n, pos] : lits) v.push_back(Bc::lit(n, pos));
        return Bc::conj(std::move(v));
      };
      std::vector<BcPtr> expect = {
          mk({{"mu1", true}, {"mu2", false}, {"mu3", false}, {"mu4", false}}),
          mk({{"mu1", true}, {"mu2", true}, {"mu3", false}, {"mu4", false}}),
          mk({{"mu1", false}, {"mu3", true}, {"mu4", true}})};
      if (plan.plan_mu.entries() < 3) {
        pass = false;
        detail = "plan has fewer than three entries";
      } else {
        for (size_t j = 0; j < 3 && pass; ++j) {
          auto got = plan.plan_mu.entry(j).interval;
          if (!oracle.semantically_equal(*got, *expect[j])) {
            pass = false;
            detail = "interval label " + std::to_string(j) + " is " + bc_str(*got);
          }
        }
      }
      if (pass) {
        // the paper's timing vector satisfies every emitted constraint
        auto prob = emit_constraints(comp.tst_m, plan.ra, plan.lasso,
                                     config.eps_cap * Rat(comp.time_scale));
        std::vector<Rat> ones(plan.lasso.edges.size(), Rat(comp.time_scale));
        ones[0] = 0;
        if (!tau_satisfies(prob, ones)) {
          pass = false;
          detail = "tau = (0,1,1,...) violates an emitted constraint";
        }
      }
      auto elapsed = std::chrono::steady_clock::now() - t_start;
      if (std::chrono::duration<double>(elapsed).count() > 60.0) {
        pass = false;
        detail += " (runtime over 60s)";
      }
      if (pass)
        detail = "labels match, tau=(0,1,1,...) feasible, runtime " +
                 fmt_seconds(elapsed);
    }
    gate.line(1, pass, detail);
  }

  {
    bool pass = pipeline_ok;
    std::string detail = "pipeline failed";
    if (pipeline_ok) {
      size_t s_count = comp.tst_varphi.states.size();
      size_t q_count = plan.ra.states.size();
      bool s_ok = s_count >= 7 && s_count <= 650;   // within 10x of 65
      bool q_ok = q_count >= 273 && q_count <= 27230; // within 10x of 2723
      pass = s_ok && q_ok;
      detail = "|S(TST_varphi)| = " + std::to_string(s_count) +
               " vs paper 65 (10x window 7..650); |Q(RA)| = " +
               std::to_string(q_count) + " vs paper 2723 (10x window 273..27230)";
    }
    gate.line(2, pass, detail);
  }

  {
    bool pass = pipeline_ok;
    std::string detail = "pipeline failed";
    if (pipeline_ok) {
      FeasibilityOracle oracle(config.predicates);
      // no surviving state or transition has a provably unsatisfiable label
      size_t checked = 0;
      for (auto& s : comp.tst_phi.states) {
        auto mu = bc_rename(*s.in_label, comp.map.prop_to_pred());
        if (oracle.sat(*mu).verdict == SatResult::Verdict::Unsat) pass = false;
        ++checked;
      }
      for (auto& t : comp.tst_phi.transitions) {
        auto mu = bc_rename(*t.in_label, comp.map.prop_to_pred());
        if (oracle.sat(*mu).verdict == SatResult::Verdict::Unsat) pass = false;
        ++checked;
      }
      // the formation-conflict state fell with a certificate
      bool cert = false;
      for (auto& r : comp.report.removed_states)
        if (r.label.find("mu1") != std::string::npos &&
            r.label.find("mu4") != std::string::npos &&
            r.label.find("!mu1") == std::string::npos &&
            r.label.find("!mu4") == std::string::npos &&
            !r.verdict.empty())
          cert = true;
      pass = pass && cert;
      // the paper's aside about mu2 & mu3 does not match the geometry; the
      // oracle keeps those states and this suite flags the discrepancy
      auto mu23 = Bc::conj2(Bc::lit("mu2"), Bc::lit("mu3"));
      bool mu23_sat = oracle.sat(*mu23).verdict == SatResult::Verdict::Sat;
      detail = std::to_string(checked) + " surviving labels satisfiable-or-unknown; " +
               std::string(cert ? "mu1&mu4 removal certified; " : "missing certificate; ") +
               (mu23_sat ? "note: mu2&mu3 is satisfiable (witness validated), "
                           "contradicting the paper's infeasibility aside"
                         : "mu2&mu3 reported unsat");
    }
    gate.line(7, pass, detail);
  }

  // ---- criterion 3: elementary transducers vs the oracle ----------------
  {
    size_t mismatches = 0, total = 0;
    auto sweep = [&](const Tst& tst, const FormulaPtr& phi,
                     std::vector<std::string> props, uint64_t seed) {
      Rng rng(seed);
      for (int i = 0; i < 200; ++i) {
        auto sig = test::random_signal(rng, props, 3);
        bool run = test::has_accepting_run(tst, sig);
        Verdict v = eval_mitl(sig, phi, Rat(0));
        if (v == Verdict::Unknown || run != (v == Verdict::True)) ++mismatches;
        ++total;
      }
    };
    sweep(elementary_until("a", "b", "y"),
          parse_formula("a U(0,inf) b", FormulaMode::Mitl), {"a", "b"}, 9001);
    for (long b : {1, 2, 3})
      sweep(elementary_eventually(Rat(b), false, "a", "y", "x0"),
            parse_formula("F(0," + std::to_string(b) + ") a", FormulaMode::Mitl),
            {"a"}, 9100 + b);
    sweep(elementary_not("a", "y"), parse_formula("!a", FormulaMode::Mitl), {"a"}, 9200);
    sweep(elementary_and("a", "b", "y"),
          parse_formula("a & b", FormulaMode::Mitl), {"a", "b"}, 9300);
    gate.line(3, mismatches == 0,
              std::to_string(total) + " signals over 6 transducers, " +
                  std::to_string(mismatches) + " mismatches");
  }

  // ---- criterion 4: compiler soundness suite ----------------------------
  {
    struct Case {
      std::string text;
      std::vector<std::string> props;
    };
    std::vector<Case> cases = {
        {"a U(0,inf) b", {"a", "b"}},
        {"F(0,2) a", {"a"}},
        {"G(0,2) a", {"a"}},
        {"!(a & b)", {"a", "b"}},
        {"a | b", {"a", "b"}},
        {"(a U(0,inf) b) & F(0,2) c", {"a", "b", "c"}},
        {"F[0,1] a", {"a"}},
        {"a U[0,2) b", {"a", "b"}},
        {"G(0,inf) a | F(0,1) b", {"a", "b"}},
        // the paper's example tree after rewriting
        {"G(0,inf) F[0,5) !a | (b U[0,10] c & G(0,15) d)", {"a", "b", "c", "d"}},
    };
    size_t mismatches = 0, total = 0;
    for (size_t ci = 0; ci < cases.size(); ++ci) {
      auto phi = parse_formula(cases[ci].text, FormulaMode::Mitl);
      auto tst = compile_formula(rewrite_to_core(phi));
      Rng rng(7000 + ci);
      for (int i = 0; i < 100; ++i) {
        auto sig = test::random_signal(rng, cases[ci].props, 3);
        bool run = test::has_accepting_run(tst, sig);
        Verdict v = eval_mitl(sig, phi, Rat(0));
        if (v == Verdict::Unknown || run != (v == Verdict::True)) ++mismatches;
        ++total;
      }
    }
    gate.line(4, mismatches == 0,
              std::to_string(cases.size()) + " formulas x 100 lasso signals = " +
                  std::to_string(total) + " runs, " + std::to_string(mismatches) +
                  " mismatches");
  }

  // ---- criterion 5: emptiness agreement ----------------------------------
  {
    size_t mismatches = 0;
    Rng rng(52);
    for (int i = 0; i < 25; ++i) {
      auto t = test::random_tst(rng);
      bool region = test::region_nonempty(t);
      bool brute = test::brute_force_nonempty(t, true);
      if (region != brute) ++mismatches;
    }
    gate.line(5, mismatches == 0,
              "25 seeded transducers, " + std::to_string(mismatches) + " mismatches");
  }

  // ---- extra plans for the theorem-1 sweep --------------------------------
  for (const char* text : {"G(0,inf) mu1", "F(0,3) mu3", "mu1 U(0,inf) mu3"}) {
    PipelineConfig cfg = example_config();
    cfg.formula_text = text;
    try {
      auto c2 = run_compile(cfg);
      if (c2.unrealizable) continue;
      auto p2 = run_plan(c2, cfg);
      if (p2.found) record(c2, p2, cfg);
    } catch (const std::exception&) {
    }
  }

  // ---- criterion 6: theorem-1 property over every emitted plan -----------
  {
    size_t violations = 0;
    for (auto& e : g_plans) {
      FeasibilityOracle oracle(e.predicates);
      auto sig = plan_to_signal(e.plan_mu, e.map, oracle);
      if (eval_mitl(sig, e.varphi, Rat(0)) != Verdict::True) ++violations;
    }
    gate.line(6, violations == 0,
              std::to_string(g_plans.size()) + " emitted plans checked, " +
                  std::to_string(violations) + " violations");
  }

  // ---- criterion 8: exact replay of every timing solution ----------------
  {
    size_t failures = 0;
    for (auto& e : g_timings) {
      try {
        replay_timing(e.tst, e.ra, e.lasso, e.sol);
      } catch (const std::exception&) {
        ++failures;
      }
    }
    gate.line(8, failures == 0,
              std::to_string(g_timings.size()) + " solutions replayed exactly, " +
                  std::to_string(failures) + " failures");
  }

  // ---- criterion 9: simulation checkpoints --------------------------------
  {
    bool pass = pipeline_ok;
    std::string detail = "pipeline failed";
    if (pipeline_ok) {
      try {
        auto sim = run_simulate(comp, plan, config);
        pass = sim.report.pass;
        const PredicateSet& set = config.predicates;
        RatVec x1, x2;
        for (size_t i = 0; i < sim.trajectory.times.size(); ++i) {
          if (sim.trajectory.times[i] == Rat(1)) x1 = sim.trajectory.points[i];
          if (sim.trajectory.times[i] == Rat(2)) x2 = sim.trajectory.points[i];
        }
        bool c1 = !x1.empty() && set.eval_pred("mu2", x1);
        bool c2 = !x2.empty() && set.eval_pred("mu3", x2);
        pass = pass && c1 && c2;
        detail = std::string("x(1) |= mu2: ") + (c1 ? "yes" : "NO") +
                 ", x(2) |= mu3: " + (c2 ? "yes" : "NO") +
                 ", conformance: " + (sim.report.pass ? "pass" : "fail") + " over " +
                 std::to_string(sim.trajectory.times.size()) + " samples (dt=1/100, " +
                 "prefix + 2 suffix periods)";
      } catch (const std::exception& ex) {
        pass = false;
        detail = ex.what();
      }
    }
    gate.line(9, pass, detail);
  }

  // ---- criterion 10: determinism ------------------------------------------
  {
    bool pass = false;
    std::string detail;
    try {
      auto cA = run_compile(example_config());
      auto pA = run_plan(cA, example_config());
      auto cB = run_compile(example_config());
      auto pB = run_plan(cB, example_config());
      pass = pA.found && pB.found &&
             pA.plan_mu.to_json() == pB.plan_mu.to_json() &&
             pA.plan_p.to_json() == pB.plan_p.to_json();
      detail = pass ? "two pipeline runs produced byte-identical plan JSON"
                    : "plan JSON differs between runs";
    } catch (const std::exception& ex) {
      detail = ex.what();
    }
    gate.line(10, pass, detail);
  }

  auto total = std::chrono::steady_clock::now() - t_start;
  std::cout << "acceptance total runtime: " << fmt_seconds(total) << std::endl;
  return gate.failures == 0 ? 0 : 1;
}
