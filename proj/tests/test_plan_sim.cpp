#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sitl/pipeline.hpp"
#include "support/testutil.hpp"

using namespace sitl;

namespace {

PipelineConfig example_config() {
  PipelineConfig c;
  c.formula_text = test::paper_example_formula();
  c.predicates = test::paper_example_set();
  c.abstraction.guard = {Rat(1), Rat(4), true, true};
  c.u_max = Rat(400);
  return c;
}

struct Pipeline {
  PipelineConfig config = example_config();
  CompileResult c;
  PlanResult p;
  Pipeline() {
    c = run_compile(config);
    REQUIRE(!c.unrealizable);
    p = run_plan(c, config);
    REQUIRE(p.found);
  }
};

Pipeline& pipeline() {
  static Pipeline p;
  return p;
}

} // namespace

TEST_CASE("assemble_plan lays out instants and intervals") {
  auto& P = pipeline();
  auto& plan = P.p.plan_p;
  CHECK(plan.prefix.front().t == Rat(0));
  for (size_t j = 1; j < plan.entries(); ++j)
    CHECK(plan.entry(j).t > plan.entry(j - 1).t);
  CHECK(plan.period > 0);
  // d_p(0) is the first instant, d_p on (0,T_1) the first interval
  CHECK(bc_str(*plan.label_at(Rat(0))) == bc_str(*plan.prefix[0].instant));
  Rat mid = plan.prefix.size() > 1 ? plan.prefix[1].t / 2 : plan.period / 2;
  CHECK(bc_str(*plan.label_at(mid)) == bc_str(*plan.prefix[0].interval));
  // folding beyond the listed suffix reproduces the suffix labels
  Rat far = plan.end() + plan.period * 3 + Rat(1, 7);
  CHECK(bc_str(*plan.label_at(far)) == bc_str(*plan.label_at(far - plan.period)));
}

TEST_CASE("to_predicate_plan is the leafwise renaming and round trips") {
  auto& P = pipeline();
  auto mu = P.p.plan_mu;
  CHECK(mu.predicate_alphabet);
  auto back = to_proposition_plan(mu, P.c.map);
  CHECK(back.to_json() == P.p.plan_p.to_json());
  for (auto& e : mu.prefix) {
    for (auto& atom : bc_atoms(*e.instant)) CHECK(atom.substr(0, 2) == "mu");
  }
}

TEST_CASE("plan json round trips") {
  auto& P = pipeline();
  auto again = TimedPlan::from_json(P.p.plan_mu.to_json());
  CHECK(again.to_json() == P.p.plan_mu.to_json());
}

TEST_CASE("plan_to_signal satisfies the plan labels pointwise") {
  auto& P = pipeline();
  FeasibilityOracle oracle(P.config.predicates);
  auto sig = plan_to_signal(P.p.plan_mu, P.c.map, oracle);
  // witness consistency at breakpoints and on segments
  for (size_t j = 0; j < sig.times.size(); ++j) {
    auto label = P.p.plan_mu.label_at(sig.times[j]);
    // reconstruct the witness's valuation row and evaluate the label on it
    std::map<std::string, bool> val;
    for (size_t i = 0; i < sig.props.size(); ++i)
      val[P.c.map.pred_of(sig.props[i])] = sig.point_vals[j][i];
    CHECK(bc_eval(*label, val));
  }
}

TEST_CASE("theorem-1 shape: the emitted plan's signal satisfies Pr(phi)") {
  auto& P = pipeline();
  FeasibilityOracle oracle(P.config.predicates);
  auto sig = plan_to_signal(P.p.plan_mu, P.c.map, oracle);
  CHECK(eval_mitl(sig, P.c.varphi, Rat(0)) == Verdict::True);
}

TEST_CASE("empty suffix is rejected") {
  auto& P = pipeline();
  Lasso broken = P.p.lasso;
  broken.prefix_len = broken.states.size();
  CHECK_THROWS(assemble_plan(P.c.tst_m, P.p.ra, broken, P.p.timing, P.c.time_scale));
}

TEST_CASE("schedule covers the horizon with one controller per instant") {
  auto& P = pipeline();
  auto& sch = P.p.sched;
  REQUIRE(!sch.prefix.empty());
  CHECK(sch.prefix.front().t_start == Rat(0));
  Rat cursor = 0;
  for (auto& seg : sch.prefix) {
    CHECK(seg.t_start == cursor);
    CHECK(seg.t_end > seg.t_start);
    cursor = seg.t_end;
  }
  for (auto& seg : sch.suffix) {
    CHECK(seg.t_start == cursor);
    cursor = seg.t_end;
  }
  CHECK(cursor == P.p.plan_mu.entry(P.p.plan_mu.prefix.size()).t + sch.period);
  for (auto& seg : sch.prefix) CHECK(!seg.boundary_controller.empty());
}

TEST_CASE("simulation: constant plans stay at x0") {
  // a one-label pipeline: G(0,inf) mu1 from inside mu1
  PipelineConfig config;
  config.formula_text = "G(0,inf) mu1";
  config.predicates = test::paper_example_set();
  config.abstraction.guard = {Rat(1), Rat(4), true, true};
  config.u_max = Rat(400);
  auto c = run_compile(config);
  REQUIRE(!c.unrealizable);
  auto p = run_plan(c, config);
  REQUIRE(p.found);
  auto s = run_simulate(c, p, config);
  CHECK(s.report.pass);
  for (auto& x : s.trajectory.points) CHECK(x == config.predicates.x0);
}

TEST_CASE("worked example simulation conforms at the sampled resolution") {
  auto& P = pipeline();
  auto s = run_simulate(P.c, P.p, P.config);
  CHECK(s.report.pass);
  CHECK(s.report.note.find("sampling") != std::string::npos);
  // markers land exactly on plan instants
  FeasibilityOracle oracle(P.config.predicates);
  size_t markers = 0;
  for (size_t i = 0; i < s.trajectory.times.size(); ++i)
    if (s.trajectory.is_marker[i]) ++markers;
  CHECK(markers >= P.p.plan_mu.entries());
  // integrator exactness: resampling with half the step changes nothing at
  // shared grid points
  auto cfg2 = P.config;
  cfg2.dt = P.config.dt / 2;
  auto s2 = run_simulate(P.c, P.p, cfg2);
  size_t j = 0;
  for (size_t i = 0; i < s.trajectory.times.size(); ++i) {
    while (j < s2.trajectory.times.size() && s2.trajectory.times[j] < s.trajectory.times[i])
      ++j;
    if (j < s2.trajectory.times.size() && s2.trajectory.times[j] == s.trajectory.times[i])
      CHECK(s2.trajectory.points[j] == s.trajectory.points[i]);
  }
}

TEST_CASE("teleported samples are caught by the conformance check") {
  auto& P = pipeline();
  auto s = run_simulate(P.c, P.p, P.config);
  REQUIRE(s.report.pass);
  FeasibilityOracle oracle(P.config.predicates);
  auto broken = s.trajectory;
  broken.points[broken.points.size() / 2] = {Rat(100), Rat(100), Rat(100), Rat(100)};
  auto rep = check_trajectory(broken, P.p.plan_mu, oracle);
  CHECK(!rep.pass);
}

TEST_CASE("speed bound errors are reported with the window") {
  auto& P = pipeline();
  auto cfg = P.config;
  cfg.u_max = Rat(1, 1000);
  CHECK_THROWS_WITH_AS(run_simulate(P.c, P.p, cfg),
                       doctest::Contains("u_max too small"), std::runtime_error);
}
