#include "sitl/pipeline.hpp"

#include <stdexcept>

namespace sitl {

CompileResult run_compile(const PipelineConfig& config) {
  CompileResult r;
  std::vector<std::string> preds = config.predicates.names();
  r.map = PropPredMap::from_predicates(preds);

  std::set<std::string> declared(preds.begin(), preds.end());
  r.phi = parse_formula(config.formula_text, FormulaMode::Sitl, &declared);
  r.varphi = pr(r.phi, r.map);
  r.core = rewrite_to_core(r.varphi);
  r.tst_varphi = compile_formula(formula_tree(r.core), &r.stats);

  FeasibilityOracle oracle(config.predicates);
  r.tst_phi = o1_o2(r.tst_varphi, r.map, oracle, r.report);
  if (r.tst_phi.initial_transitions().empty()) {
    r.unrealizable = true;
    r.unrealizable_reason = "all initial transitions pruned: specification unsatisfiable";
    return r;
  }
  if (acceptance_emptied(r.tst_varphi, r.tst_phi)) {
    r.unrealizable = true;
    r.unrealizable_reason = "an acceptance member was emptied by O1/O2";
    return r;
  }

  r.alphabet = label_alphabet(r.tst_phi, r.map, oracle);
  r.abstraction = build_abstraction(r.alphabet, oracle, config.abstraction);
  if (r.abstraction.initial.empty()) {
    r.unrealizable = true;
    r.unrealizable_reason = "x0 satisfies no abstraction label";
    return r;
  }

  Tst after34 = o3_o4(r.tst_phi, r.abstraction, r.map, oracle, r.report);
  if (after34.initial_transitions().empty()) {
    r.unrealizable = true;
    r.unrealizable_reason = "all initial transitions pruned by O3/O4";
    return r;
  }
  if (acceptance_emptied(r.tst_phi, after34)) {
    r.unrealizable = true;
    r.unrealizable_reason = "an acceptance member was emptied by O3/O4";
    return r;
  }
  r.tst_m = o5(after34, r.abstraction, r.map, oracle, r.report);
  r.time_scale = normalize_constants(r.tst_m);
  r.tst_m.validate();
  return r;
}

PlanResult run_plan(const CompileResult& c, const PipelineConfig& config) {
  PlanResult p;
  if (c.unrealizable) {
    p.reason = c.unrealizable_reason;
    return p;
  }
  p.ra = build_ra(c.tst_m);

  FeasibilityOracle oracle(config.predicates);
  Rat eps_scaled = config.eps_cap * Rat(c.time_scale);
  TimingSolution best;
  auto validate = [&](const Lasso& l) {
    ++p.lassos_tried;
    return lasso_realizable(c.tst_m, p.ra, l, &best, eps_scaled);
  };
  bool bound_flag = false;
  auto lasso = find_lasso(p.ra, c.tst_m, /*require_y=*/true, validate,
                          config.lasso_bound, &bound_flag);
  p.bound_hit = bound_flag;
  if (!lasso) {
    p.reason = bound_flag ? "lasso enumeration bound exhausted"
                          : "no realizable accepting lasso";
    return p;
  }
  p.lasso = *lasso;
  p.timing = best;
  p.plan_p = assemble_plan(c.tst_m, p.ra, p.lasso, p.timing, c.time_scale);
  p.plan_mu = to_predicate_plan(p.plan_p, c.map);
  p.run = check_plan(c.abstraction, p.plan_mu, oracle);
  if (!p.run.accepted) {
    p.reason = "abstraction refused the plan: " + p.run.reason;
    return p;
  }
  p.sched = schedule(p.plan_mu, c.abstraction, p.run, oracle);
  p.found = true;
  return p;
}

SimResult run_simulate(const CompileResult& c, const PlanResult& p,
                       const PipelineConfig& config) {
  (void)c;
  if (!p.found) throw std::runtime_error("simulation needs a plan");
  FeasibilityOracle oracle(config.predicates);
  SystemSpec spec;
  spec.dimension = config.predicates.dimension;
  spec.u_max = config.u_max;
  spec.x0 = config.predicates.x0;
  SimResult s;
  s.trajectory = simulate(spec, p.sched, p.plan_mu, oracle, config.dt, config.n_periods);
  s.report = check_trajectory(s.trajectory, p.plan_mu, oracle);
  return s;
}

} // namespace sitl
