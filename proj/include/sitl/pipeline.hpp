#pragma once

// End-to-end orchestration shared by the CLI and the python module: parse,
// compile, prune, abstract, search, time, plan, simulate.  Stages compose
// through value types (and through files at the CLI layer) so each is
// independently testable.

#include "sitl/abstraction.hpp"
#include "sitl/compose.hpp"
#include "sitl/plan.hpp"
#include "sitl/prune.hpp"
#include "sitl/region.hpp"
#include "sitl/search.hpp"
#include "sitl/sim.hpp"
#include "sitl/timing.hpp"

#include <memory>

namespace sitl {

struct PipelineConfig {
  std::string formula_text;
  PredicateSet predicates;
  AbstractionConfig abstraction;
  Rat eps_cap = 1;
  Rat dt = Rat(1, 100);
  size_t lasso_bound = 1000;
  size_t n_periods = 2;
  Rat u_max = 1;
};

struct CompileResult {
  PropPredMap map;
  FormulaPtr phi;        // SITL input
  FormulaPtr varphi;     // Pr(phi)
  CorePtr core;
  CompileStats stats;
  Tst tst_varphi;        // compiled, unpruned
  Tst tst_phi;           // after O1/O2
  Tst tst_m;             // after O3/O4/O5, constants normalized
  BigInt time_scale;     // constant normalization factor
  std::vector<BcPtr> alphabet;
  TstS abstraction;
  PruneReport report;
  bool unrealizable = false;
  std::string unrealizable_reason;
};

struct PlanResult {
  bool found = false;
  bool bound_hit = false;
  std::string reason;
  RegionAutomaton ra;
  Lasso lasso;
  TimingSolution timing;
  TimedPlan plan_p;   // propositions
  TimedPlan plan_mu;  // predicates
  PlanCheck run;
  ControllerSchedule sched;
  size_t lassos_tried = 0;
};

struct SimResult {
  Trajectory trajectory;
  ConformanceReport report;
};

CompileResult run_compile(const PipelineConfig& config);
PlanResult run_plan(const CompileResult& c, const PipelineConfig& config);
SimResult run_simulate(const CompileResult& c, const PlanResult& p,
                       const PipelineConfig& config);

// Shared oracle construction (the predicate set owns box/x0/seed).
inline FeasibilityOracle make_oracle(const PredicateSet& set) {
  return FeasibilityOracle(set);
}

} // namespace sitl
