#pragma once

// Desk-scale closed loop: single-integrator dynamics under dwell-then-dash
// controllers realizing the abstraction contracts, exact piecewise-linear
// trajectories, and sampled plan-conformance checking.

#include "sitl/plan.hpp"

namespace sitl {

struct SystemSpec {
  size_t dimension = 0;
  Rat u_max = 1;
  RatVec x0;
  // single integrator only: xdot = u, |u| <= u_max
};

struct Trajectory {
  std::vector<Rat> times;        // strictly increasing, markers included
  std::vector<RatVec> points;
  std::vector<bool> is_marker;   // sample sits exactly on a plan instant
  std::string to_csv(const TimedPlan& plan_mu) const;
};

// Integrates the closed loop over the plan prefix plus n_periods suffix
// periods: each window dwells at the current point, then moves straight to
// the next interval label's witness at speed u_max, timed to arrive at the
// window's end.  Throws when a window is too short for the travel distance.
Trajectory simulate(const SystemSpec& spec, const ControllerSchedule& schedule,
                    const TimedPlan& plan_mu, const FeasibilityOracle& oracle,
                    const Rat& dt, size_t n_periods);

struct ConformanceReport {
  bool pass = false;
  std::string note;     // sampling caveat, or the first violation
  Rat violation_time;   // meaningful when !pass
  size_t samples = 0;
  std::string to_json() const;
};

// Evaluates the active plan label at every sample and marker by direct
// predicate evaluation; exact rational comparisons throughout.
ConformanceReport check_trajectory(const Trajectory& traj, const TimedPlan& plan_mu,
                                   const FeasibilityOracle& oracle);

} // namespace sitl
