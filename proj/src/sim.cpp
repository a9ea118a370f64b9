#include "sitl/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace sitl {

namespace {

// ||to - from|| <= u_max * duration, compared on squares.
bool speed_ok(const RatVec& from, const RatVec& to, const Rat& u_max,
              const Rat& duration) {
  if (duration <= 0) return from == to;
  Rat cap = u_max * duration;
  return norm_sq(vec_sub(to, from)) <= cap * cap;
}

} // namespace

Trajectory simulate(const SystemSpec& spec, const ControllerSchedule& schedule,
                    const TimedPlan& plan_mu, const FeasibilityOracle& oracle,
                    const Rat& dt, size_t n_periods) {
  (void)plan_mu; // window structure arrives through the schedule
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  if (spec.x0.size() != spec.dimension)
    throw std::invalid_argument("x0 dimension mismatch");

  struct Window {
    Rat t0, t1;
    RatVec target;
  };
  std::vector<Window> windows;
  auto witness_of = [&](const BcPtr& label) { return oracle.witness(*label); };
  for (auto& s : schedule.prefix)
    windows.push_back({s.t_start, s.t_end, witness_of(s.target_label)});
  Rat shift = 0;
  for (size_t k = 0; k < n_periods; ++k) {
    for (auto& s : schedule.suffix)
      windows.push_back({s.t_start + shift, s.t_end + shift, witness_of(s.target_label)});
    shift += schedule.period;
  }

  // Dwell-then-dash: hold the current point, then run straight to the next
  // witness, timed to arrive exactly at the window end.  The dash is fitted
  // strictly inside the final sampling gap of the window so the unavoidable
  // label excursion while crossing cell boundaries stays between samples;
  // check_trajectory reports at the sampled resolution only.
  struct Piece {
    Rat t0, t1;
    RatVec from, to;
  };
  std::vector<Piece> pieces;
  RatVec x = spec.x0;
  for (auto& w : windows) {
    Rat budget = w.t1 - w.t0;
    if (budget <= 0) throw std::logic_error("empty schedule window");
    if (x == w.target) {
      pieces.push_back({w.t0, w.t1, x, x});
      continue;
    }
    // gap between the last grid sample before t1 and t1 itself
    Rat g = w.t1 - dt * Rat(rat_floor(w.t1 / dt));
    if (g == 0) g = dt;
    Rat dash = g * Rat(9, 10);
    if (dash > budget / 2) dash = budget / 2;
    if (!speed_ok(x, w.target, spec.u_max, dash))
      throw std::runtime_error(
          "window [" + rat_str(w.t0) + "," + rat_str(w.t1) +
          "]: u_max too small to reach the target within the dash slot (needs "
          "||d||/u_max <= " + rat_str(dash) + ")");
    pieces.push_back({w.t0, w.t1 - dash, x, x});
    pieces.push_back({w.t1 - dash, w.t1, x, w.target});
    x = w.target;
  }

  // sample grid: multiples of dt plus all window boundaries (markers)
  Rat horizon = windows.back().t1;
  std::vector<Rat> grid;
  for (Rat t = 0; t <= horizon; t += dt) grid.push_back(t);
  std::set<std::string> marker_keys;
  for (auto& w : windows) {
    grid.push_back(w.t0);
    grid.push_back(w.t1);
    marker_keys.insert(rat_str(w.t0));
    marker_keys.insert(rat_str(w.t1));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Trajectory traj;
  size_t pi = 0;
  for (auto& t : grid) {
    while (pi + 1 < pieces.size() && t > pieces[pi].t1) ++pi;
    const Piece& p = pieces[pi];
    Rat span = p.t1 - p.t0;
    Rat lam = span == 0 ? Rat(0) : (t - p.t0) / span;
    if (lam < 0) lam = 0;
    if (lam > 1) lam = 1;
    RatVec pos = vec_add(p.from, vec_scale(vec_sub(p.to, p.from), lam));
    traj.times.push_back(t);
    traj.points.push_back(std::move(pos));
    traj.is_marker.push_back(marker_keys.count(rat_str(t)) > 0);
  }
  return traj;
}

ConformanceReport check_trajectory(const Trajectory& traj, const TimedPlan& plan_mu,
                                   const FeasibilityOracle& oracle) {
  ConformanceReport rep;
  rep.samples = traj.times.size();
  const PredicateSet& set = oracle.predicates();
  for (size_t i = 0; i < traj.times.size(); ++i) {
    BcPtr label = plan_mu.label_at(traj.times[i]);
    if (!set.eval_bc(*label, traj.points[i])) {
      rep.pass = false;
      rep.violation_time = traj.times[i];
      rep.note = "label " + bc_str(*label) + " violated at t=" + rat_str(traj.times[i]);
      return rep;
    }
  }
  rep.pass = true;
  rep.note = "all samples conform; satisfaction certified at the sampling "
             "resolution only (dt grid plus plan instants)";
  return rep;
}

std::string Trajectory::to_csv(const TimedPlan& plan_mu) const {
  std::string s = "t";
  if (!points.empty())
    for (size_t d = 0; d < points[0].size(); ++d) s += ",x" + std::to_string(d + 1);
  s += ",marker,active_label\n";
  for (size_t i = 0; i < times.size(); ++i) {
    s += rat_str(times[i]);
    for (auto& v : points[i]) {
      char buf[32];
      snprintf(buf, sizeof buf, "%.9f", rat_double(v));
      s += std::string(",") + buf;
    }
    s += is_marker[i] ? ",1," : ",0,";
    s += bc_str(*plan_mu.label_at(times[i]));
    s += "\n";
  }
  return s;
}

std::string ConformanceReport::to_json() const {
  nlohmann::ordered_json j;
  j["pass"] = pass;
  j["note"] = note;
  j["samples"] = samples;
  if (!pass) j["violation_time"] = rat_str(violation_time);
  return j.dump(2);
}

} // namespace sitl
