#pragma once

// Finite-variability Boolean signals: breakpoints with point values and
// open-interval values, optionally periodic after the last breakpoint.

#include "sitl/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sitl {

struct BooleanSignal {
  std::vector<std::string> props;
  // T_0 = 0 < T_1 < ... < T_k
  std::vector<Rat> times;
  // point_vals[j][i]: value of props[i] at times[j]      (k+1 rows)
  std::vector<std::vector<bool>> point_vals;
  // interval_vals[j][i]: value on (times[j], times[j+1]) (k rows)
  std::vector<std::vector<bool>> interval_vals;
  // Period of the suffix window (times.back()-period, times.back()]; the
  // signal then extends to [0, inf).  Absent: defined on [0, times.back()].
  std::optional<Rat> period;

  void validate() const;
  Rat end() const { return times.back(); }
  bool periodic() const { return period.has_value(); }

  // Fold a time >= prefix_end into the representative suffix window
  // (prefix_end, end()]; identity for t <= end() already in domain.
  Rat fold(const Rat& t) const;
  Rat prefix_end() const { return end() - (period ? *period : Rat(0)); }

  // Value of prop i at time t (t within domain for aperiodic signals).
  bool value_at(const std::string& prop, const Rat& t) const;

  // Materialize extra periods so the last breakpoint reaches at least
  // `horizon`.  No-op for aperiodic signals.
  BooleanSignal unroll(const Rat& horizon) const;

  std::string to_json() const;
  static BooleanSignal from_json(const std::string& text);
};

} // namespace sitl
