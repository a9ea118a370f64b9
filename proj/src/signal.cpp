#include "sitl/signal.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace sitl {

void BooleanSignal::validate() const {
  if (times.empty() || times.front() != 0)
    throw std::invalid_argument("signal must start at T_0 = 0");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("breakpoints must strictly increase");
  if (point_vals.size() != times.size() ||
      interval_vals.size() + 1 != times.size())
    throw std::invalid_argument("value rows do not match breakpoints");
  for (auto& row : point_vals)
    if (row.size() != props.size())
      throw std::invalid_argument("point value width mismatch");
  for (auto& row : interval_vals)
    if (row.size() != props.size())
      throw std::invalid_argument("interval value width mismatch");
  if (period) {
    if (*period <= 0) throw std::invalid_argument("period must be positive");
    if (*period > end()) throw std::invalid_argument("period exceeds horizon");
  }
}

Rat BooleanSignal::fold(const Rat& t) const {
  if (!period || t <= end()) return t;
  // map into (end - period, end]
  Rat excess = t - end();
  Rat p = *period;
  BigInt k = rat_floor(excess / p);
  Rat r = excess - Rat(k) * p;
  if (r == 0) return end();
  return end() - p + r;
}

bool BooleanSignal::value_at(const std::string& prop, const Rat& t) const {
  auto it = std::find(props.begin(), props.end(), prop);
  if (it == props.end()) throw std::invalid_argument("unknown prop: " + prop);
  size_t pi = it - props.begin();
  Rat tt = fold(t);
  if (tt < 0 || tt > end()) throw std::out_of_range("time outside signal domain");
  // binary search for the position
  size_t lo = 0, hi = times.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (times[mid] <= tt) lo = mid;
    else hi = mid - 1;
  }
  if (times[lo] == tt) return point_vals[lo][pi];
  return interval_vals[lo][pi];
}

BooleanSignal BooleanSignal::unroll(const Rat& horizon) const {
  if (!period || end() >= horizon) return *this;
  BooleanSignal out = *this;
  Rat p = *period;
  // suffix window (end-p, end]: breakpoints strictly inside plus the end
  size_t first_suffix = 0;
  while (times[first_suffix] <= end() - p) ++first_suffix;
  Rat shift = p;
  while (out.times.back() < horizon) {
    for (size_t j = first_suffix; j < times.size(); ++j) {
      out.times.push_back(times[j] + shift);
      out.interval_vals.push_back(interval_vals[j - 1]);
      out.point_vals.push_back(point_vals[j]);
    }
    shift += p;
  }
  out.period = p;
  return out;
}

std::string BooleanSignal::to_json() const {
  nlohmann::ordered_json j;
  j["props"] = props;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (size_t i = 0; i < times.size(); ++i) {
    nlohmann::ordered_json e;
    e["t"] = rat_str(times[i]);
    e["point_values"] = point_vals[i];
    if (i + 1 < times.size()) e["interval_values"] = interval_vals[i];
    entries.push_back(e);
  }
  j["entries"] = entries;
  if (period) j["period"] = rat_str(*period);
  return j.dump(2);
}

BooleanSignal BooleanSignal::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  BooleanSignal s;
  s.props = j.at("props").get<std::vector<std::string>>();
  for (auto& e : j.at("entries")) {
    s.times.push_back(parse_rat(e.at("t").get<std::string>()));
    s.point_vals.push_back(e.at("point_values").get<std::vector<bool>>());
    if (e.contains("interval_values"))
      s.interval_vals.push_back(e.at("interval_values").get<std::vector<bool>>());
  }
  if (j.contains("period")) s.period = parse_rat(j.at("period").get<std::string>());
  s.validate();
  return s;
}

} // namespace sitl
