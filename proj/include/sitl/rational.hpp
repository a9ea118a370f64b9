#pragma once

// Exact rational arithmetic used throughout the planner.  Every constant the
// pipeline touches (interval bounds, clock constants, LP coefficients,
// predicate geometry) stays rational; doubles appear only in exports.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sitl {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return numerator(r); }
inline BigInt rat_den(const Rat& r) { return denominator(r); }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline BigInt rat_floor(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// Canonical text form: "7", "-3/2".  Used for JSON payloads and map keys.
inline std::string rat_str(const Rat& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) s += "/" + rat_den(r).str();
  return s;
}

// Accepts integers, fractions ("3/2") and finite decimals ("0.25", "-1.5").
inline Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt n(text.substr(0, slash)), d(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rat(n, d);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(BigInt(text));
  std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
  if (tail.empty()) return Rat(BigInt(head.empty() ? "0" : head));
  bool neg = !head.empty() && head[0] == '-';
  if (neg || (!head.empty() && head[0] == '+')) head = head.substr(1);
  if (head.empty()) head = "0";
  BigInt scale = 1;
  for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
  BigInt n = BigInt(head) * scale + BigInt(tail);
  Rat r(n, scale);
  return neg ? Rat(-r) : r;
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

} // namespace sitl
