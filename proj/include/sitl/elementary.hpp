#pragma once

// Elementary timed signal transducers for the core operator set, plus the
// identity and constant-true transducers used at formula-tree leaves.
// Variable names are the caller's wiring; clocks get fresh per-instance
// names.  See src/elementary.cpp for the full derivation record.

#include "sitl/tst.hpp"

namespace sitl {

// Untimed strict until over (0,inf): inputs {left, right}, output {out}.
Tst elementary_until(const std::string& left, const std::string& right,
                     const std::string& out);

// Bounded eventually over (0,b) or (0,b]: one clock named `clock_name`.
Tst elementary_eventually(const Rat& b, bool right_closed,
                          const std::string& in, const std::string& out,
                          const std::string& clock_name);

Tst elementary_not(const std::string& in, const std::string& out);
Tst elementary_and(const std::string& in1, const std::string& in2,
                   const std::string& out);

// Leaf transducers.
Tst identity_tst(const std::string& in, const std::string& out);
Tst const_true_tst(const std::string& out);

} // namespace sitl
