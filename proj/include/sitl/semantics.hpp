#pragma once

// Independent continuous-time MITL evaluator over finite-variability Boolean
// signals.  This is the test oracle the compiler, search, and plan pipeline
// are checked against; it deliberately shares no code with the transducer
// construction.
//
// Three-valued: on aperiodic signals a quantifier that reaches past the last
// breakpoint yields Unknown.  Periodic (lasso) signals always decide: the
// signal is materialized far enough that bounded windows are fully observed
// and unbounded operators are resolved by a wrap rule (a stretch of coverage
// at least one period long inside the stable zone covers forever).

#include "sitl/formula.hpp"
#include "sitl/interval_set.hpp"
#include "sitl/signal.hpp"

namespace sitl {

enum class Verdict { True, False, Unknown };

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "unknown";
  }
}

Verdict eval_mitl(const BooleanSignal& sig, const FormulaPtr& phi, const Rat& t);

// Additive horizon demand of a formula (sum of nested bounded constants).
Rat formula_demand(const FormulaPtr& phi);

} // namespace sitl
