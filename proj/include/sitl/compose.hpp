#pragma once

// Synchronous product, input-output composition, and the bottom-up formula
// compiler producing one transducer per formula with a single output wire.

#include "sitl/formula.hpp"
#include "sitl/tst.hpp"

namespace sitl {

// Synchronous product.  Clock sets are concatenated (the compiler hands out
// fresh clock names, so no collisions); states S1 x S2; simultaneous,
// left-sided and right-sided transitions; labels conjoined; one lifted
// acceptance member per member of either factor.
Tst sync_product(const Tst& t1, const Tst& t2);

// Input-output composition: t1's outputs feed t2's inputs (alphabets must
// match as sets).  States restricted to pairs where gamma1(s1) implies
// lambda2(s2); transitions per the three clauses with the implication side
// conditions; Lambda = Lambda1, Gamma = Gamma2.
Tst io_compose(const Tst& t1, const Tst& t2);

struct CompileStats {
  size_t states = 0;
  size_t transitions = 0;
  std::vector<std::string> log; // per-node sizes, composition order record
};

// Compile a core formula bottom-up: leaves become identity (or constant)
// transducers, operator nodes are their elementary transducer io-composed
// onto the synchronous product of their children.  The result reads the
// formula's propositions and drives one output wire.
Tst compile_formula(const CorePtr& core, CompileStats* stats = nullptr);

// Output wire name used by compile_formula for the root node.
extern const char* kRootOutputWire;

} // namespace sitl
