#pragma once

// Boolean combinations over named atoms.  The same tree serves as predicate
// combination (atoms are predicate names) and as transducer input/output
// label (atoms are proposition or wire names).

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace sitl {

struct Bc;
using BcPtr = std::shared_ptr<const Bc>;

struct Bc {
  enum class Kind { True, False, Lit, Not, And, Or };
  Kind kind = Kind::True;
  std::string atom;            // Lit
  bool positive = true;        // Lit polarity
  std::vector<BcPtr> kids;     // Not (1), And/Or (>=2)

  static BcPtr mk_true();
  static BcPtr mk_false();
  static BcPtr lit(std::string name, bool positive = true);
  static BcPtr negate(BcPtr a);
  static BcPtr conj(std::vector<BcPtr> xs); // flattens, folds constants
  static BcPtr disj(std::vector<BcPtr> xs);
  static BcPtr conj2(BcPtr a, BcPtr b);
  static BcPtr disj2(BcPtr a, BcPtr b);
};

bool bc_eval(const Bc& f, const std::map<std::string, bool>& val);
void bc_atoms(const Bc& f, std::set<std::string>& out);
std::set<std::string> bc_atoms(const Bc& f);

// Structural, deterministic text form; doubles as cache key.
std::string bc_str(const Bc& f);

// Leaf-wise atom renaming (Pr / Pr^-1 on labels).
BcPtr bc_rename(const Bc& f, const std::map<std::string, std::string>& table);

// Literal conjunct of a DNF: positive and negative atom sets.
struct Conjunct {
  std::set<std::string> pos, neg;
  bool operator<(const Conjunct& o) const {
    return pos != o.pos ? pos < o.pos : neg < o.neg;
  }
};

// Disjunction of contradiction-free conjuncts equivalent to f.  True yields
// one empty conjunct, False yields none.
std::vector<Conjunct> bc_dnf(const Bc& f);

// Propositional checks by truth table over the union of atom sets.
// Guarded: throws if more than 20 distinct atoms are involved.
bool bc_taut_implies(const Bc& f, const Bc& g); // every valuation of f also satisfies g
bool bc_equiv(const Bc& f, const Bc& g);
bool bc_sat(const Bc& f); // propositional satisfiability

BcPtr bc_from_conjunct(const Conjunct& c);

} // namespace sitl
