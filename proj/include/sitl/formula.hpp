#pragma once

// SITL/MITL abstract syntax, the text parser, rewriting to the core operator
// set {not, and, U_(0,inf), F_(0,b>}, and the proposition<->predicate maps.

#include "sitl/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sitl {

// Temporal operator interval.  hi_inf marks an infinite right endpoint;
// singletons are rejected at construction.
struct Interval {
  Rat lo;
  Rat hi;          // meaningful when !hi_inf
  bool hi_inf = false;
  bool lo_closed = false;
  bool hi_closed = false;

  void validate() const; // throws std::invalid_argument on a bad interval
  std::string str() const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// One tree for both logics; Atom leaves are propositions (mitl) or
// predicates (sitl) according to the formula's mode.
struct Formula {
  enum class Op { True, Atom, Not, And, Or, Until, Eventually, Always };
  Op op = Op::True;
  std::string name;          // Atom
  Interval iv;               // Until/Eventually/Always
  std::vector<FormulaPtr> kids;

  static FormulaPtr mk_true();
  static FormulaPtr atom(std::string name);
  static FormulaPtr mk_not(FormulaPtr a);
  static FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
  static FormulaPtr until(Interval iv, FormulaPtr a, FormulaPtr b);
  static FormulaPtr eventually(Interval iv, FormulaPtr a);
  static FormulaPtr always(Interval iv, FormulaPtr a);
};

std::string formula_str(const Formula& f);
bool formula_equal(const Formula& a, const Formula& b);
std::set<std::string> formula_atoms(const Formula& f);

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(std::string msg, size_t pos)
      : std::runtime_error(std::move(msg)), position(pos) {}
};

enum class FormulaMode { Sitl, Mitl };

// Grammar: precedence ! > U > & > |; temporal tokens U, F, G immediately
// followed by an interval '('|'[' num ',' num|'inf' ')'|']'; identifiers
// [a-z][a-z0-9_]*; 'T' / '_|_' for top/bottom.  U is right-associative.
// When `declared` is given, atom names outside it are an error.
FormulaPtr parse_formula(const std::string& text, FormulaMode mode,
                         const std::set<std::string>* declared = nullptr);

// Bijection p_i <-> mu_i.
class PropPredMap {
public:
  void add(const std::string& prop, const std::string& pred);
  // Derive p(name) = "p" + suffix convention or explicit table.
  static PropPredMap from_predicates(const std::vector<std::string>& preds);
  const std::string& prop_of(const std::string& pred) const;
  const std::string& pred_of(const std::string& prop) const;
  bool has_pred(const std::string& pred) const { return pred2prop_.count(pred) > 0; }
  bool has_prop(const std::string& prop) const { return prop2pred_.count(prop) > 0; }
  const std::map<std::string, std::string>& prop_to_pred() const { return prop2pred_; }
  const std::map<std::string, std::string>& pred_to_prop() const { return pred2prop_; }

private:
  std::map<std::string, std::string> prop2pred_, pred2prop_;
};

// Pr: replace predicate leaves by their propositions; pr_inv is the inverse.
FormulaPtr pr(const FormulaPtr& phi, const PropPredMap& map);
FormulaPtr pr_inv(const FormulaPtr& phi, const PropPredMap& map);

// Core operator set compilable by elementary transducers.
struct Core;
using CorePtr = std::shared_ptr<const Core>;
struct Core {
  enum class Op { True, Prop, Not, And, Until, EvBounded };
  Op op = Op::True;
  std::string name;       // Prop
  Rat bound;              // EvBounded, > 0
  bool right_closed = false; // EvBounded: F_(0,b] vs F_(0,b)
  std::vector<CorePtr> kids;
};

std::string core_str(const Core& c);

// Rewrites a supported-grammar MITL formula to the core set, preserving
// continuous-time semantics (identities oracle-validated in the tests).
// Throws UnsupportedInterval for temporal intervals with lower bound > 0.
struct UnsupportedInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};
CorePtr rewrite_to_core(const FormulaPtr& phi);

// Core back to a plain formula (used to feed the semantics oracle).
FormulaPtr core_to_formula(const CorePtr& c);

// Operator tree with one node per elementary transducer; leaves are
// propositions.  The core tree already has that shape, so this validates
// and returns it (in-order traversal reconstructs the core formula).
CorePtr formula_tree(const CorePtr& core);
size_t core_node_count(const Core& c);

} // namespace sitl
