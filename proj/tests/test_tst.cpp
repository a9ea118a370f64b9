#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sitl/compose.hpp"
#include "sitl/elementary.hpp"
#include "support/testutil.hpp"

using namespace sitl;
using test::has_accepting_run;
using test::random_signal;
using test::Rng;

namespace {

FormulaPtr fm(const std::string& s) { return parse_formula(s, FormulaMode::Mitl); }

// oracle-vs-transducer equivalence on n random periodic signals
size_t mismatch_count(const Tst& tst, const FormulaPtr& phi,
                      const std::vector<std::string>& props, size_t n,
                      uint64_t seed) {
  Rng rng(seed);
  size_t bad = 0;
  for (size_t i = 0; i < n; ++i) {
    auto sig = random_signal(rng, props, 3);
    bool run = has_accepting_run(tst, sig);
    Verdict v = eval_mitl(sig, phi, Rat(0));
    REQUIRE(v != Verdict::Unknown);
    if (run != (v == Verdict::True)) ++bad;
  }
  return bad;
}

} // namespace

TEST_CASE("elementary transducers validate structurally") {
  auto u = elementary_until("a", "b", "y");
  u.validate();
  CHECK(u.states.size() == 4);
  CHECK(u.acceptance.size() == 1);
  CHECK(u.acceptance[0].states.size() == 3); // the pending state is excluded

  auto e = elementary_eventually(Rat(3), false, "a", "y", "x0");
  e.validate();
  CHECK(e.clocks.size() == 1);
  auto ec = elementary_eventually(Rat(3), true, "a", "y", "x0");
  ec.validate();
  CHECK_THROWS(elementary_eventually(Rat(0), false, "a", "y", "x0"));

  elementary_not("a", "y").validate();
  elementary_and("a", "b", "y").validate();
  identity_tst("a", "y").validate();
  const_true_tst("y").validate();
}

TEST_CASE("until transducer equals the oracle on random signals") {
  auto u = elementary_until("a", "b", "y");
  CHECK(mismatch_count(u, fm("a U(0,inf) b"), {"a", "b"}, 60, 101) == 0);
}

TEST_CASE("until rejects the promise-forever shape") {
  // left operand forever, right never: output true at 0 must have no run
  BooleanSignal sig;
  sig.props = {"a", "b"};
  sig.times = {Rat(0), Rat(1)};
  sig.point_vals = {{true, false}, {true, false}};
  sig.interval_vals = {{true, false}};
  sig.period = Rat(1);
  auto u = elementary_until("a", "b", "y");
  CHECK(!has_accepting_run(u, sig));
}

TEST_CASE("bounded eventually equals the oracle, open and closed") {
  for (long b : {1, 2, 3}) {
    auto open_t = elementary_eventually(Rat(b), false, "a", "y", "x0");
    auto closed_t = elementary_eventually(Rat(b), true, "a", "y", "x0");
    std::string bo = "F(0," + std::to_string(b) + ") a";
    std::string bc = "F(0," + std::to_string(b) + "] a";
    CHECK(mismatch_count(open_t, fm(bo), {"a"}, 40, 300 + b) == 0);
    CHECK(mismatch_count(closed_t, fm(bc), {"a"}, 40, 400 + b) == 0);
  }
}

TEST_CASE("bound matters: F(0,3) vs F(0,1) on a step at t=2") {
  BooleanSignal sig;
  sig.props = {"a"};
  sig.times = {Rat(0), Rat(2), Rat(3)};
  sig.point_vals = {{false}, {true}, {false}};
  sig.interval_vals = {{false}, {true}};
  sig.period = Rat(3);
  auto t3 = elementary_eventually(Rat(3), false, "a", "y", "x0");
  auto t1 = elementary_eventually(Rat(1), false, "a", "y", "x0");
  CHECK(has_accepting_run(t3, sig));
  CHECK(!has_accepting_run(t1, sig));
}

TEST_CASE("not and and transduce pointwise") {
  auto n = elementary_not("a", "y");
  CHECK(mismatch_count(n, fm("!a"), {"a"}, 40, 7) == 0);
  auto a = elementary_and("a", "b", "y");
  CHECK(mismatch_count(a, fm("a & b"), {"a", "b"}, 40, 8) == 0);
}

TEST_CASE("sync product sizes and acceptance counts") {
  auto t1 = elementary_not("a", "y1"); // 2 states
  auto t2 = identity_tst("b", "y2");   // 2 states
  auto p = sync_product(t1, t2);
  p.validate();
  CHECK(p.states.size() <= t1.states.size() * t2.states.size());
  CHECK(p.acceptance.size() == t1.acceptance.size() + t2.acceptance.size());
  CHECK(p.inputs.size() == 2);
  CHECK(p.outputs.size() == 2);
}

TEST_CASE("product with a one-state top transducer preserves the language") {
  auto t = elementary_until("a", "b", "y");
  auto top = const_true_tst("z");
  auto p = sync_product(t, top);
  p.validate();
  Rng rng(77);
  for (int i = 0; i < 25; ++i) {
    auto sig = random_signal(rng, {"a", "b"}, 3);
    CHECK(has_accepting_run(p, sig) == has_accepting_run(t, sig));
  }
}

TEST_CASE("io composition: double negation is the identity") {
  auto inner = compile_formula(rewrite_to_core(fm("!(!(a))")));
  auto ident = compile_formula(rewrite_to_core(fm("a")));
  Rng rng(55);
  for (int i = 0; i < 40; ++i) {
    auto sig = random_signal(rng, {"a"}, 3);
    CHECK(has_accepting_run(inner, sig) == has_accepting_run(ident, sig));
  }
}

TEST_CASE("io composition rejects incompatible pairs") {
  auto id_a = identity_tst("a", "w");
  auto neg = elementary_not("w", "y");
  auto comp = io_compose(id_a, neg);
  comp.validate();
  // gamma(s1)=w implies lambda2 of the 'in' state only: each identity state
  // pairs with exactly one not-state
  CHECK(comp.states.size() == 2);
  CHECK_THROWS(io_compose(id_a, elementary_not("v", "y")));
}

TEST_CASE("compile: leaves, one-output invariant, validator") {
  auto leaf = compile_formula(rewrite_to_core(fm("a")));
  CHECK(leaf.outputs.size() == 1);
  CHECK(leaf.inputs == std::vector<std::string>{"a"});
  CHECK(leaf.states.size() == 2);

  CompileStats stats;
  auto both = compile_formula(
      rewrite_to_core(fm("(a U(0,inf) b) & F(0,3) c")), &stats);
  both.validate();
  CHECK(both.outputs.size() == 1);
  CHECK(stats.states == both.states.size());
  CHECK(!stats.log.empty());
}

TEST_CASE("compiler soundness on a fixed formula sample") {
  // full 10x100 sweep lives in the acceptance suite; a fast slice here
  std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"a U(0,inf) b", {"a", "b"}},
      {"F(0,2) a", {"a"}},
      {"!(a & b)", {"a", "b"}},
      {"(a U(0,inf) b) & F(0,2) a", {"a", "b"}},
  };
  for (auto& [text, props] : cases) {
    auto phi = fm(text);
    auto tst = compile_formula(rewrite_to_core(phi));
    CHECK(mismatch_count(tst, phi, props, 25, std::hash<std::string>{}(text)) == 0);
  }
}

TEST_CASE("cleanup drops false labels and unreachable states") {
  Tst t;
  t.inputs = {"a"};
  t.outputs = {"y"};
  t.add_state({ClockConstraint::top(), Bc::lit("a"), Bc::lit("y"), ""});
  t.add_state({ClockConstraint::top(), Bc::mk_false(), Bc::lit("y"), ""}); // dead
  t.add_state({ClockConstraint::top(), Bc::lit("a"), Bc::lit("y"), ""});   // unreachable
  t.add_transition({kInitialState, 0, ClockConstraint::top(), 0, Bc::mk_true(), Bc::lit("y")});
  t.add_transition({0, 1, ClockConstraint::top(), 0, Bc::lit("a"), Bc::lit("y")});
  AcceptSet f;
  f.states = {0, 1, 2};
  t.acceptance.push_back(f);
  t.cleanup();
  CHECK(t.states.size() == 1);
  CHECK(t.transitions.size() == 1);
  CHECK(t.acceptance[0].states.size() == 1);
}
