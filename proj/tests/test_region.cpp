#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sitl/region.hpp"
#include "support/testutil.hpp"

using namespace sitl;

TEST_CASE("one-clock regions: the classic four") {
  std::vector<Rat> cmax = {Rat(1)};
  auto r0 = region_of({Rat(0)}, cmax);
  auto rhalf = region_of({Rat(1, 2)}, cmax);
  auto r1 = region_of({Rat(1)}, cmax);
  auto r7 = region_of({Rat(7)}, cmax);
  CHECK(r0.key() != rhalf.key());
  CHECK(rhalf.key() != r1.key());
  CHECK(r1.key() != r7.key());
  CHECK(region_of({Rat(3, 4)}, cmax) == rhalf); // same open interval
  CHECK(region_of({Rat(9)}, cmax) == r7);       // both beyond max
  std::set<std::string> keys = {r0.key(), rhalf.key(), r1.key(), r7.key()};
  CHECK(keys.size() == 4);
}

TEST_CASE("fraction ordering distinguishes regions") {
  std::vector<Rat> cmax = {Rat(1), Rat(1)};
  auto a = region_of({Rat(3, 10), Rat(3, 10)}, cmax);
  auto b = region_of({Rat(2, 10), Rat(2, 10)}, cmax);
  CHECK(a == b); // equal fractions in both
  auto c = region_of({Rat(3, 10), Rat(7, 10)}, cmax);
  auto d = region_of({Rat(7, 10), Rat(3, 10)}, cmax);
  CHECK(!(c == d));
  CHECK(!(a == c));
}

TEST_CASE("time successors honor the invariant chain") {
  std::vector<Rat> cmax = {Rat(1)};
  auto r0 = zero_region(1);
  auto inv = ClockConstraint::single(0, Rel::Le, Rat(1));
  auto chain = time_successors(r0, inv, cmax);
  REQUIRE(chain.size() == 3); // {0}, (0,1), {1}
  CHECK(chain[0] == r0);
  CHECK(chain[1] == region_of({Rat(1, 2)}, cmax));
  CHECK(chain[2] == region_of({Rat(1)}, cmax));

  auto top_chain = time_successors(r0, ClockConstraint::top(), cmax);
  CHECK(top_chain.size() == 4); // ... plus (1, inf)
  CHECK(top_chain.back() == region_of({Rat(5)}, cmax));

  // invariant violated immediately: empty per the contract
  auto beyond = region_of({Rat(5)}, cmax);
  CHECK(time_successors(beyond, inv, cmax).empty());
}

TEST_CASE("strict invariant still allows firing at the boundary point") {
  std::vector<Rat> cmax = {Rat(1)};
  auto inv_lt = ClockConstraint::single(0, Rel::Lt, Rat(1));
  auto chain = time_successors(zero_region(1), inv_lt, cmax);
  REQUIRE(chain.size() == 3);
  CHECK(chain[2] == region_of({Rat(1)}, cmax)); // boundary fire point
}

TEST_CASE("region bound holds during enumeration") {
  std::vector<Rat> cmax = {Rat(2), Rat(3)};
  BigInt bound = region_count_bound(cmax);
  std::set<std::string> seen;
  // walk successors from a spread of start valuations
  for (long a = 0; a <= 6; ++a)
    for (long b = 0; b <= 8; ++b) {
      ClockRegion r = region_of({Rat(a, 2), Rat(b, 2)}, cmax);
      for (int step = 0; step < 30; ++step) {
        seen.insert(r.key());
        auto n = r.time_successor(cmax);
        if (n == r) break;
        r = n;
      }
    }
  CHECK(BigInt(seen.size()) <= bound);
}

TEST_CASE("build_ra on a reset self-loop cycles through few regions") {
  // one clock, invariant c <= 1, self loop at c = 1 with reset
  Tst t;
  t.outputs = {"y"};
  t.clocks = {"c"};
  t.add_state({ClockConstraint::single(0, Rel::Le, Rat(1)), Bc::mk_true(),
               Bc::lit("y"), ""});
  t.add_transition({kInitialState, 0, ClockConstraint::top(), 1, Bc::mk_true(), Bc::lit("y")});
  t.add_transition({0, 0, ClockConstraint::single(0, Rel::Eq, Rat(1)), 1,
                    Bc::mk_true(), Bc::lit("y")});
  AcceptSet f;
  f.states = {0};
  t.acceptance.push_back(f);
  auto ra = build_ra(t);
  CHECK(ra.states.size() <= 4);
  CHECK(!ra.edges.empty());
}

TEST_CASE("empty transducer yields a bare initial state") {
  Tst t;
  t.outputs = {"y"};
  t.add_state({ClockConstraint::top(), Bc::mk_true(), Bc::lit("y"), ""});
  t.add_transition({kInitialState, 0, ClockConstraint::top(), 0, Bc::mk_true(), Bc::lit("y")});
  // remove the only state's exits: no further transitions
  auto ra = build_ra(t);
  CHECK(ra.states.size() == 2); // q0 plus the entered state
  CHECK(ra.edges.size() == 1);
}

TEST_CASE("determinism: identical transducer gives identical RA") {
  test::Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    auto t = test::random_tst(rng);
    normalize_constants(t);
    auto ra1 = build_ra(t);
    auto ra2 = build_ra(t);
    REQUIRE(ra1.states.size() == ra2.states.size());
    REQUIRE(ra1.edges.size() == ra2.edges.size());
    for (size_t q = 0; q < ra1.states.size(); ++q)
      CHECK(ra1.states[q].region == ra2.states[q].region);
    for (size_t e = 0; e < ra1.edges.size(); ++e) {
      CHECK(ra1.edges[e].src == ra2.edges[e].src);
      CHECK(ra1.edges[e].dst == ra2.edges[e].dst);
      CHECK(ra1.edges[e].transition == ra2.edges[e].transition);
    }
  }
}

TEST_CASE("bisimulation samples: concrete runs induce RA paths and back") {
  test::Rng rng(123);
  for (int iter = 0; iter < 60; ++iter) {
    auto t = test::random_tst(rng);
    normalize_constants(t);
    auto ra = build_ra(t);
    // forward: every RA edge admits a concrete witness valuation pair
    for (auto& e : ra.edges) {
      auto& src = ra.states[e.src];
      auto& tr = t.transitions[e.transition];
      // replay the edge definition concretely from the source representative
      std::vector<Rat> v = src.region.representative(ra.cmax);
      if (src.tst_state == kInitialState) {
        CHECK(src.region == zero_region(t.clocks.size()));
      }
      // find a fire candidate whose region matches by walking successors
      ClockRegion cur = src.region;
      bool fired = false;
      for (int step = 0; step < 60 && !fired; ++step) {
        if (cur.satisfies(tr.guard)) {
          ClockRegion after = cur.apply_reset(tr.reset);
          if (after == ra.states[e.dst].region) {
            // concrete witness inside `cur`
            auto w = cur.representative(ra.cmax);
            CHECK(tr.guard.eval(w));
            fired = true;
          }
        }
        auto nxt = cur.time_successor(ra.cmax);
        if (nxt == cur) break;
        cur = nxt;
      }
      CHECK(fired);
    }
  }
}
