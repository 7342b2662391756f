#include "doctest.h"
#include "fixtures.hpp"
#include "mucx/error.hpp"
#include "mucx/oracle.hpp"
#include "mucx/rotation.hpp"

using namespace mucx;
using namespace mucx::rotation;

TEST_CASE("example1 rotations find nothing beyond c4") {
  auto net = fixtures::example1();
  auto a = fixtures::example1_transition();
  auto c4 = *net.find_constraint("c4");
  REQUIRE(transition_check(net, a) == c4);

  // Every single-variable change of i or j: none is a transition assignment
  // for a constraint other than c4.
  std::size_t examined = 0;
  for (auto x : net.constraint(c4).scope())
    for (Value v : net.variable(x).domain) {
      if (v == a[x]) continue;
      ++examined;
      Assignment b = a;
      b.set(x, v);
      auto t = transition_check(net, b);
      CHECK((!t || *t == c4));
    }
  CHECK(examined == 8);

  auto r = recursive_mr(net, net.all(), net.none(), a);
  CHECK(r.muc == net.set_of_names({"c4"}));
  CHECK(r.stats.rotations == 8);
  CHECK(r.stats.mac_calls == 0);
}

TEST_CASE("fig2 rotation from (1,2,2,1)") {
  auto net = fixtures::fig2();
  Assignment a({1, 2, 2, 1});
  std::vector<ConstraintId> seen;
  auto r = recursive_mr(net, net.all(), net.none(), a,
                        [&](ConstraintId c, const Assignment& w) {
                          seen.push_back(c);
                          CHECK(transition_check(net, w) == c);
                        });
  CHECK(r.muc.contains(*net.find_constraint("c3")));
  CHECK(seen.front() == *net.find_constraint("c3"));
  CHECK(seen.size() == r.muc.size());
  r.muc.for_each([&](ConstraintId c) { CHECK(oracle::is_transition_constraint(net, net.all(), c)); });
}

TEST_CASE("rotation requires a transition assignment") {
  auto net = fixtures::example1();
  CHECK_THROWS_AS(recursive_mr(net, net.all(), net.none(), Assignment({0, 0, 0, 0, 0})), ContractError);
  CHECK_THROWS_AS(recursive_mr(net, net.all(), net.none(), Assignment({0, 1})), StructuralError);
}

TEST_CASE("rotation is sound, monotone and idempotent on generated networks") {
  std::size_t rotated = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    oracle::GeneratorParams g;
    g.seed = seed;
    g.ensure_unsat = true;
    auto net = oracle::generate(g);
    auto mucs = oracle::all_mucs(net);
    // Rotate inside each minimal core from its first transition assignment.
    for (const auto& m : mucs) {
      auto first = m.ids().front();
      auto without = m;
      without.erase(first);
      auto sol = oracle::brute_sat(net, without);
      REQUIRE(sol);
      auto r = recursive_mr(net, m, net.none(), *sol, [&](ConstraintId c, const Assignment& w) {
        CHECK(m.contains(c));
        CHECK(transition_check(net, w, m) == c);
      });
      ++rotated;
      CAPTURE(seed);
      CHECK(r.muc.contains(first));
      CHECK(r.muc.is_subset_of(m));
      r.muc.for_each([&](ConstraintId c) { CHECK(oracle::is_transition_constraint(net, m, c)); });

      auto seeded = net.set_of({first});
      auto r2 = recursive_mr(net, m, seeded, *sol);
      CHECK(seeded.is_subset_of(r2.muc));
      auto again = recursive_mr(net, m, r.muc, *sol);
      CHECK(again.muc == r.muc);
    }
  }
  CHECK(rotated > 100);
}
