#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mucx/error.hpp"
#include "mucx/network.hpp"

using namespace mucx;
using mucx::fixtures::range;

namespace {

constexpr ConstraintId c1 = 0, c3 = 2, c4 = 3, c6 = 5;

// Odometer over every total assignment of a network.
template <class F>
void for_all_assignments(const Network& net, F&& f) {
  std::vector<std::size_t> idx(net.num_variables(), 0);
  std::vector<Value> values(net.num_variables());
  while (true) {
    for (VarIndex x = 0; x < net.num_variables(); ++x) values[x] = net.variable(x).domain[idx[x]];
    f(Assignment(values));
    std::size_t k = idx.size();
    while (true) {
      if (k == 0) return;
      --k;
      if (++idx[k] < net.variable(static_cast<VarIndex>(k)).domain.size()) break;
      idx[k] = 0;
    }
  }
}

}  // namespace

TEST_CASE("evaluate on the example 1 transition assignment") {
  Network net = fixtures::example1();
  Assignment a = fixtures::example1_transition();
  CHECK_FALSE(evaluate(net, c4, a));  // i<j with 2,0
  CHECK(evaluate(net, c1, a));        // m>i with 4,2
}

TEST_CASE("identity constraint holds everywhere") {
  Network net({{"x", range(-3, 3)}}, {{"same", {"x"}, eq(var("x"), var("x"))}});
  for (Value v = -3; v <= 3; ++v) CHECK(evaluate(net, 0, Assignment({v})));
}

TEST_CASE("evaluate refuses an assignment that leaves scope variables unbound") {
  Network net = fixtures::example1();
  CHECK_THROWS_AS(evaluate(net, c4, Assignment({2})), StructuralError);
  CHECK_THROWS_AS(violated_set(net, Assignment()), StructuralError);
}

TEST_CASE("violated_set") {
  SUBCASE("example 1 transition assignment violates only c4") {
    Network net = fixtures::example1();
    CHECK(violated_set(net, fixtures::example1_transition()) == net.set_of({c4}));
  }
  SUBCASE("fig 2 two-colouring violates only c3") {
    Network net = fixtures::fig2();
    CHECK(violated_set(net, Assignment({1, 2, 2, 1})) == net.set_of({2}));
  }
  SUBCASE("a solution violates nothing") {
    Network net = fixtures::fig2();
    ConstraintSet without_c3 = net.all();
    without_c3.erase(2);
    CHECK(violated_set(net, Assignment({1, 2, 2, 1}), without_c3).empty());
  }
}

TEST_CASE("transition_check") {
  Network net = fixtures::example1();
  CHECK(transition_check(net, fixtures::example1_transition()) == std::optional<ConstraintId>(c4));

  // j=3 breaks c3 (3<=2) and c6 (3<1).
  Assignment two = Assignment({2, 3, 1, 2, 4});
  CHECK(violated_set(net, two) == net.set_of({c3, c6}));
  CHECK_FALSE(transition_check(net, two).has_value());

  ConstraintSet without_c4 = net.all();
  without_c4.erase(c4);
  CHECK_FALSE(transition_check(net, fixtures::example1_transition(), without_c4).has_value());
}

TEST_CASE("restrict") {
  Network net = fixtures::example1();
  SUBCASE("to everything") {
    Network same = restrict(net, net.all());
    REQUIRE(same.num_constraints() == net.num_constraints());
    for (ConstraintId c = 0; c < net.num_constraints(); ++c) {
      CHECK(same.constraint(c).name() == net.constraint(c).name());
      CHECK(same.origin(c) == c);
    }
  }
  SUBCASE("to the minimal core") {
    Network core = restrict(net, net.set_of({c4, 4, c6}));
    CHECK(core.num_variables() == 5);
    REQUIRE(core.num_constraints() == 3);
    CHECK(core.constraint(0).name() == "c4");
    CHECK(core.constraint(1).name() == "c5");
    CHECK(core.constraint(2).name() == "c6");
    CHECK(core.origin(0) == c4);
    CHECK(core.origin(2) == c6);
    // Origins compose through nested restriction.
    Network inner = restrict(core, core.set_of({2}));
    CHECK(inner.origin(0) == c6);
  }
  SUBCASE("to nothing") {
    Network empty = restrict(net, net.none());
    CHECK(empty.num_constraints() == 0);
    CHECK(violated_set(empty, Assignment({0, 0, 0, 0, 0})).empty());
  }
}

TEST_CASE("a network solution has an empty violated set and vice versa") {
  Network net = fixtures::fig2();
  for_all_assignments(net, [&](const Assignment& a) {
    bool solution = true;
    for (ConstraintId c = 0; c < net.num_constraints(); ++c) solution = solution && evaluate(net, c, a);
    CHECK(violated_set(net, a).empty() == solution);
  });
}

TEST_CASE("a transition assignment solves the network minus its constraint") {
  Network net = fixtures::example1();
  int transitions = 0;
  for_all_assignments(net, [&](const Assignment& a) {
    auto c = transition_check(net, a);
    if (!c) return;
    ++transitions;
    ConstraintSet rest = net.all();
    rest.erase(*c);
    Network reduced = restrict(net, rest);
    CHECK(violated_set(reduced, a).empty());
  });
  CHECK(transitions > 0);
}

TEST_CASE("fast tabulated check agrees with reference evaluation") {
  Network net = fixtures::example1();
  for_all_assignments(net, [&](const Assignment& a) {
    for (ConstraintId c = 0; c < net.num_constraints(); ++c) {
      std::vector<ValueIndex> idx;
      for (auto x : net.constraint(c).scope()) idx.push_back(*net.value_index(x, a[x]));
      CHECK(net.allows(c, idx) == evaluate(net, c, a));
    }
  });
}

namespace {

Expression random_int_expr(std::mt19937_64& rng, const std::vector<std::string>& names, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  if (depth == 0 || pick(3) == 0) {
    if (pick(3) == 0) return cst(pick(7) - 3);
    return var(names[static_cast<std::size_t>(pick(static_cast<int>(names.size())))]);
  }
  switch (pick(5)) {
    case 0: return Expression::unary(Op::Neg, random_int_expr(rng, names, depth - 1));
    case 1: return Expression::unary(Op::Abs, random_int_expr(rng, names, depth - 1));
    case 2: return add(random_int_expr(rng, names, depth - 1), random_int_expr(rng, names, depth - 1));
    case 3: return sub(random_int_expr(rng, names, depth - 1), random_int_expr(rng, names, depth - 1));
    default: return mul(random_int_expr(rng, names, depth - 1), random_int_expr(rng, names, depth - 1));
  }
}

Expression random_bool_expr(std::mt19937_64& rng, const std::vector<std::string>& names, int depth) {
  static constexpr Op cmps[] = {Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Eq, Op::Ne};
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  if (depth > 0 && pick(3) == 0) {
    switch (pick(3)) {
      case 0: return Expression::unary(Op::Not, random_bool_expr(rng, names, depth - 1));
      case 1:
        return Expression::binary(Op::And, random_bool_expr(rng, names, depth - 1),
                                  random_bool_expr(rng, names, depth - 1));
      default:
        return Expression::binary(Op::Or, random_bool_expr(rng, names, depth - 1),
                                  random_bool_expr(rng, names, depth - 1));
    }
  }
  return Expression::binary(cmps[pick(6)], random_int_expr(rng, names, 2), random_int_expr(rng, names, 2));
}

}  // namespace

TEST_CASE("intensional and extensional forms of a constraint agree") {
  std::mt19937_64 rng(20240611);
  for (int round = 0; round < 200; ++round) {
    int arity = 1 + static_cast<int>(rng() % 3);
    std::vector<Variable> vars;
    std::vector<std::string> names;
    for (int i = 0; i < arity; ++i) {
      Value lo = static_cast<Value>(rng() % 5) - 2;
      Value size = 1 + static_cast<Value>(rng() % 5);
      names.push_back("v" + std::to_string(i));
      vars.push_back({names.back(), range(lo, lo + size - 1)});
    }
    Expression e = random_bool_expr(rng, names, 2);
    Network intensional(vars, {{"c", names, e}});
    TupleTable table = to_extensional(intensional, 0);
    Network extensional(vars, {{"c", names, table}});
    // The same table under the opposite polarity is the complement.
    TupleTable complement = table;
    complement.polarity = Polarity::Conflicts;
    Network negated(vars, {{"c", names, complement}});
    for_all_assignments(intensional, [&](const Assignment& a) {
      bool expected = evaluate(intensional, 0, a);
      CHECK(evaluate(extensional, 0, a) == expected);
      CHECK(evaluate(negated, 0, a) == !expected);
    });
  }
}

TEST_CASE("structural errors are reported at construction") {
  auto lt_xy = lt(var("x"), var("y"));
  std::vector<Variable> xy = {{"x", range(0, 2)}, {"y", range(0, 2)}};

  CHECK_THROWS_AS(Network({{"x", {}}}, {}), StructuralError);
  CHECK_THROWS_AS(Network({{"x", {2, 1}}}, {}), StructuralError);
  CHECK_THROWS_AS(Network({{"x", {1, 1}}}, {}), StructuralError);
  CHECK_THROWS_AS(Network({{"x", {1}}, {"x", {2}}}, {}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "z"}, lt_xy}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "x"}, lt_xy}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {}, lt_xy}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "y"}, lt_xy}, {"c", {"x", "y"}, lt_xy}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x"}, lt_xy}}), StructuralError);  // y outside scope
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "y"}, add(var("x"), var("y"))}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "y"}, lt(lt_xy, var("y"))}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "y"}, TupleTable{Polarity::Supports, {{0}}}}}), StructuralError);
  CHECK_THROWS_AS(Network(xy, {{"c", {"x", "y"}, TupleTable{Polarity::Supports, {{0, 7}}}}}), StructuralError);
}

TEST_CASE("arithmetic overflow is a structural error") {
  constexpr Value big = std::numeric_limits<Value>::max() / 2 + 1;
  CHECK_THROWS_AS(Network({{"x", {big}}}, {{"c", {"x"}, gt(mul(var("x"), cst(4)), cst(0))}}), StructuralError);
  CHECK_THROWS_AS(
      Network({{"x", {std::numeric_limits<Value>::min()}}}, {{"c", {"x"}, gt(Expression::unary(Op::Abs, var("x")), cst(0))}}),
      StructuralError);
}

TEST_CASE("expressions print in prefix syntax") {
  CHECK(eq(var("m"), add(var("l"), cst(2))).to_string() == "eq(m,add(l,2))");
  CHECK(Expression::unary(Op::Not, lt(cst(-1), Expression::unary(Op::Abs, var("x")))).to_string() ==
        "not(lt(-1,abs(x)))");
}
