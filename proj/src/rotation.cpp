#include "mucx/rotation.hpp"

#include <vector>

#include "mucx/error.hpp"

namespace mucx::rotation {

namespace {

struct Frame {
  Assignment assignment;
  ConstraintId falsified;
  std::size_t position = 0;  // next scope position to rotate
  std::size_t value = 0;     // next domain index at that position
};

}  // namespace

RotationResult recursive_mr(const Network& net, const ConstraintSet& enabled, ConstraintSet muc,
                            const Assignment& a, const DiscoveryHook& on_discover) {
  net.check_assignment(a);
  auto first = transition_check(net, a, enabled);
  if (!first) throw ContractError("recursive_mr: the assignment is not a transition assignment");

  RotationResult out;
  auto discover = [&](ConstraintId c, const Assignment& witness) {
    if (muc.contains(c)) return;
    muc.insert(c);
    if (on_discover) on_discover(c, witness);
  };
  discover(*first, a);

  // Explicit stack reproducing the depth-first recursion order.
  std::vector<Frame> stack;
  stack.push_back(Frame{a, *first});
  while (!stack.empty()) {
    const std::size_t top = stack.size() - 1;
    const Constraint& c = net.constraint(stack[top].falsified);
    if (stack[top].position == c.arity()) {
      stack.pop_back();
      continue;
    }
    const VarIndex x = c.scope()[stack[top].position];
    const auto& dom = net.variable(x).domain;
    if (stack[top].value == dom.size()) {
      ++stack[top].position;
      stack[top].value = 0;
      continue;
    }
    const Value v = dom[stack[top].value++];
    if (v == stack[top].assignment[x]) continue;

    ++out.stats.rotations;
    Assignment rotated = stack[top].assignment;
    rotated.set(x, v);
    // Only constraints on x can change status, and the previously falsified
    // constraint is one of them.
    std::size_t falsified = 0;
    ConstraintId only = 0;
    for (ConstraintId d : net.constraints_on(x)) {
      if (!enabled.contains(d) || evaluate(net, d, rotated)) continue;
      only = d;
      if (++falsified > 1) break;
    }
    if (falsified != 1) continue;
    ++out.stats.transitions;
    if (muc.contains(only)) continue;
    discover(only, rotated);
    stack.push_back(Frame{std::move(rotated), only});
  }

  out.muc = std::move(muc);
  return out;
}

}  // namespace mucx::rotation
