#pragma once

#include <cstdint>
#include <functional>

#include "mucx/constraint_set.hpp"
#include "mucx/network.hpp"

namespace mucx::rotation {

/// Called once per constraint newly added to the core set, with the
/// transition assignment that exhibited it.
using DiscoveryHook = std::function<void(ConstraintId, const Assignment&)>;

struct RotationStats {
  std::uint64_t rotations = 0;    // one-variable perturbations examined
  std::uint64_t transitions = 0;  // perturbations that were transition assignments
  std::uint64_t mac_calls = 0;    // always zero; kept for uniform reporting
};

struct RotationResult {
  ConstraintSet muc;
  RotationStats stats;
};

/// Recursive model rotation over the enabled constraints. `a` must falsify
/// exactly one enabled constraint c; c joins `muc`, then every value change
/// of every variable of scp(c) that again falsifies exactly one constraint
/// c' not yet in `muc` adds c' and is rotated in turn, depth first, in scope
/// and domain order. No solver is involved. Throws ContractError when `a` is
/// not a transition assignment.
RotationResult recursive_mr(const Network& net, const ConstraintSet& enabled, ConstraintSet muc,
                            const Assignment& a, const DiscoveryHook& on_discover = {});

}  // namespace mucx::rotation
