#pragma once

#include <cstdint>
#include <optional>

#include "mucx/solver.hpp"

namespace mucx::wcore {

struct WcoreResult {
  ConstraintSet core;
  /// dom/wdeg table of the last completed refutation.
  WeightTable weights;
  std::size_t iterations = 0;
  std::uint64_t mac_calls = 0;
  /// False when a solve ran out of budget; `core` is then the last set known
  /// to be unsatisfiable, not necessarily a fixpoint.
  bool verified = true;
};

/// Shrinks an unsatisfiable set of constraints to the fixpoint of its active
/// constraints: solve, keep only the constraints that pruned a value, repeat
/// until the active set equals the current set.
///
/// `first`, when given, is an already computed refutation of `start` and is
/// reused instead of solving again. Throws InternalContradiction if some
/// iteration finds a solution.
WcoreResult wcore(const Network& net, const ConstraintSet& start, const solver::SolverParams& params = {},
                  std::optional<solver::SolveResult> first = std::nullopt);

}  // namespace mucx::wcore
