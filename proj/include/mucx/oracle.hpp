#pragma once

// Exhaustive ground truth for small networks. Everything here goes through
// the reference evaluate() path and plain chronological enumeration; nothing
// shares code with the MAC solver or the extraction algorithms.

#include <cstdint>
#include <optional>
#include <vector>

#include "mucx/constraint_set.hpp"
#include "mucx/network.hpp"

namespace mucx::oracle {

inline constexpr std::uint64_t kDefaultBound = 10'000'000;
inline constexpr std::size_t kMaxEnumerationConstraints = 20;

/// Product of the domain sizes, saturating at UINT64_MAX.
std::uint64_t search_space(const Network& net);

/// Lexicographically first solution of the enabled constraints (variable 0
/// most significant, domain order), or nullopt. Throws BoundExceeded when the
/// search space exceeds `bound`.
std::optional<Assignment> brute_sat(const Network& net, const ConstraintSet& enabled,
                                    std::uint64_t bound = kDefaultBound);
inline std::optional<Assignment> brute_sat(const Network& net, std::uint64_t bound = kDefaultBound) {
  return brute_sat(net, net.all(), bound);
}

/// True iff the enabled constraints are unsatisfiable and become satisfiable
/// once `c` alone is dropped.
bool is_transition_constraint(const Network& net, const ConstraintSet& enabled, ConstraintId c,
                              std::uint64_t bound = kDefaultBound);

/// True iff `subset` is unsatisfiable and each one-constraint removal is
/// satisfiable.
bool is_muc(const Network& net, const ConstraintSet& subset, std::uint64_t bound = kDefaultBound);
inline bool is_muc(const Network& net, std::uint64_t bound = kDefaultBound) { return is_muc(net, net.all(), bound); }

/// Every minimal unsatisfiable subset of `enabled`, sorted lexicographically.
/// Grows candidate subsets by cardinality and prunes supersets of cores
/// already found. Throws BoundExceeded above kMaxEnumerationConstraints.
std::vector<ConstraintSet> all_mucs(const Network& net, const ConstraintSet& enabled,
                                    std::uint64_t bound = kDefaultBound);
inline std::vector<ConstraintSet> all_mucs(const Network& net, std::uint64_t bound = kDefaultBound) {
  return all_mucs(net, net.all(), bound);
}

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::size_t variables = 6;
  std::size_t domain_size = 3;
  double density = 0.3;
  bool ensure_unsat = false;
};

/// Random binary network of mixed comparisons over {0..domain_size-1}. With
/// ensure_unsat, embeds a strict-inequality cycle or a (d+1)-clique of !=.
/// Same parameters, same network.
Network generate(const GeneratorParams& params);

}  // namespace mucx::oracle
