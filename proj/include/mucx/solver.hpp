#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mucx/constraint_set.hpp"
#include "mucx/network.hpp"

namespace mucx {

using Clock = std::chrono::steady_clock;

/// Per-constraint conflict counters (dom/wdeg), indexed by ConstraintId.
using WeightTable = std::vector<std::uint64_t>;

}  // namespace mucx

namespace mucx::solver {

/// Current domains of all variables with trail-based restoration.
class DomainStore {
 public:
  explicit DomainStore(const Network& net);

  std::size_t size(VarIndex x) const { return size_[x]; }
  std::size_t initial_size(VarIndex x) const { return offset_[x + 1] - offset_[x]; }
  bool contains(VarIndex x, ValueIndex v) const { return present_[offset_[x] + v] != 0; }
  bool wiped(VarIndex x) const { return size_[x] == 0; }
  /// Smallest present value index; requires a non-empty domain.
  ValueIndex first(VarIndex x) const;
  std::vector<ValueIndex> values(VarIndex x) const;

  void remove(VarIndex x, ValueIndex v);
  /// Reduces dom(x) to {v}.
  void assign(VarIndex x, ValueIndex v);

  void push_level() { marks_.push_back(trail_.size()); }
  /// Restores every domain to its state at the matching push_level().
  void pop_level();
  std::size_t depth() const { return marks_.size(); }

  bool operator==(const DomainStore& other) const {
    return present_ == other.present_ && size_ == other.size_;
  }

 private:
  std::vector<std::size_t> offset_;
  std::vector<std::uint8_t> present_;
  std::vector<std::uint32_t> size_;
  std::vector<std::pair<VarIndex, ValueIndex>> trail_;
  std::vector<std::size_t> marks_;
};

/// Arc (constraint, scope position) revised by AC3.
struct Arc {
  ConstraintId constraint;
  std::uint32_t position;
};

/// AC3 over the enabled constraints of a network. Tracks which constraints
/// removed values (active) and bumps the weight of a constraint whose
/// revision wipes a domain out.
class Propagator {
 public:
  Propagator(const Network& net, const ConstraintSet& enabled, WeightTable initial_weights = {});

  DomainStore& store() { return store_; }
  const DomainStore& store() const { return store_; }
  const ConstraintSet& active() const { return active_; }
  const WeightTable& weights() const { return weights_; }
  std::uint64_t revisions() const { return revisions_; }
  const Network& network() const { return net_; }
  const ConstraintSet& enabled() const { return enabled_; }
  /// Enabled constraints on x.
  std::span<const ConstraintId> constraints_on(VarIndex x) const { return incidence_[x]; }

  /// Removes every value of the variable at `position` in c's scope that has
  /// no support under the current domains. Returns true iff something was
  /// removed.
  bool revise(ConstraintId c, std::size_t position);

  /// Runs AC3 to a fixpoint from the given arcs. Returns false on a wipeout.
  bool propagate(std::span<const Arc> seed);
  /// Seeds with every arc of every enabled constraint.
  bool propagate_all();
  /// Seeds with the arcs of constraints on x, excluding x itself.
  bool propagate_from(VarIndex x);

 private:
  void enqueue(ConstraintId c, std::size_t position);
  void enqueue_neighbours(VarIndex x, ConstraintId except);
  bool run_queue();
  bool seek_support(ConstraintId c, std::size_t position, ValueIndex v);

  const Network& net_;
  ConstraintSet enabled_;
  DomainStore store_;
  WeightTable weights_;
  ConstraintSet active_;
  std::vector<std::vector<ConstraintId>> incidence_;
  std::vector<std::size_t> arc_base_;
  std::vector<std::uint8_t> in_queue_;
  std::deque<Arc> queue_;
  // Last support found per (arc, value): arity value indices, or kNone.
  std::vector<std::size_t> residue_base_;
  std::vector<ValueIndex> residues_;
  std::vector<ValueIndex> scratch_;
  std::uint64_t revisions_ = 0;
};

struct Budget {
  std::optional<std::uint64_t> max_nodes;
  std::optional<Clock::time_point> deadline;
};

struct SolverParams {
  Budget budget;
  /// Starting dom/wdeg weights; empty means all 1.
  WeightTable initial_weights;
  /// Node cutoff of the first run when restarts are enabled; 0 disables them.
  std::uint64_t restart_base = 0;
  double restart_growth = 1.5;
};

enum class Outcome { Sat, Unsat, BudgetExhausted };

struct Stats {
  std::uint64_t nodes = 0;
  std::uint64_t revisions = 0;
  std::uint64_t restarts = 0;
  std::chrono::nanoseconds elapsed{0};

  /// Equality on the deterministic counters only.
  bool same_counts(const Stats& o) const {
    return nodes == o.nodes && revisions == o.revisions && restarts == o.restarts;
  }
};

struct SolveResult {
  Outcome outcome = Outcome::BudgetExhausted;
  Assignment assignment;  // set when outcome == Sat
  ConstraintSet active;
  WeightTable weights;
  Stats stats;

  bool sat() const { return outcome == Outcome::Sat; }
  bool unsat() const { return outcome == Outcome::Unsat; }
};

/// Complete MAC search restricted to the enabled constraints: d-way
/// branching, dom/wdeg variable ordering, ascending value ordering.
SolveResult solve(const Network& net, const ConstraintSet& enabled, const SolverParams& params = {});
inline SolveResult solve(const Network& net, const SolverParams& params = {}) {
  return solve(net, net.all(), params);
}

}  // namespace mucx::solver
