#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mucx/constraint_set.hpp"
#include "mucx/network.hpp"
#include "mucx/random.hpp"
#include "mucx/solver.hpp"

namespace mucx::lstc {

/// How the walk leaves a local minimum.
enum class Escape {
  /// With probability `noise`, a random value change of a random variable of
  /// a random falsified constraint; otherwise the least damaging change among
  /// the variables of falsified constraints.
  RandomWalk,
  /// R-Novelty over the variables of one random falsified constraint.
  RNovelty,
};

struct LstcParams {
  std::int64_t initial_iterations = 10000;
  /// Added to the iteration budget on each new transition constraint.
  std::int64_t bonus = 10000;
  std::uint64_t seed = 1;
  Escape escape = Escape::RandomWalk;
  double noise = 0.3;
  /// Mine local minima for transition constraints. Off, the procedure is a
  /// plain weighted local search that only burns its budget.
  bool mine_transitions = true;
  bool record_trace = false;
  std::optional<Clock::time_point> deadline;
};

/// Search weights, one per constraint id, all starting at 1.
using SearchWeights = std::vector<std::uint64_t>;

struct Move {
  VarIndex variable = 0;
  ValueIndex value = 0;
  bool escape = false;

  bool operator==(const Move&) const = default;
};

/// Weight a falsified constraint contributes: its search weight, plus, for a
/// constraint already known to be in the core, an offset of one more than the
/// total weight of all other enabled constraints. Satisfying core constraints
/// therefore always comes first.
std::uint64_t objective(const Network& net, const ConstraintSet& enabled, std::span<const std::uint64_t> weights,
                        const ConstraintSet& muc, const Assignment& a);

/// No single-variable change strictly lowers the objective.
bool is_local_minimum(const Network& net, const ConstraintSet& enabled, std::span<const std::uint64_t> weights,
                      const ConstraintSet& muc, const Assignment& a);

/// Weighted local search state with incrementally maintained move scores.
class WeightedWalk {
 public:
  /// An empty `start` draws each variable uniformly from its domain.
  WeightedWalk(const Network& net, const ConstraintSet& enabled, const Assignment& start, const LstcParams& params);

  std::uint64_t objective() const { return static_cast<std::uint64_t>(objective_); }
  bool at_local_minimum() const;
  std::size_t falsified_count() const { return falsified_.size(); }
  /// The falsified constraint when exactly one is falsified.
  std::optional<ConstraintId> only_falsified() const;

  /// Greedy step off a non-minimum, escape step at a minimum.
  Move step();
  /// One strictly improving change with the best score; ties at random.
  Move improve();
  Move escape();

  void set_core(const ConstraintSet& muc);
  /// Increments the search weight of c.
  void penalize(ConstraintId c);

  std::uint64_t weight(ConstraintId c) const { return weights_[c]; }
  const SearchWeights& weights() const { return weights_; }
  const ConstraintSet& core() const { return core_; }
  Assignment assignment() const;

 private:
  struct Candidate {
    VarIndex variable;
    ValueIndex value;
    std::int64_t delta;
  };

  std::int64_t delta(VarIndex x, ValueIndex v) const { return score_[score_base_[x] + v] - score_[score_base_[x] + value_[x]]; }
  void apply(VarIndex x, ValueIndex v);
  bool falsified_under(ConstraintId c, std::size_t position, ValueIndex v);
  void refresh_contributions(ConstraintId c);
  void set_effective(ConstraintId c, std::int64_t effective);
  void recompute_effective();
  Move random_walk();
  Move rnovelty();
  Move finish(Move m);

  const Network& net_;
  ConstraintSet enabled_;
  LstcParams params_;
  Rng rng_;

  std::vector<ValueIndex> value_;
  SearchWeights weights_;
  ConstraintSet core_;
  std::vector<std::int64_t> effective_;
  std::int64_t objective_ = 0;

  std::vector<std::uint8_t> is_falsified_;
  std::vector<ConstraintId> falsified_;
  std::vector<std::size_t> falsified_pos_;

  std::vector<std::vector<ConstraintId>> incidence_;
  // score_[score_base_[x] + v]: weighted falsified constraints on x were x set to v.
  std::vector<std::size_t> score_base_;
  std::vector<std::int64_t> score_;
  // contrib_[contrib_base_[c] + ...]: per (position, value) falsified flag of c.
  std::vector<std::size_t> contrib_base_;
  std::vector<std::uint8_t> contrib_;
  std::vector<ValueIndex> scratch_;

  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> last_changed_;
  std::optional<VarIndex> last_variable_;
};

struct LstcStats {
  std::uint64_t iterations = 0;
  std::uint64_t local_minima = 0;
  std::uint64_t discoveries = 0;
  std::uint64_t rediscoveries = 0;
  bool timed_out = false;
};

struct LstcResult {
  ConstraintSet muc;
  LstcStats stats;
  std::vector<Move> trace;  // when params.record_trace
};

using DiscoveryHook = std::function<void(ConstraintId, const Assignment&)>;

/// Local search for transition constraints over the enabled constraints.
///
/// Runs while the iteration budget is non-negative. At a local minimum that
/// falsifies exactly one constraint c: a new c joins `muc` and earns the
/// bonus; a known c costs its search weight from the budget and has that
/// weight incremented. Then an escape move is made. Away from minima a
/// strictly improving move is made. Every iteration costs one unit.
LstcResult lstc(const Network& net, const ConstraintSet& enabled, ConstraintSet muc, const Assignment& start,
                const LstcParams& params, const DiscoveryHook& on_discover = {});

}  // namespace mucx::lstc
