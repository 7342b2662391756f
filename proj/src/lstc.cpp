#include "mucx/lstc.hpp"

#include <algorithm>
#include <limits>

#include "mucx/error.hpp"

namespace mucx::lstc {

namespace {

std::uint64_t core_offset(const ConstraintSet& enabled, std::span<const std::uint64_t> weights,
                          const ConstraintSet& muc) {
  std::uint64_t total = 1;
  enabled.for_each([&](ConstraintId c) {
    if (!muc.contains(c)) total += weights[c];
  });
  return total;
}

}  // namespace

std::uint64_t objective(const Network& net, const ConstraintSet& enabled, std::span<const std::uint64_t> weights,
                        const ConstraintSet& muc, const Assignment& a) {
  const std::uint64_t offset = core_offset(enabled, weights, muc);
  std::uint64_t total = 0;
  enabled.for_each([&](ConstraintId c) {
    if (!evaluate(net, c, a)) total += weights[c] + (muc.contains(c) ? offset : 0);
  });
  return total;
}

bool is_local_minimum(const Network& net, const ConstraintSet& enabled, std::span<const std::uint64_t> weights,
                      const ConstraintSet& muc, const Assignment& a) {
  const std::uint64_t here = objective(net, enabled, weights, muc, a);
  for (VarIndex x = 0; x < net.num_variables(); ++x) {
    for (Value v : net.variable(x).domain) {
      if (v == a[x]) continue;
      Assignment moved = a;
      moved.set(x, v);
      if (objective(net, enabled, weights, muc, moved) < here) return false;
    }
  }
  return true;
}

WeightedWalk::WeightedWalk(const Network& net, const ConstraintSet& enabled, const Assignment& start,
                           const LstcParams& params)
    : net_(net),
      enabled_(enabled),
      params_(params),
      rng_(params.seed),
      value_(net.num_variables(), 0),
      weights_(net.num_constraints(), 1),
      core_(net.none()),
      effective_(net.num_constraints(), 0),
      is_falsified_(net.num_constraints(), 0),
      falsified_pos_(net.num_constraints(), 0),
      incidence_(net.num_variables()),
      last_changed_(net.num_variables(), 0) {
  if (enabled.universe() != net.num_constraints())
    throw ContractError("lstc: constraint set does not belong to this network");
  if (start.empty()) {
    for (VarIndex x = 0; x < net.num_variables(); ++x)
      value_[x] = static_cast<ValueIndex>(rng_.below(net.variable(x).domain.size()));
  } else {
    net.check_assignment(start);
    for (VarIndex x = 0; x < net.num_variables(); ++x) value_[x] = *net.value_index(x, start[x]);
  }

  score_base_.resize(net.num_variables() + 1, 0);
  for (VarIndex x = 0; x < net.num_variables(); ++x)
    score_base_[x + 1] = score_base_[x] + net.variable(x).domain.size();
  score_.assign(score_base_.back(), 0);

  contrib_base_.assign(net.num_constraints() + 1, 0);
  for (ConstraintId c = 0; c < net.num_constraints(); ++c) {
    std::size_t size = 0;
    if (enabled.contains(c)) {
      for (auto x : net.constraint(c).scope()) {
        size += net.variable(x).domain.size();
        incidence_[x].push_back(c);
      }
    }
    contrib_base_[c + 1] = contrib_base_[c] + size;
  }
  contrib_.assign(contrib_base_.back(), 0);

  enabled.for_each([&](ConstraintId c) { refresh_contributions(c); });
  recompute_effective();
}

bool WeightedWalk::falsified_under(ConstraintId c, std::size_t position, ValueIndex v) {
  auto scope = net_.constraint(c).scope();
  scratch_.resize(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k) scratch_[k] = k == position ? v : value_[scope[k]];
  return !net_.allows(c, scratch_);
}

void WeightedWalk::refresh_contributions(ConstraintId c) {
  auto scope = net_.constraint(c).scope();
  std::size_t base = contrib_base_[c];
  const std::int64_t eff = effective_[c];
  for (std::size_t k = 0; k < scope.size(); ++k) {
    const VarIndex z = scope[k];
    const auto n = static_cast<ValueIndex>(net_.variable(z).domain.size());
    for (ValueIndex v = 0; v < n; ++v) {
      std::uint8_t now = falsified_under(c, k, v) ? 1 : 0;
      std::uint8_t& old = contrib_[base + v];
      if (now != old) {
        score_[score_base_[z] + v] += now ? eff : -eff;
        old = now;
      }
    }
    base += n;
  }

  const bool now = contrib_[contrib_base_[c] + value_[scope[0]]] != 0;
  if (now == (is_falsified_[c] != 0)) return;
  is_falsified_[c] = now;
  if (now) {
    falsified_pos_[c] = falsified_.size();
    falsified_.push_back(c);
    objective_ += eff;
  } else {
    ConstraintId last = falsified_.back();
    falsified_[falsified_pos_[c]] = last;
    falsified_pos_[last] = falsified_pos_[c];
    falsified_.pop_back();
    objective_ -= eff;
  }
}

void WeightedWalk::set_effective(ConstraintId c, std::int64_t effective) {
  const std::int64_t diff = effective - effective_[c];
  if (diff == 0) return;
  auto scope = net_.constraint(c).scope();
  std::size_t base = contrib_base_[c];
  for (auto z : scope) {
    const std::size_t n = net_.variable(z).domain.size();
    for (std::size_t v = 0; v < n; ++v)
      if (contrib_[base + v]) score_[score_base_[z] + v] += diff;
    base += n;
  }
  if (is_falsified_[c]) objective_ += diff;
  effective_[c] = effective;
}

void WeightedWalk::recompute_effective() {
  const auto offset = static_cast<std::int64_t>(core_offset(enabled_, weights_, core_));
  enabled_.for_each([&](ConstraintId c) {
    auto eff = static_cast<std::int64_t>(weights_[c]) + (core_.contains(c) ? offset : 0);
    set_effective(c, eff);
  });
}

void WeightedWalk::set_core(const ConstraintSet& muc) {
  core_ = muc;
  recompute_effective();
}

void WeightedWalk::penalize(ConstraintId c) {
  ++weights_[c];
  recompute_effective();
}

bool WeightedWalk::at_local_minimum() const {
  for (VarIndex x = 0; x < net_.num_variables(); ++x) {
    const std::int64_t here = score_[score_base_[x] + value_[x]];
    for (std::size_t i = score_base_[x]; i < score_base_[x + 1]; ++i)
      if (score_[i] < here) return false;
  }
  return true;
}

std::optional<ConstraintId> WeightedWalk::only_falsified() const {
  if (falsified_.size() != 1) return std::nullopt;
  return falsified_.front();
}

Assignment WeightedWalk::assignment() const {
  std::vector<Value> values(value_.size());
  for (VarIndex x = 0; x < value_.size(); ++x) values[x] = net_.variable(x).domain[value_[x]];
  return Assignment(std::move(values));
}

void WeightedWalk::apply(VarIndex x, ValueIndex v) {
  if (value_[x] == v) return;
  value_[x] = v;
  for (ConstraintId c : incidence_[x]) refresh_contributions(c);
}

Move WeightedWalk::finish(Move m) {
  apply(m.variable, m.value);
  ++steps_;
  last_changed_[m.variable] = steps_;
  last_variable_ = m.variable;
  return m;
}

Move WeightedWalk::step() { return at_local_minimum() ? escape() : improve(); }

Move WeightedWalk::improve() {
  std::int64_t best = 0;
  std::uint64_t ties = 0;
  Move chosen;
  for (VarIndex x = 0; x < net_.num_variables(); ++x) {
    const auto n = static_cast<ValueIndex>(net_.variable(x).domain.size());
    for (ValueIndex v = 0; v < n; ++v) {
      if (v == value_[x]) continue;
      const std::int64_t d = delta(x, v);
      if (d >= 0 || d > best) continue;
      if (d < best) {
        best = d;
        ties = 0;
      }
      if (rng_.below(++ties) == 0) chosen = Move{x, v, false};
    }
  }
  if (ties == 0) return escape();
  return finish(chosen);
}

Move WeightedWalk::escape() {
  return params_.escape == Escape::RNovelty ? rnovelty() : random_walk();
}

Move WeightedWalk::random_walk() {
  auto random_value = [&](VarIndex x) {
    const auto n = net_.variable(x).domain.size();
    auto v = static_cast<ValueIndex>(rng_.below(n - 1));
    if (v >= value_[x]) ++v;
    return v;
  };
  auto movable = [&](VarIndex x) { return net_.variable(x).domain.size() > 1; };

  if (falsified_.empty()) {
    std::vector<VarIndex> vars;
    for (VarIndex x = 0; x < net_.num_variables(); ++x)
      if (movable(x)) vars.push_back(x);
    if (vars.empty()) return Move{0, value_.empty() ? 0 : value_[0], true};
    VarIndex x = vars[rng_.below(vars.size())];
    return finish(Move{x, random_value(x), true});
  }

  if (rng_.chance(params_.noise)) {
    ConstraintId c = falsified_[rng_.below(falsified_.size())];
    std::vector<VarIndex> vars;
    for (auto x : net_.constraint(c).scope())
      if (movable(x)) vars.push_back(x);
    if (!vars.empty()) {
      VarIndex x = vars[rng_.below(vars.size())];
      return finish(Move{x, random_value(x), true});
    }
  }

  // Least damaging change among variables of falsified constraints.
  std::vector<std::uint8_t> seen(net_.num_variables(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint64_t ties = 0;
  Move chosen{0, 0, true};
  for (ConstraintId c : falsified_) {
    for (auto x : net_.constraint(c).scope()) {
      if (seen[x]) continue;
      seen[x] = 1;
      const auto n = static_cast<ValueIndex>(net_.variable(x).domain.size());
      for (ValueIndex v = 0; v < n; ++v) {
        if (v == value_[x]) continue;
        const std::int64_t d = delta(x, v);
        if (d > best) continue;
        if (d < best) {
          best = d;
          ties = 0;
        }
        if (rng_.below(++ties) == 0) chosen = Move{x, v, true};
      }
    }
  }
  if (ties == 0) return Move{0, value_.empty() ? 0 : value_[0], true};
  return finish(chosen);
}

Move WeightedWalk::rnovelty() {
  if (falsified_.empty()) return random_walk();
  ConstraintId c = falsified_[rng_.below(falsified_.size())];

  std::vector<Candidate> moves;
  for (auto x : net_.constraint(c).scope()) {
    const auto n = static_cast<ValueIndex>(net_.variable(x).domain.size());
    for (ValueIndex v = 0; v < n; ++v)
      if (v != value_[x]) moves.push_back(Candidate{x, v, delta(x, v)});
  }
  if (moves.empty()) return random_walk();

  // Periodic pure random step.
  if ((steps_ + 1) % 100 == 0) {
    const Candidate& m = moves[rng_.below(moves.size())];
    return finish(Move{m.variable, m.value, true});
  }

  // Best first; among equal scores the least recently changed variable.
  std::sort(moves.begin(), moves.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.delta != b.delta) return a.delta < b.delta;
    if (last_changed_[a.variable] != last_changed_[b.variable])
      return last_changed_[a.variable] < last_changed_[b.variable];
    if (a.variable != b.variable) return a.variable < b.variable;
    return a.value < b.value;
  });
  const Candidate& best = moves.front();
  auto second = std::find_if(moves.begin(), moves.end(),
                             [&](const Candidate& m) { return m.variable != best.variable; });
  const Candidate* pick = &best;
  if (second != moves.end() && last_variable_ && *last_variable_ == best.variable) {
    const std::int64_t gap = second->delta - best.delta;
    const double p = params_.noise;
    bool take_second;
    if (p < 0.5)
      take_second = gap <= 1 && rng_.chance(2 * p);
    else
      take_second = gap <= 1 || rng_.chance(2 * (p - 0.5));
    if (take_second) pick = &*second;
  }
  return finish(Move{pick->variable, pick->value, true});
}

LstcResult lstc(const Network& net, const ConstraintSet& enabled, ConstraintSet muc, const Assignment& start,
                const LstcParams& params, const DiscoveryHook& on_discover) {
  LstcResult out;
  WeightedWalk walk(net, enabled, start, params);
  walk.set_core(muc);

  std::int64_t budget = params.initial_iterations;
  while (budget >= 0) {
    if (params.deadline && (out.stats.iterations & 255) == 0 && Clock::now() >= *params.deadline) {
      out.stats.timed_out = true;
      break;
    }
    ++out.stats.iterations;
    Move m;
    if (walk.at_local_minimum()) {
      ++out.stats.local_minima;
      if (params.mine_transitions) {
        if (auto c = walk.only_falsified()) {
          if (!muc.contains(*c)) {
            muc.insert(*c);
            walk.set_core(muc);
            budget += params.bonus;
            ++out.stats.discoveries;
            if (on_discover) on_discover(*c, walk.assignment());
          } else {
            budget -= static_cast<std::int64_t>(walk.weight(*c));
            walk.penalize(*c);
            ++out.stats.rediscoveries;
          }
        }
      }
      m = walk.escape();
    } else {
      m = walk.improve();
    }
    if (params.record_trace) out.trace.push_back(m);
    --budget;
  }
  out.muc = std::move(muc);
  return out;
}

}  // namespace mucx::lstc
