#include "mucx/solver.hpp"

#include <limits>

#include "mucx/error.hpp"

namespace mucx::solver {

namespace {
constexpr ValueIndex kNone = std::numeric_limits<ValueIndex>::max();
}

DomainStore::DomainStore(const Network& net) {
  offset_.reserve(net.num_variables() + 1);
  offset_.push_back(0);
  for (const auto& v : net.variables()) {
    offset_.push_back(offset_.back() + v.domain.size());
    size_.push_back(static_cast<std::uint32_t>(v.domain.size()));
  }
  present_.assign(offset_.back(), 1);
}

ValueIndex DomainStore::first(VarIndex x) const {
  for (std::size_t i = offset_[x]; i < offset_[x + 1]; ++i)
    if (present_[i]) return static_cast<ValueIndex>(i - offset_[x]);
  throw ContractError("first() on an empty domain");
}

std::vector<ValueIndex> DomainStore::values(VarIndex x) const {
  std::vector<ValueIndex> out;
  out.reserve(size_[x]);
  for (std::size_t i = offset_[x]; i < offset_[x + 1]; ++i)
    if (present_[i]) out.push_back(static_cast<ValueIndex>(i - offset_[x]));
  return out;
}

void DomainStore::remove(VarIndex x, ValueIndex v) {
  auto& slot = present_[offset_[x] + v];
  if (!slot) return;
  slot = 0;
  --size_[x];
  trail_.emplace_back(x, v);
}

void DomainStore::assign(VarIndex x, ValueIndex v) {
  auto n = static_cast<ValueIndex>(initial_size(x));
  for (ValueIndex w = 0; w < n; ++w)
    if (w != v) remove(x, w);
}

void DomainStore::pop_level() {
  if (marks_.empty()) throw ContractError("pop_level() without push_level()");
  std::size_t mark = marks_.back();
  marks_.pop_back();
  while (trail_.size() > mark) {
    auto [x, v] = trail_.back();
    trail_.pop_back();
    present_[offset_[x] + v] = 1;
    ++size_[x];
  }
}

Propagator::Propagator(const Network& net, const ConstraintSet& enabled, WeightTable initial_weights)
    : net_(net),
      enabled_(enabled),
      store_(net),
      weights_(std::move(initial_weights)),
      active_(net.none()),
      incidence_(net.num_variables()) {
  if (enabled.universe() != net.num_constraints())
    throw ContractError("enabled set does not belong to this network");
  if (weights_.empty()) weights_.assign(net.num_constraints(), 1);
  if (weights_.size() != net.num_constraints()) throw ContractError("weight table size mismatch");

  arc_base_.assign(net.num_constraints() + 1, 0);
  residue_base_.assign(net.num_constraints(), 0);
  std::size_t residue_total = 0;
  for (ConstraintId c = 0; c < net.num_constraints(); ++c) {
    const auto& con = net.constraint(c);
    arc_base_[c + 1] = arc_base_[c] + con.arity();
    residue_base_[c] = residue_total;
    if (!enabled.contains(c)) continue;
    for (auto x : con.scope()) {
      incidence_[x].push_back(c);
      residue_total += net.variable(x).domain.size() * con.arity();
    }
  }
  in_queue_.assign(arc_base_.back(), 0);
  residues_.assign(residue_total, kNone);
}

bool Propagator::seek_support(ConstraintId c, std::size_t position, ValueIndex v) {
  const Constraint& con = net_.constraint(c);
  const std::size_t arity = con.arity();
  auto scope = con.scope();

  // Residue offset for (c, position, v).
  std::size_t base = residue_base_[c];
  for (std::size_t k = 0; k < position; ++k) base += net_.variable(scope[k]).domain.size() * arity;
  base += static_cast<std::size_t>(v) * arity;
  ValueIndex* residue = &residues_[base];

  if (residue[0] != kNone) {
    bool valid = true;
    for (std::size_t k = 0; k < arity && valid; ++k) valid = store_.contains(scope[k], residue[k]);
    if (valid) return true;
  }

  scratch_.assign(arity, 0);
  // Start each free position at its first present value.
  for (std::size_t k = 0; k < arity; ++k) {
    if (k == position) {
      scratch_[k] = v;
      continue;
    }
    if (store_.wiped(scope[k])) return false;
    scratch_[k] = store_.first(scope[k]);
  }
  while (true) {
    if (net_.allows(c, scratch_)) {
      std::copy(scratch_.begin(), scratch_.end(), residue);
      return true;
    }
    // Advance the odometer over the free positions, last position fastest.
    std::size_t k = arity;
    while (true) {
      if (k == 0) return false;
      --k;
      if (k == position) continue;
      VarIndex y = scope[k];
      auto n = static_cast<ValueIndex>(store_.initial_size(y));
      ValueIndex w = scratch_[k] + 1;
      while (w < n && !store_.contains(y, w)) ++w;
      if (w < n) {
        scratch_[k] = w;
        break;
      }
      scratch_[k] = store_.first(y);
    }
  }
}

bool Propagator::revise(ConstraintId c, std::size_t position) {
  ++revisions_;
  VarIndex x = net_.constraint(c).scope()[position];
  auto n = static_cast<ValueIndex>(store_.initial_size(x));
  bool removed = false;
  for (ValueIndex v = 0; v < n; ++v) {
    if (!store_.contains(x, v)) continue;
    if (!seek_support(c, position, v)) {
      store_.remove(x, v);
      removed = true;
    }
  }
  if (removed) active_.insert(c);
  return removed;
}

void Propagator::enqueue(ConstraintId c, std::size_t position) {
  auto& flag = in_queue_[arc_base_[c] + position];
  if (flag) return;
  flag = 1;
  queue_.push_back(Arc{c, static_cast<std::uint32_t>(position)});
}

void Propagator::enqueue_neighbours(VarIndex x, ConstraintId except) {
  for (ConstraintId c : incidence_[x]) {
    if (c == except) continue;
    auto scope = net_.constraint(c).scope();
    for (std::size_t k = 0; k < scope.size(); ++k)
      if (scope[k] != x) enqueue(c, k);
  }
}

bool Propagator::run_queue() {
  while (!queue_.empty()) {
    Arc arc = queue_.front();
    queue_.pop_front();
    in_queue_[arc_base_[arc.constraint] + arc.position] = 0;
    if (!revise(arc.constraint, arc.position)) continue;
    VarIndex x = net_.constraint(arc.constraint).scope()[arc.position];
    if (store_.wiped(x)) {
      ++weights_[arc.constraint];
      for (const Arc& a : queue_) in_queue_[arc_base_[a.constraint] + a.position] = 0;
      queue_.clear();
      return false;
    }
    enqueue_neighbours(x, arc.constraint);
  }
  return true;
}

bool Propagator::propagate(std::span<const Arc> seed) {
  for (const Arc& a : seed) {
    if (!enabled_.contains(a.constraint)) continue;
    enqueue(a.constraint, a.position);
  }
  return run_queue();
}

bool Propagator::propagate_all() {
  enabled_.for_each([&](ConstraintId c) {
    for (std::size_t k = 0; k < net_.constraint(c).arity(); ++k) enqueue(c, k);
  });
  return run_queue();
}

bool Propagator::propagate_from(VarIndex x) {
  enqueue_neighbours(x, std::numeric_limits<ConstraintId>::max());
  return run_queue();
}

namespace {

class Search {
 public:
  Search(const Network& net, const ConstraintSet& enabled, const SolverParams& params)
      : net_(net), params_(params), prop_(net, enabled, params.initial_weights), assigned_(net.num_variables(), 0) {}

  SolveResult run() {
    auto start = Clock::now();
    SolveResult result;
    result.outcome = execute();
    if (result.outcome == Outcome::Sat) {
      std::vector<Value> values(net_.num_variables());
      for (VarIndex x = 0; x < net_.num_variables(); ++x)
        values[x] = net_.variable(x).domain[prop_.store().first(x)];
      result.assignment = Assignment(std::move(values));
    }
    result.active = prop_.active();
    result.weights = prop_.weights();
    result.stats.nodes = nodes_;
    result.stats.revisions = prop_.revisions();
    result.stats.restarts = restarts_;
    result.stats.elapsed = Clock::now() - start;
    return result;
  }

 private:
  enum class Status { Sat, Unsat, Cutoff, Exhausted };

  Outcome execute() {
    if (out_of_budget()) return Outcome::BudgetExhausted;
    if (!prop_.propagate_all()) return Outcome::Unsat;
    std::uint64_t cutoff = params_.restart_base;
    while (true) {
      cutoff_nodes_ = cutoff == 0 ? std::numeric_limits<std::uint64_t>::max() : nodes_ + cutoff;
      switch (descend()) {
        case Status::Sat: return Outcome::Sat;
        case Status::Unsat: return Outcome::Unsat;
        case Status::Exhausted: return Outcome::BudgetExhausted;
        case Status::Cutoff: break;
      }
      ++restarts_;
      auto next = static_cast<std::uint64_t>(static_cast<double>(cutoff) * params_.restart_growth);
      cutoff = std::max(next, cutoff + 1);
    }
  }

  bool out_of_budget() const {
    if (params_.budget.max_nodes && nodes_ >= *params_.budget.max_nodes) return true;
    if (params_.budget.deadline && Clock::now() >= *params_.budget.deadline) return true;
    return false;
  }

  // dom/wdeg: minimise |dom(x)| / wdeg(x); zero weighted degree counts as
  // +infinity; ties go to the smaller domain, then the smaller index.
  std::optional<VarIndex> select() const {
    std::optional<VarIndex> best;
    std::size_t best_dom = 0;
    std::uint64_t best_wdeg = 0;
    for (VarIndex x = 0; x < net_.num_variables(); ++x) {
      if (assigned_[x]) continue;
      std::size_t dom = prop_.store().size(x);
      std::uint64_t wdeg = 0;
      for (ConstraintId c : prop_.constraints_on(x)) {
        int free = 0;
        for (auto y : net_.constraint(c).scope())
          if (!assigned_[y] && ++free >= 2) break;
        if (free >= 2) wdeg += prop_.weights()[c];
      }
      if (!best || better(dom, wdeg, best_dom, best_wdeg)) {
        best = x;
        best_dom = dom;
        best_wdeg = wdeg;
      }
    }
    return best;
  }

  static bool better(std::size_t dom, std::uint64_t wdeg, std::size_t best_dom, std::uint64_t best_wdeg) {
    if (wdeg == 0 || best_wdeg == 0) {
      if (wdeg != 0) return true;
      if (best_wdeg != 0) return false;
      return dom < best_dom;
    }
    using Wide = unsigned __int128;
    Wide lhs = static_cast<Wide>(dom) * best_wdeg;
    Wide rhs = static_cast<Wide>(best_dom) * wdeg;
    if (lhs != rhs) return lhs < rhs;
    return dom < best_dom;
  }

  Status descend() {
    auto x = select();
    if (!x) return Status::Sat;
    assigned_[*x] = 1;
    for (ValueIndex v : prop_.store().values(*x)) {
      if (out_of_budget()) return Status::Exhausted;
      if (nodes_ >= cutoff_nodes_) {
        assigned_[*x] = 0;
        return Status::Cutoff;
      }
      ++nodes_;
      prop_.store().push_level();
      prop_.store().assign(*x, v);
      if (prop_.propagate_from(*x)) {
        Status s = descend();
        if (s == Status::Sat || s == Status::Exhausted) return s;
        if (s == Status::Cutoff) {
          prop_.store().pop_level();
          assigned_[*x] = 0;
          return s;
        }
      }
      prop_.store().pop_level();
    }
    assigned_[*x] = 0;
    return Status::Unsat;
  }

  const Network& net_;
  const SolverParams& params_;
  Propagator prop_;
  std::vector<std::uint8_t> assigned_;
  std::uint64_t nodes_ = 0;
  std::uint64_t restarts_ = 0;
  std::uint64_t cutoff_nodes_ = 0;
};

}  // namespace

SolveResult solve(const Network& net, const ConstraintSet& enabled, const SolverParams& params) {
  return Search(net, enabled, params).run();
}

}  // namespace mucx::solver
