#include "mucx/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mucx/error.hpp"
#include "mucx/random.hpp"

namespace mucx::oracle {

std::uint64_t search_space(const Network& net) {
  std::uint64_t total = 1;
  for (const auto& v : net.variables()) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(v.domain.size()), &total))
      return std::numeric_limits<std::uint64_t>::max();
  }
  return total;
}

namespace {

void require_bound(const Network& net, std::uint64_t bound) {
  std::uint64_t space = search_space(net);
  if (space > bound)
    throw BoundExceeded("search space of " + std::to_string(space) + " assignments exceeds the bound of " +
                        std::to_string(bound));
}

// Chronological enumeration in lexicographic order; a constraint is tested as
// soon as the last variable of its scope is set.
class Enumerator {
 public:
  Enumerator(const Network& net, const ConstraintSet& enabled)
      : net_(net), checks_(net.num_variables()), values_(net.num_variables(), 0) {
    enabled.for_each([&](ConstraintId c) {
      auto scope = net.constraint(c).scope();
      checks_[*std::max_element(scope.begin(), scope.end())].push_back(c);
    });
  }

  std::optional<Assignment> first_solution() {
    if (net_.num_variables() == 0) return Assignment();
    if (extend(0)) return Assignment(values_);
    return std::nullopt;
  }

 private:
  bool extend(VarIndex x) {
    for (Value v : net_.variable(x).domain) {
      values_[x] = v;
      bool ok = true;
      for (ConstraintId c : checks_[x])
        if (!holds(c)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (x + 1 == net_.num_variables() || extend(x + 1)) return true;
    }
    return false;
  }

  bool holds(ConstraintId c) {
    const Constraint& con = net_.constraint(c);
    scratch_.resize(con.arity());
    for (std::size_t k = 0; k < con.arity(); ++k) scratch_[k] = values_[con.scope()[k]];
    return con.holds(scratch_);
  }

  const Network& net_;
  std::vector<std::vector<ConstraintId>> checks_;
  std::vector<Value> values_;
  std::vector<Value> scratch_;
};

}  // namespace

std::optional<Assignment> brute_sat(const Network& net, const ConstraintSet& enabled, std::uint64_t bound) {
  if (enabled.universe() != net.num_constraints())
    throw ContractError("brute_sat: constraint set does not belong to this network");
  require_bound(net, bound);
  return Enumerator(net, enabled).first_solution();
}

bool is_transition_constraint(const Network& net, const ConstraintSet& enabled, ConstraintId c,
                              std::uint64_t bound) {
  if (!enabled.contains(c)) return false;
  if (brute_sat(net, enabled, bound)) return false;
  ConstraintSet rest = enabled;
  rest.erase(c);
  return brute_sat(net, rest, bound).has_value();
}

bool is_muc(const Network& net, const ConstraintSet& subset, std::uint64_t bound) {
  if (brute_sat(net, subset, bound)) return false;
  bool minimal = true;
  subset.for_each([&](ConstraintId c) {
    if (!minimal) return;
    ConstraintSet rest = subset;
    rest.erase(c);
    minimal = brute_sat(net, rest, bound).has_value();
  });
  return minimal;
}

std::vector<ConstraintSet> all_mucs(const Network& net, const ConstraintSet& enabled, std::uint64_t bound) {
  const std::vector<ConstraintId> pool = enabled.ids();
  if (pool.size() > kMaxEnumerationConstraints)
    throw BoundExceeded("all_mucs: " + std::to_string(pool.size()) + " constraints exceed the limit of " +
                        std::to_string(kMaxEnumerationConstraints));
  std::vector<ConstraintSet> found;
  if (brute_sat(net, enabled, bound)) return found;

  const std::size_t m = pool.size();
  for (std::size_t k = 1; k <= m; ++k) {
    // Combinations of k positions in lexicographic order.
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      ConstraintSet candidate = net.none();
      for (auto i : pick) candidate.insert(pool[i]);
      bool contains_core = std::any_of(found.begin(), found.end(),
                                       [&](const ConstraintSet& core) { return core.is_subset_of(candidate); });
      if (!contains_core && !brute_sat(net, candidate, bound)) found.push_back(candidate);

      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

Network generate(const GeneratorParams& params) {
  if (params.variables == 0 || params.domain_size == 0)
    throw ContractError("generate: variables and domain size must be positive");
  if (!(params.density > 0.0 && params.density <= 1.0)) throw ContractError("generate: density must be in (0,1]");
  if (params.ensure_unsat && params.variables < 2)
    throw ContractError("generate: an unsatisfiable gadget needs at least two variables");

  Rng rng(params.seed);
  const std::size_t n = params.variables;
  const auto d = static_cast<Value>(params.domain_size);

  std::vector<Variable> vars;
  std::vector<Value> dom;
  for (Value v = 0; v < d; ++v) dom.push_back(v);
  for (std::size_t i = 0; i < n; ++i) vars.push_back({"x" + std::to_string(i + 1), dom});

  std::vector<ConstraintDef> cons;
  auto pair = [&](std::size_t i, std::size_t j, Expression e) {
    cons.push_back({"", {vars[i].name, vars[j].name}, std::move(e)});
  };

  static constexpr Op kComparisons[] = {Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Eq, Op::Ne};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!rng.chance(params.density)) continue;
      Op op = kComparisons[rng.below(6)];
      Expression rhs = var(vars[j].name);
      if (rng.below(3) == 0) rhs = add(std::move(rhs), cst(rng.below(2) == 0 ? -1 : 1));
      pair(i, j, Expression::binary(op, var(vars[i].name), std::move(rhs)));
    }

  if (params.ensure_unsat) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    const std::size_t clique = params.domain_size + 1;
    if (clique <= n && rng.below(2) == 0) {
      for (std::size_t a = 0; a < clique; ++a)
        for (std::size_t b = a + 1; b < clique; ++b)
          pair(order[a], order[b], ne(var(vars[order[a]].name), var(vars[order[b]].name)));
    } else {
      std::size_t len = 2 + rng.below(std::min<std::size_t>(n, 4) - 1);
      for (std::size_t a = 0; a < len; ++a) {
        std::size_t from = order[a], to = order[(a + 1) % len];
        pair(from, to, lt(var(vars[from].name), var(vars[to].name)));
      }
    }
  }

  for (std::size_t i = cons.size(); i > 1; --i) std::swap(cons[i - 1], cons[rng.below(i)]);
  for (std::size_t i = 0; i < cons.size(); ++i) cons[i].name = "c" + std::to_string(i + 1);
  return Network(std::move(vars), std::move(cons));
}

}  // namespace mucx::oracle
