#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mucx/constraint_set.hpp"
#include "mucx/expr.hpp"

namespace mucx {

using VarIndex = std::uint32_t;
/// Position of a value inside a variable's initial (sorted) domain.
using ValueIndex = std::uint32_t;

struct Variable {
  std::string name;
  std::vector<Value> domain;  // strictly increasing, non-empty

  bool operator==(const Variable&) const = default;
};

enum class Polarity { Supports, Conflicts };

struct TupleTable {
  Polarity polarity = Polarity::Supports;
  std::vector<std::vector<Value>> tuples;

  bool operator==(const TupleTable&) const = default;
};

using ConstraintBody = std::variant<Expression, TupleTable>;

/// Constraint as written by a user or a file, before it is resolved against
/// the variables of a network.
struct ConstraintDef {
  std::string name;
  std::vector<std::string> scope;
  ConstraintBody body;
};

class Network;

class Constraint {
 public:
  ConstraintId id() const { return id_; }
  const std::string& name() const { return name_; }
  std::span<const VarIndex> scope() const { return scope_; }
  std::size_t arity() const { return scope_.size(); }
  const ConstraintBody& body() const { return body_; }
  bool is_intensional() const { return std::holds_alternative<Expression>(body_); }

  /// Position of `x` in the scope, if present.
  std::optional<std::size_t> position(VarIndex x) const;

  /// Semantic check on values given in scope order. This is the reference
  /// evaluation: expression truth or tuple membership under the polarity.
  bool holds(std::span<const Value> scope_values) const;

 private:
  friend class Network;
  friend Network restrict(const Network& net, const ConstraintSet& keep);

  ConstraintId id_ = 0;
  std::string name_;
  std::vector<VarIndex> scope_;
  ConstraintBody body_;
  std::vector<std::vector<Value>> sorted_tuples_;

  // Precomputed truth table over value indices, mixed radix in scope order.
  // Empty when the scope's joint domain is too large to tabulate.
  std::vector<bool> table_;
  std::vector<std::size_t> strides_;
};

/// Total assignment, one value per variable, indexed by VarIndex.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Value> values) : values_(std::move(values)) {}
  Assignment(std::initializer_list<Value> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Value operator[](VarIndex x) const { return values_[x]; }
  void set(VarIndex x, Value v) { values_[x] = v; }
  std::span<const Value> values() const { return values_; }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Value> values_;
};

/// Immutable finite-domain constraint network. Constraint ids are the dense
/// range 0..num_constraints()-1.
class Network {
 public:
  /// Largest joint domain tabulated per constraint.
  static constexpr std::size_t kTableLimit = std::size_t{1} << 16;

  Network() = default;
  /// Throws StructuralError on any violated invariant: empty or unsorted
  /// domain, duplicate name, unresolved or repeated scope variable, tuple of
  /// the wrong arity or with an out-of-domain value, non-boolean expression.
  Network(std::vector<Variable> variables, std::vector<ConstraintDef> constraints);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarIndex x) const { return variables_[x]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(ConstraintId c) const { return constraints_[c]; }

  std::optional<VarIndex> find_variable(const std::string& name) const;
  std::optional<ConstraintId> find_constraint(const std::string& name) const;

  /// Constraints whose scope contains `x`, increasing id order.
  std::span<const ConstraintId> constraints_on(VarIndex x) const { return incidence_[x]; }

  ConstraintSet all() const { return ConstraintSet::full(constraints_.size()); }
  ConstraintSet none() const { return ConstraintSet(constraints_.size()); }
  ConstraintSet set_of(std::initializer_list<ConstraintId> ids) const {
    return ConstraintSet::of(constraints_.size(), ids);
  }
  /// Set from constraint names; throws ContractError on an unknown name.
  ConstraintSet set_of_names(std::span<const std::string> names) const;
  ConstraintSet set_of_names(std::initializer_list<std::string> names) const {
    return set_of_names(std::span<const std::string>(names.begin(), names.size()));
  }
  std::vector<std::string> names_of(const ConstraintSet& s) const;

  std::optional<ValueIndex> value_index(VarIndex x, Value v) const;

  /// Fast check on value indices given in scope order.
  bool allows(ConstraintId c, std::span<const ValueIndex> scope_indices) const;

  /// Id of each constraint in the network this one was restricted from, or
  /// the identity when built directly.
  ConstraintId origin(ConstraintId c) const { return origin_.empty() ? c : origin_[c]; }

  /// Throws StructuralError unless `a` assigns every variable a domain value.
  void check_assignment(const Assignment& a) const;

 private:
  friend Network restrict(const Network& net, const ConstraintSet& keep);

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<ConstraintId>> incidence_;
  std::unordered_map<std::string, VarIndex> var_by_name_;
  std::unordered_map<std::string, ConstraintId> con_by_name_;
  std::vector<ConstraintId> origin_;
};

/// Truth of `c` under the projection of `a`. Throws StructuralError when a
/// scope variable is unbound in `a`.
bool evaluate(const Network& net, ConstraintId c, const Assignment& a);

/// Constraints of `enabled` falsified by `a`.
ConstraintSet violated_set(const Network& net, const Assignment& a, const ConstraintSet& enabled);
inline ConstraintSet violated_set(const Network& net, const Assignment& a) {
  return violated_set(net, a, net.all());
}

/// The unique falsified constraint when `a` is a transition assignment.
std::optional<ConstraintId> transition_check(const Network& net, const Assignment& a,
                                             const ConstraintSet& enabled);
inline std::optional<ConstraintId> transition_check(const Network& net, const Assignment& a) {
  return transition_check(net, a, net.all());
}

/// Same variables, only the constraints in `keep`, renumbered densely in
/// increasing original id order; Network::origin maps back.
Network restrict(const Network& net, const ConstraintSet& keep);

/// Supports table equivalent to constraint `c` over the initial domains.
TupleTable to_extensional(const Network& net, ConstraintId c);

}  // namespace mucx
