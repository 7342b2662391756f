#include "mucx/network.hpp"

#include <algorithm>

#include "mucx/error.hpp"

namespace mucx {

std::optional<std::size_t> Constraint::position(VarIndex x) const {
  auto it = std::find(scope_.begin(), scope_.end(), x);
  if (it == scope_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - scope_.begin());
}

bool Constraint::holds(std::span<const Value> scope_values) const {
  if (scope_values.size() != scope_.size())
    throw StructuralError("constraint '" + name_ + "' evaluated on " + std::to_string(scope_values.size()) +
                          " values, scope has " + std::to_string(scope_.size()));
  if (const auto* e = std::get_if<Expression>(&body_)) return e->evaluate(scope_values) != 0;
  const auto& table = std::get<TupleTable>(body_);
  std::vector<Value> key(scope_values.begin(), scope_values.end());
  bool member = std::binary_search(sorted_tuples_.begin(), sorted_tuples_.end(), key);
  return table.polarity == Polarity::Supports ? member : !member;
}

Network::Network(std::vector<Variable> variables, std::vector<ConstraintDef> constraints)
    : variables_(std::move(variables)) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const Variable& v = variables_[i];
    if (v.domain.empty()) throw StructuralError("variable '" + v.name + "' has an empty domain");
    for (std::size_t k = 1; k < v.domain.size(); ++k)
      if (v.domain[k - 1] >= v.domain[k])
        throw StructuralError("domain of '" + v.name + "' is not strictly increasing");
    if (!var_by_name_.emplace(v.name, static_cast<VarIndex>(i)).second)
      throw StructuralError("duplicate variable name '" + v.name + "'");
  }

  incidence_.resize(variables_.size());
  constraints_.reserve(constraints.size());
  for (auto& def : constraints) {
    Constraint c;
    c.id_ = static_cast<ConstraintId>(constraints_.size());
    c.name_ = std::move(def.name);
    if (!con_by_name_.emplace(c.name_, c.id_).second)
      throw StructuralError("duplicate constraint name '" + c.name_ + "'");
    if (def.scope.empty()) throw StructuralError("constraint '" + c.name_ + "' has an empty scope");
    for (const auto& name : def.scope) {
      auto x = find_variable(name);
      if (!x) throw StructuralError("constraint '" + c.name_ + "' refers to unknown variable '" + name + "'");
      if (std::find(c.scope_.begin(), c.scope_.end(), *x) != c.scope_.end())
        throw StructuralError("constraint '" + c.name_ + "' repeats variable '" + name + "' in its scope");
      c.scope_.push_back(*x);
    }

    if (auto* e = std::get_if<Expression>(&def.body)) {
      try {
        if (!e->is_boolean()) throw StructuralError("expression is not boolean-valued");
        e->bind(def.scope);
      } catch (const StructuralError& err) {
        throw StructuralError("constraint '" + c.name_ + "': " + err.what());
      }
    } else {
      auto& table = std::get<TupleTable>(def.body);
      for (const auto& t : table.tuples) {
        if (t.size() != c.scope_.size())
          throw StructuralError("constraint '" + c.name_ + "' has a tuple of arity " + std::to_string(t.size()) +
                                ", scope arity is " + std::to_string(c.scope_.size()));
        for (std::size_t k = 0; k < t.size(); ++k)
          if (!value_index(c.scope_[k], t[k]))
            throw StructuralError("constraint '" + c.name_ + "' has tuple value " + std::to_string(t[k]) +
                                  " outside dom(" + variables_[c.scope_[k]].name + ")");
      }
      c.sorted_tuples_ = table.tuples;
      std::sort(c.sorted_tuples_.begin(), c.sorted_tuples_.end());
      c.sorted_tuples_.erase(std::unique(c.sorted_tuples_.begin(), c.sorted_tuples_.end()),
                             c.sorted_tuples_.end());
    }
    c.body_ = std::move(def.body);

    // Tabulate small constraints over value indices.
    std::size_t joint = 1;
    for (auto x : c.scope_) {
      joint *= variables_[x].domain.size();
      if (joint > kTableLimit) break;
    }
    if (joint <= kTableLimit) {
      c.strides_.assign(c.scope_.size(), 1);
      for (std::size_t k = c.scope_.size(); k-- > 1;)
        c.strides_[k - 1] = c.strides_[k] * variables_[c.scope_[k]].domain.size();
      c.table_.assign(joint, false);
      std::vector<Value> values(c.scope_.size());
      for (std::size_t code = 0; code < joint; ++code) {
        std::size_t rest = code;
        for (std::size_t k = 0; k < c.scope_.size(); ++k) {
          values[k] = variables_[c.scope_[k]].domain[rest / c.strides_[k]];
          rest %= c.strides_[k];
        }
        c.table_[code] = c.holds(values);
      }
    }

    for (auto x : c.scope_) incidence_[x].push_back(c.id_);
    constraints_.push_back(std::move(c));
  }
}

std::optional<VarIndex> Network::find_variable(const std::string& name) const {
  auto it = var_by_name_.find(name);
  if (it == var_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConstraintId> Network::find_constraint(const std::string& name) const {
  auto it = con_by_name_.find(name);
  if (it == con_by_name_.end()) return std::nullopt;
  return it->second;
}

ConstraintSet Network::set_of_names(std::span<const std::string> names) const {
  ConstraintSet s = none();
  for (const auto& n : names) {
    auto c = find_constraint(n);
    if (!c) throw ContractError("unknown constraint '" + n + "'");
    s.insert(*c);
  }
  return s;
}

std::vector<std::string> Network::names_of(const ConstraintSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](ConstraintId c) { out.push_back(constraints_[c].name()); });
  return out;
}

std::optional<ValueIndex> Network::value_index(VarIndex x, Value v) const {
  const auto& dom = variables_[x].domain;
  auto it = std::lower_bound(dom.begin(), dom.end(), v);
  if (it == dom.end() || *it != v) return std::nullopt;
  return static_cast<ValueIndex>(it - dom.begin());
}

bool Network::allows(ConstraintId id, std::span<const ValueIndex> scope_indices) const {
  const Constraint& c = constraints_[id];
  if (!c.table_.empty()) {
    std::size_t code = 0;
    for (std::size_t k = 0; k < scope_indices.size(); ++k) code += scope_indices[k] * c.strides_[k];
    return c.table_[code];
  }
  std::vector<Value> values(c.scope_.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = variables_[c.scope_[k]].domain[scope_indices[k]];
  return c.holds(values);
}

void Network::check_assignment(const Assignment& a) const {
  if (a.size() != variables_.size())
    throw StructuralError("assignment has " + std::to_string(a.size()) + " values for " +
                          std::to_string(variables_.size()) + " variables");
  for (VarIndex x = 0; x < variables_.size(); ++x)
    if (!value_index(x, a[x]))
      throw StructuralError("value " + std::to_string(a[x]) + " outside dom(" + variables_[x].name + ")");
}

bool evaluate(const Network& net, ConstraintId id, const Assignment& a) {
  const Constraint& c = net.constraint(id);
  Value small[8];
  std::vector<Value> large;
  std::span<Value> values(small, c.arity());
  if (c.arity() > 8) {
    large.resize(c.arity());
    values = large;
  }
  for (std::size_t k = 0; k < c.arity(); ++k) {
    VarIndex x = c.scope()[k];
    if (x >= a.size())
      throw StructuralError("variable '" + net.variable(x).name + "' of constraint '" + c.name() +
                            "' is unbound");
    values[k] = a[x];
  }
  return c.holds(values);
}

ConstraintSet violated_set(const Network& net, const Assignment& a, const ConstraintSet& enabled) {
  ConstraintSet out = net.none();
  enabled.for_each([&](ConstraintId c) {
    if (!evaluate(net, c, a)) out.insert(c);
  });
  return out;
}

std::optional<ConstraintId> transition_check(const Network& net, const Assignment& a,
                                             const ConstraintSet& enabled) {
  std::optional<ConstraintId> only;
  std::size_t count = 0;
  enabled.for_each([&](ConstraintId c) {
    if (count > 1) return;
    if (!evaluate(net, c, a)) {
      ++count;
      only = c;
    }
  });
  if (count != 1) return std::nullopt;
  return only;
}

Network restrict(const Network& net, const ConstraintSet& keep) {
  if (keep.universe() != net.num_constraints())
    throw ContractError("restrict: constraint set does not belong to this network");
  Network out;
  out.variables_ = net.variables_;
  out.var_by_name_ = net.var_by_name_;
  out.incidence_.resize(net.variables_.size());
  keep.for_each([&](ConstraintId c) {
    Constraint copy = net.constraints_[c];
    copy.id_ = static_cast<ConstraintId>(out.constraints_.size());
    out.con_by_name_.emplace(copy.name_, copy.id_);
    for (auto x : copy.scope_) out.incidence_[x].push_back(copy.id_);
    out.origin_.push_back(net.origin(c));
    out.constraints_.push_back(std::move(copy));
  });
  return out;
}

TupleTable to_extensional(const Network& net, ConstraintId id) {
  const Constraint& c = net.constraint(id);
  TupleTable out;
  out.polarity = Polarity::Supports;
  std::vector<std::size_t> idx(c.arity(), 0);
  std::vector<Value> values(c.arity());
  while (true) {
    for (std::size_t k = 0; k < c.arity(); ++k) values[k] = net.variable(c.scope()[k]).domain[idx[k]];
    if (c.holds(values)) out.tuples.push_back(values);
    std::size_t k = c.arity();
    while (k > 0) {
      --k;
      if (++idx[k] < net.variable(c.scope()[k]).domain.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

}  // namespace mucx
