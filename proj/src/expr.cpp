#include "mucx/expr.hpp"

#include <algorithm>
#include <limits>

#include "mucx/error.hpp"

namespace mucx {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Var: return "";
    case Op::Neg: return "neg";
    case Op::Abs: return "abs";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Lt: return "lt";
    case Op::Le: return "le";
    case Op::Gt: return "gt";
    case Op::Ge: return "ge";
    case Op::Eq: return "eq";
    case Op::Ne: return "ne";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
  }
  return "";
}

int op_arity(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Var: return 0;
    case Op::Neg:
    case Op::Abs:
    case Op::Not: return 1;
    default: return 2;
  }
}

bool op_is_boolean(Op op) {
  switch (op) {
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Eq:
    case Op::Ne:
    case Op::And:
    case Op::Or:
    case Op::Not: return true;
    default: return false;
  }
}

Expression Expression::constant(Value v) {
  Expression e;
  e.nodes_.push_back(Node{Op::Const, v, {}, -1});
  return e;
}

Expression Expression::variable(std::string name) {
  Expression e;
  e.nodes_.push_back(Node{Op::Var, 0, std::move(name), -1});
  return e;
}

Expression Expression::unary(Op op, Expression arg) {
  if (op_arity(op) != 1) throw StructuralError("operator '" + std::string(op_name(op)) + "' is not unary");
  arg.nodes_.push_back(Node{op, 0, {}, -1});
  return arg;
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  if (op_arity(op) != 2) throw StructuralError("operator '" + std::string(op_name(op)) + "' is not binary");
  lhs.nodes_.reserve(lhs.nodes_.size() + rhs.nodes_.size() + 1);
  std::move(rhs.nodes_.begin(), rhs.nodes_.end(), std::back_inserter(lhs.nodes_));
  lhs.nodes_.push_back(Node{op, 0, {}, -1});
  return lhs;
}

std::size_t Expression::subtree_begin(std::size_t root) const {
  int need = 1;
  std::size_t i = root;
  while (true) {
    need += op_arity(nodes_[i].op) - 1;
    if (need == 0) return i;
    --i;
  }
}

Expression::Type Expression::check(std::size_t root) const {
  const Node& n = nodes_[root];
  auto expect = [&](std::size_t child, Type want) {
    if (check(child) != want)
      throw StructuralError("type error: operator '" + std::string(op_name(n.op)) + "' expects " +
                            (want == Type::Int ? "integer" : "boolean") + " operands");
  };
  switch (op_arity(n.op)) {
    case 0: return Type::Int;
    case 1:
      expect(root - 1, n.op == Op::Not ? Type::Bool : Type::Int);
      break;
    default: {
      std::size_t rhs = root - 1;
      std::size_t lhs = subtree_begin(rhs) - 1;
      Type want = (n.op == Op::And || n.op == Op::Or) ? Type::Bool : Type::Int;
      expect(lhs, want);
      expect(rhs, want);
    }
  }
  return op_is_boolean(n.op) ? Type::Bool : Type::Int;
}

bool Expression::is_boolean() const {
  if (nodes_.empty()) throw StructuralError("empty expression");
  return check(nodes_.size() - 1) == Type::Bool;
}

std::vector<std::string> Expression::variables() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_)
    if (n.op == Op::Var && std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
  return out;
}

void Expression::bind(std::span<const std::string> scope) {
  for (auto& n : nodes_) {
    if (n.op != Op::Var) continue;
    auto it = std::find(scope.begin(), scope.end(), n.name);
    if (it == scope.end()) throw StructuralError("variable '" + n.name + "' is not in the constraint scope");
    n.slot = static_cast<int>(it - scope.begin());
  }
}

namespace {

void check_overflow(bool overflow) {
  if (overflow) throw StructuralError("integer overflow while evaluating expression");
}

}  // namespace

Value Expression::evaluate(std::span<const Value> scope_values) const {
  // Depth of a post-order program never exceeds its length; most are tiny.
  Value small[16] = {};
  std::vector<Value> large;
  Value* stack = small;
  if (nodes_.size() > 16) {
    large.resize(nodes_.size());
    stack = large.data();
  }
  std::size_t top = 0;
  for (const Node& n : nodes_) {
    switch (n.op) {
      case Op::Const: stack[top++] = n.constant; continue;
      case Op::Var:
        if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= scope_values.size())
          throw StructuralError("unbound variable '" + n.name + "'");
        stack[top++] = scope_values[static_cast<std::size_t>(n.slot)];
        continue;
      case Op::Neg: {
        Value r;
        check_overflow(__builtin_sub_overflow(Value{0}, stack[top - 1], &r));
        stack[top - 1] = r;
        continue;
      }
      case Op::Abs: {
        Value v = stack[top - 1];
        if (v == std::numeric_limits<Value>::min()) throw StructuralError("integer overflow in abs");
        stack[top - 1] = v < 0 ? -v : v;
        continue;
      }
      case Op::Not: stack[top - 1] = stack[top - 1] == 0 ? 1 : 0; continue;
      default: break;
    }
    Value b = stack[--top];
    Value a = stack[top - 1];
    Value r = 0;
    switch (n.op) {
      case Op::Add: check_overflow(__builtin_add_overflow(a, b, &r)); break;
      case Op::Sub: check_overflow(__builtin_sub_overflow(a, b, &r)); break;
      case Op::Mul: check_overflow(__builtin_mul_overflow(a, b, &r)); break;
      case Op::Lt: r = a < b; break;
      case Op::Le: r = a <= b; break;
      case Op::Gt: r = a > b; break;
      case Op::Ge: r = a >= b; break;
      case Op::Eq: r = a == b; break;
      case Op::Ne: r = a != b; break;
      case Op::And: r = (a != 0) && (b != 0); break;
      case Op::Or: r = (a != 0) || (b != 0); break;
      default: break;
    }
    stack[top - 1] = r;
  }
  return stack[0];
}

void Expression::print(std::size_t root, std::string& out) const {
  const Node& n = nodes_[root];
  switch (op_arity(n.op)) {
    case 0:
      out += n.op == Op::Const ? std::to_string(n.constant) : n.name;
      return;
    case 1:
      out += op_name(n.op);
      out += '(';
      print(root - 1, out);
      out += ')';
      return;
    default: {
      std::size_t rhs = root - 1;
      std::size_t lhs = subtree_begin(rhs) - 1;
      out += op_name(n.op);
      out += '(';
      print(lhs, out);
      out += ',';
      print(rhs, out);
      out += ')';
    }
  }
}

std::string Expression::to_string() const {
  std::string out;
  if (!nodes_.empty()) print(nodes_.size() - 1, out);
  return out;
}

bool Expression::operator==(const Expression& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = other.nodes_[i];
    if (a.op != b.op || a.constant != b.constant || a.name != b.name) return false;
  }
  return true;
}

}  // namespace mucx
