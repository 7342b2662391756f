#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mucx {

using Value = std::int64_t;

enum class Op : std::uint8_t {
  Const,
  Var,
  Neg,
  Abs,
  Add,
  Sub,
  Mul,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  And,
  Or,
  Not,
};

/// Prefix-syntax keyword of an operator ("lt", "add", ...). Empty for leaves.
std::string_view op_name(Op op);
int op_arity(Op op);
bool op_is_boolean(Op op);

/// Intensional constraint body: an expression tree over integer constants and
/// variable references, stored in post-order so evaluation is a single pass
/// with an operand stack.
class Expression {
 public:
  struct Node {
    Op op = Op::Const;
    Value constant = 0;  // Op::Const
    std::string name;    // Op::Var
    int slot = -1;       // Op::Var, position in the owning scope once bound
  };

  static Expression constant(Value v);
  static Expression variable(std::string name);
  static Expression unary(Op op, Expression arg);
  static Expression binary(Op op, Expression lhs, Expression rhs);

  /// Throws StructuralError when operand types do not match: arithmetic and
  /// comparisons take integers, connectives take booleans.
  bool is_boolean() const;

  /// Distinct variable names in first-occurrence order.
  std::vector<std::string> variables() const;

  /// Resolves variable references against `scope`. Throws StructuralError on a
  /// name outside the scope.
  void bind(std::span<const std::string> scope);

  /// Evaluates against values given in scope order. Requires bind(). Booleans
  /// are 0/1. Throws StructuralError on overflow or unbound slots.
  Value evaluate(std::span<const Value> scope_values) const;

  std::string to_string() const;

  const std::vector<Node>& nodes() const { return nodes_; }
  bool operator==(const Expression& other) const;

 private:
  enum class Type { Int, Bool };
  Type check(std::size_t root) const;
  std::size_t subtree_begin(std::size_t root) const;
  void print(std::size_t root, std::string& out) const;

  std::vector<Node> nodes_;
};

// Builders used by tests and the generator.
inline Expression cst(Value v) { return Expression::constant(v); }
inline Expression var(std::string name) { return Expression::variable(std::move(name)); }
inline Expression lt(Expression a, Expression b) { return Expression::binary(Op::Lt, std::move(a), std::move(b)); }
inline Expression le(Expression a, Expression b) { return Expression::binary(Op::Le, std::move(a), std::move(b)); }
inline Expression gt(Expression a, Expression b) { return Expression::binary(Op::Gt, std::move(a), std::move(b)); }
inline Expression ge(Expression a, Expression b) { return Expression::binary(Op::Ge, std::move(a), std::move(b)); }
inline Expression eq(Expression a, Expression b) { return Expression::binary(Op::Eq, std::move(a), std::move(b)); }
inline Expression ne(Expression a, Expression b) { return Expression::binary(Op::Ne, std::move(a), std::move(b)); }
inline Expression add(Expression a, Expression b) { return Expression::binary(Op::Add, std::move(a), std::move(b)); }
inline Expression sub(Expression a, Expression b) { return Expression::binary(Op::Sub, std::move(a), std::move(b)); }
inline Expression mul(Expression a, Expression b) { return Expression::binary(Op::Mul, std::move(a), std::move(b)); }

}  // namespace mucx
