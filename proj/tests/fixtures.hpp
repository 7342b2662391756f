#pragma once

// Networks shared by the unit and acceptance suites, built in code so the
// model tests do not depend on the file parser.

#include <string>
#include <vector>

#include "mucx/network.hpp"

namespace mucx::fixtures {

inline std::vector<Value> range(Value lo, Value hi) {
  std::vector<Value> out;
  for (Value v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

/// Five variables over {0..4}, seven binary constraints c1..c7 (ids 0..6).
/// c3 is j <= l and c7 is k != l.
inline Network example1() {
  std::vector<Variable> vars;
  for (const char* n : {"i", "j", "k", "l", "m"}) vars.push_back({n, range(0, 4)});
  std::vector<ConstraintDef> cons;
  cons.push_back({"c1", {"m", "i"}, gt(var("m"), var("i"))});
  cons.push_back({"c2", {"m", "l"}, eq(var("m"), add(var("l"), cst(2)))});
  cons.push_back({"c3", {"j", "l"}, le(var("j"), var("l"))});
  cons.push_back({"c4", {"i", "j"}, lt(var("i"), var("j"))});
  cons.push_back({"c5", {"k", "i"}, lt(var("k"), var("i"))});
  cons.push_back({"c6", {"j", "k"}, lt(var("j"), var("k"))});
  cons.push_back({"c7", {"k", "l"}, ne(var("k"), var("l"))});
  return Network(std::move(vars), std::move(cons));
}

/// The unique minimal core of example1 as a standalone three-variable network.
inline Network fig1b() {
  std::vector<Variable> vars;
  for (const char* n : {"i", "j", "k"}) vars.push_back({n, range(0, 4)});
  std::vector<ConstraintDef> cons;
  cons.push_back({"c4", {"i", "j"}, lt(var("i"), var("j"))});
  cons.push_back({"c5", {"k", "i"}, lt(var("k"), var("i"))});
  cons.push_back({"c6", {"j", "k"}, lt(var("j"), var("k"))});
  return Network(std::move(vars), std::move(cons));
}

/// Four variables over {1,2}, five != constraints c1..c5 (ids 0..4).
inline Network fig2() {
  std::vector<Variable> vars;
  for (const char* n : {"x1", "x2", "x3", "x4"}) vars.push_back({n, {1, 2}});
  std::vector<ConstraintDef> cons;
  cons.push_back({"c1", {"x1", "x2"}, ne(var("x1"), var("x2"))});
  cons.push_back({"c2", {"x1", "x3"}, ne(var("x1"), var("x3"))});
  cons.push_back({"c3", {"x2", "x3"}, ne(var("x2"), var("x3"))});
  cons.push_back({"c4", {"x2", "x4"}, ne(var("x2"), var("x4"))});
  cons.push_back({"c5", {"x3", "x4"}, ne(var("x3"), var("x4"))});
  return Network(std::move(vars), std::move(cons));
}

/// Complete != graph on n variables over {0..colors-1}.
inline Network clique(int n, int colors) {
  std::vector<Variable> vars;
  for (int i = 1; i <= n; ++i) vars.push_back({"x" + std::to_string(i), range(0, colors - 1)});
  std::vector<ConstraintDef> cons;
  int id = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      std::string a = "x" + std::to_string(i), b = "x" + std::to_string(j);
      cons.push_back({"c" + std::to_string(id++), {a, b}, ne(var(a), var(b))});
    }
  return Network(std::move(vars), std::move(cons));
}

/// Example 1's transition assignment {i=2,j=0,k=1,l=2,m=4}.
inline Assignment example1_transition() { return Assignment({2, 0, 1, 2, 4}); }

}  // namespace mucx::fixtures
