#include "mucx/wcore.hpp"

#include "mucx/error.hpp"

namespace mucx::wcore {

WcoreResult wcore(const Network& net, const ConstraintSet& start, const solver::SolverParams& params,
                  std::optional<solver::SolveResult> first) {
  WcoreResult out;
  out.core = start;
  out.weights.assign(net.num_constraints(), 1);

  solver::SolveResult r;
  if (first) {
    r = std::move(*first);
  } else {
    r = solver::solve(net, start, params);
    ++out.mac_calls;
  }

  while (true) {
    ++out.iterations;
    switch (r.outcome) {
      case solver::Outcome::Sat:
        throw InternalContradiction("wcore: a supposedly unsatisfiable constraint set has a solution");
      case solver::Outcome::BudgetExhausted:
        out.verified = false;
        return out;
      case solver::Outcome::Unsat:
        break;
    }
    out.weights = r.weights;
    if (r.active == out.core) return out;
    out.core = r.active;
    r = solver::solve(net, out.core, params);
    ++out.mac_calls;
  }
}

}  // namespace mucx::wcore
