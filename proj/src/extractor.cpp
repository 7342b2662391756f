#include "mucx/extractor.hpp"

#include <algorithm>
#include <numeric>

#include "mucx/error.hpp"
#include "mucx/random.hpp"
#include "mucx/rotation.hpp"
#include "mucx/wcore.hpp"

namespace mucx::extractor {

std::string method_name(Method m) {
  switch (m) {
    case Method::Dc: return "dc";
    case Method::DcMr: return "dc-mr";
    case Method::DcLstc: return "dc-lstc";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "dc") return Method::Dc;
  if (name == "dc-mr") return Method::DcMr;
  if (name == "dc-lstc") return Method::DcLstc;
  return std::nullopt;
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::None: return "none";
    case Provenance::Dichotomy: return "dichotomy";
    case Provenance::Rotation: return "rotation";
    case Provenance::LocalSearch: return "local-search";
  }
  return "?";
}

ConstraintSet choose_cut(const ConstraintSet& candidates, const WeightTable& weights, std::size_t k) {
  if (k > candidates.size()) throw ContractError("choose_cut: k exceeds the number of candidates");
  auto ids = candidates.ids();
  std::stable_sort(ids.begin(), ids.end(), [&](ConstraintId a, ConstraintId b) { return weights[a] < weights[b]; });
  ConstraintSet out(candidates.universe());
  for (std::size_t i = 0; i < k; ++i) out.insert(ids[i]);
  return out;
}

namespace {

std::size_t half(std::size_t n) { return (n + 1) / 2; }

class Extraction {
 public:
  Extraction(const Network& net, const ExtractParams& params, const Observer& observer)
      : net_(net), params_(params), observer_(observer), seeds_(params.seed), start_(Clock::now()) {
    if (params.timeout) deadline_ = start_ + *params.timeout;
    out_.muc = net.none();
    out_.provenance.assign(net.num_constraints(), Provenance::None);
  }

  MucResult run() {
    auto first = solve(net_.all());
    if (first.sat()) return finish(Status::Satisfiable);
    if (!first.unsat()) return finish(Status::Timeout);

    auto prep = wcore::wcore(net_, net_.all(), solver_params(), std::move(first));
    out_.mac_calls += prep.mac_calls;
    if (!prep.verified) return finish(Status::Timeout);
    current_ = prep.core;
    ranking_ = prep.weights;
    out_.prep_size = current_.size();

    ConstraintSet& proved = out_.muc;
    ConstraintSet cut = choose_cut(current_, ranking_, half(current_.size()));
    std::optional<Assignment> transition;
    while (!cut.empty()) {
      if (observer_.on_iteration) observer_.on_iteration(current_, proved, cut);
      check_invariants(cut);
      auto r = solve(current_ - cut);
      if (r.outcome == solver::Outcome::BudgetExhausted) return finish(Status::Timeout);
      if (r.sat() && cut.size() > 1) {
        cut = choose_cut(cut, ranking_, half(cut.size()));
        continue;
      }
      if (r.unsat()) {
        current_ -= cut;
      } else {
        const ConstraintId c = cut.ids().front();
        transition = r.assignment;
        insert(c, Provenance::Dichotomy, *transition);
      }
      if (!boost(transition)) return finish(Status::Timeout);
      auto open = current_ - proved;
      cut = choose_cut(open, ranking_, half(open.size()));
    }
    return finish(Status::Ok);
  }

 private:
  solver::SolverParams solver_params() const {
    solver::SolverParams p;
    p.budget.max_nodes = params_.max_nodes_per_call;
    p.budget.deadline = deadline_;
    if (params_.share_weights && !ranking_.empty()) p.initial_weights = ranking_;
    return p;
  }

  solver::SolveResult solve(const ConstraintSet& enabled) {
    auto r = solver::solve(net_, enabled, solver_params());
    ++out_.mac_calls;
    if (params_.share_weights && r.outcome != solver::Outcome::BudgetExhausted && !ranking_.empty())
      ranking_ = r.weights;
    return r;
  }

  void insert(ConstraintId c, Provenance how, const Assignment& witness) {
    out_.muc.insert(c);
    out_.provenance[c] = how;
    switch (how) {
      case Provenance::Dichotomy: ++out_.by_dichotomy; break;
      case Provenance::Rotation: ++out_.by_rotation; break;
      case Provenance::LocalSearch: ++out_.by_ls; break;
      case Provenance::None: break;
    }
    if (observer_.on_insert) observer_.on_insert(c, how, current_, witness);
  }

  // False when the booster ran out of time.
  bool boost(const std::optional<Assignment>& transition) {
    switch (params_.method) {
      case Method::Dc:
        return true;
      case Method::DcMr: {
        if (!transition) return true;
        // The falsified constraint is proved and never cut, so the
        // assignment stays a transition assignment; checked anyway.
        if (!transition_check(net_, *transition, current_)) return true;
        rotation::recursive_mr(net_, current_, out_.muc, *transition,
                                        [&](ConstraintId c, const Assignment& w) {
                                          if (!out_.muc.contains(c)) insert(c, Provenance::Rotation, w);
                                        });
        return !past_deadline();
      }
      case Method::DcLstc: {
        lstc::LstcParams p = params_.lstc;
        p.seed = seeds_.next();
        p.deadline = deadline_;
        auto r = lstc::lstc(net_, current_, out_.muc, transition.value_or(Assignment()), p,
                            [&](ConstraintId c, const Assignment& w) { insert(c, Provenance::LocalSearch, w); });
        out_.lstc_iterations += r.stats.iterations;
        return !r.stats.timed_out;
      }
    }
    return true;
  }

  bool past_deadline() const { return deadline_ && Clock::now() >= *deadline_; }

  void check_invariants([[maybe_unused]] const ConstraintSet& cut) const {
#ifndef NDEBUG
    const ConstraintSet& proved = out_.muc;
    if (!proved.is_subset_of(current_) || !cut.is_subset_of(current_ - proved))
      throw InternalContradiction("extract_muc: loop invariant broken");
#endif
  }

  MucResult finish(Status status) {
    out_.status = status;
    out_.elapsed = Clock::now() - start_;
    return std::move(out_);
  }

  const Network& net_;
  const ExtractParams& params_;
  const Observer& observer_;
  Rng seeds_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  ConstraintSet current_;
  WeightTable ranking_;
  MucResult out_;
};

}  // namespace

MucResult extract_muc(const Network& net, const ExtractParams& params, const Observer& observer) {
  return Extraction(net, params, observer).run();
}

}  // namespace mucx::extractor
