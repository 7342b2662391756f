#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mucx/constraint_set.hpp"
#include "mucx/lstc.hpp"
#include "mucx/network.hpp"
#include "mucx/solver.hpp"

namespace mucx::extractor {

enum class Method { Dc, DcMr, DcLstc };

std::string method_name(Method m);
/// "dc", "dc-mr" or "dc-lstc"; nullopt otherwise.
std::optional<Method> parse_method(const std::string& name);

enum class Provenance : std::uint8_t { None, Dichotomy, Rotation, LocalSearch };

std::string provenance_name(Provenance p);

enum class Status {
  Ok,
  /// Out of time; `muc` holds the constraints proved so far and is not a
  /// core.
  Timeout,
  /// The input has a solution.
  Satisfiable,
};

struct ExtractParams {
  Method method = Method::DcLstc;
  /// Seed of the local search calls; each call gets its own derived seed.
  std::uint64_t seed = 1;
  /// Template for every local search call. Its seed and deadline are
  /// overridden.
  lstc::LstcParams lstc;
  /// Node limit of each solve.
  std::optional<std::uint64_t> max_nodes_per_call;
  /// Whole extraction, preprocessing included.
  std::optional<std::chrono::milliseconds> timeout;
  /// Each solve starts from the ranking table and writes its final weights
  /// back into it. Off, the ranking is the preprocessing table, frozen.
  bool share_weights = false;
};

/// Every event an instrumented run may want to check.
struct Observer {
  /// c has just been added to the proved set. `current` is the working set
  /// at that moment; `witness` falsifies c alone among `current`.
  std::function<void(ConstraintId c, Provenance how, const ConstraintSet& current, const Assignment& witness)>
      on_insert;
  /// Top of each main loop iteration.
  std::function<void(const ConstraintSet& current, const ConstraintSet& proved, const ConstraintSet& cut)>
      on_iteration;
};

struct MucResult {
  Status status = Status::Ok;
  ConstraintSet muc;
  /// Indexed by constraint id; None outside `muc`.
  std::vector<Provenance> provenance;
  std::uint64_t mac_calls = 0;
  std::size_t prep_size = 0;
  std::size_t by_dichotomy = 0;
  std::size_t by_rotation = 0;
  std::size_t by_ls = 0;
  std::uint64_t lstc_iterations = 0;
  std::chrono::nanoseconds elapsed{0};

  bool ok() const { return status == Status::Ok; }
};

/// The `k` candidates of lowest weight, ties by smaller id. Throws
/// ContractError if k exceeds the candidate count.
ConstraintSet choose_cut(const ConstraintSet& candidates, const WeightTable& weights, std::size_t k);

/// Dichotomy destructive extraction over the preprocessed core, with the
/// method's transition booster run after every cut removal or transition
/// discovery.
MucResult extract_muc(const Network& net, const ExtractParams& params = {}, const Observer& observer = {});

}  // namespace mucx::extractor
