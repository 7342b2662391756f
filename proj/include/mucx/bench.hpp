#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mucx/extractor.hpp"
#include "mucx/io.hpp"

namespace mucx::bench {

struct BenchParams {
  std::vector<extractor::Method> methods = {extractor::Method::Dc, extractor::Method::DcMr,
                                            extractor::Method::DcLstc};
  /// Rows use seeds 1..seeds.
  std::uint64_t seeds = 1;
  /// Per extraction.
  std::optional<std::chrono::milliseconds> timeout;
  /// Template for every extraction; method, seed and timeout are overridden.
  extractor::ExtractParams extract;
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;
  /// Check every OK row with the exhaustive oracle when the instance is small
  /// enough; failures become NOTMUC rows.
  bool certify = false;
};

/// Status column values.
inline constexpr const char* kOk = "OK";
inline constexpr const char* kTimeout = "TO";
inline constexpr const char* kSat = "SAT";
inline constexpr const char* kNotMuc = "NOTMUC";
inline constexpr const char* kError = "ERROR";

/// The *.json files of `dir`, sorted by file name.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

/// One row per (instance, method, seed) in that nesting order, whatever the
/// number of workers. Unparsable files give ERROR rows.
std::vector<io::StatsRecord> run(const std::vector<std::filesystem::path>& instances, const BenchParams& params);

struct MethodSummary {
  std::string method;
  std::size_t rows = 0;
  std::size_t solved = 0;
  /// Sorted times of the solved rows, the cactus curve.
  std::vector<double> solved_times_ms;
  /// Median over solved rows of (by_rotation + by_ls) / muc_size.
  double median_booster_fraction = 0;
  double median_mac_calls = 0;
};

std::vector<MethodSummary> summarize(const std::vector<io::StatsRecord>& rows);

/// method,solved,rows,median_mac_calls,median_booster_fraction
std::string summary_csv(const std::vector<MethodSummary>& summary);
/// method,rank,time_ms: the k-th fastest solved row of each method.
std::string cactus_csv(const std::vector<MethodSummary>& summary);

double median(std::vector<double> values);

}  // namespace mucx::bench
