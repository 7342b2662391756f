#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mucx/error.hpp"
#include "mucx/expr.hpp"
#include "mucx/network.hpp"

namespace mucx::io {

inline constexpr int kFormatVersion = 1;

enum class ParseCode {
  Io,
  Syntax,
  Schema,
  Version,
  EmptyDomain,
  BadDomain,
  DuplicateName,
  UnknownVariable,
  ArityMismatch,
  BadExpression,
  TypeMismatch,
  ValueOutOfDomain,
};

/// Stable lower-case tag, e.g. "unknown-variable".
std::string_view code_name(ParseCode code);

class ParseError : public Error {
 public:
  ParseError(ParseCode code, std::string message, std::size_t line, std::size_t column, std::string path = {});

  ParseCode code() const { return code_; }
  /// 1-based; 0 when unknown.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// JSON pointer of the offending node, empty for syntax errors.
  const std::string& path() const { return path_; }
  const std::string& message() const { return message_; }

 private:
  ParseCode code_;
  std::string message_;
  std::size_t line_, column_;
  std::string path_;
};

/// Prefix expression such as "eq(m,add(l,2))". Whitespace is ignored.
/// Errors carry line 1 and the column inside `text`.
Expression parse_expression(std::string_view text);

/// Network document:
///
///   {"format-version": 1,
///    "variables": [{"name": "x", "domain": [1, 2]},
///                  {"name": "y", "domain": {"range": [0, 4]}}],
///    "constraints": [{"name": "c1", "scope": ["x", "y"], "expr": "lt(x,y)"},
///                    {"name": "c2", "scope": ["x", "y"],
///                     "table": {"polarity": "conflicts", "tuples": [[1, 0]]}}]}
///
/// Unknown keys are rejected. Explicit domains may be unordered but not
/// repeat a value.
Network parse_network(std::string_view text);
Network load_network(const std::filesystem::path& file);

/// Reparses to an identical network.
std::string serialize_network(const Network& net);
void save_network(const Network& net, const std::filesystem::path& file);

struct StatsRecord {
  std::string instance;
  std::size_t constraints = 0;
  std::size_t variables = 0;
  std::size_t prep_size = 0;
  std::string method;
  std::uint64_t seed = 0;
  double time_ms = 0;
  std::size_t muc_size = 0;
  std::uint64_t mac_calls = 0;
  std::size_t by_rotation = 0;
  std::size_t by_ls = 0;
  std::string status;
};

std::string_view csv_header();
/// One line without the trailing newline; time_ms has three decimals.
std::string csv_row(const StatsRecord& r);

}  // namespace mucx::io
