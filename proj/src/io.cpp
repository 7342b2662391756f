#include "mucx/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mucx::io {

using nlohmann::json;
using Pointer = json::json_pointer;

std::string_view code_name(ParseCode code) {
  switch (code) {
    case ParseCode::Io: return "io";
    case ParseCode::Syntax: return "syntax";
    case ParseCode::Schema: return "schema";
    case ParseCode::Version: return "version";
    case ParseCode::EmptyDomain: return "empty-domain";
    case ParseCode::BadDomain: return "bad-domain";
    case ParseCode::DuplicateName: return "duplicate-name";
    case ParseCode::UnknownVariable: return "unknown-variable";
    case ParseCode::ArityMismatch: return "arity-mismatch";
    case ParseCode::BadExpression: return "bad-expression";
    case ParseCode::TypeMismatch: return "type-mismatch";
    case ParseCode::ValueOutOfDomain: return "value-out-of-domain";
  }
  return "?";
}

namespace {

std::string describe(ParseCode code, const std::string& message, std::size_t line, std::size_t column) {
  std::string out;
  if (line > 0) out = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
  out += message;
  out += " [";
  out += code_name(code);
  out += ']';
  return out;
}

}  // namespace

ParseError::ParseError(ParseCode code, std::string message, std::size_t line, std::size_t column, std::string path)
    : Error(describe(code, message, line, column)),
      code_(code),
      message_(std::move(message)),
      line_(line),
      column_(column),
      path_(std::move(path)) {}

// ---------------------------------------------------------------------------
// Expressions

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '.'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

bool is_identifier(std::string_view s) {
  return !s.empty() && ident_start(s.front()) && std::all_of(s.begin(), s.end(), ident_char);
}

std::optional<Op> function_op(std::string_view name) {
  for (int i = static_cast<int>(Op::Neg); i <= static_cast<int>(Op::Not); ++i) {
    auto op = static_cast<Op>(i);
    if (op_name(op) == name) return op;
  }
  return std::nullopt;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  Expression parse() {
    Expression e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(ParseCode::BadExpression, "unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(ParseCode code, std::string message, std::size_t at) const {
    throw ParseError(code, std::move(message), 1, at + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size()) fail(ParseCode::BadExpression, std::string("expected '") + c + "' at end of input", pos_);
    if (s_[pos_] != c)
      fail(ParseCode::BadExpression, std::string("expected '") + c + "', found '" + s_[pos_] + "'", pos_);
    ++pos_;
  }

  Expression expr() {
    skip_ws();
    if (pos_ >= s_.size()) fail(ParseCode::BadExpression, "expected an expression", pos_);
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (digit(c) || ((c == '-' || c == '+') && pos_ + 1 < s_.size() && digit(s_[pos_ + 1]))) return number();
    if (!ident_start(c)) fail(ParseCode::BadExpression, std::string("unexpected '") + c + "'", pos_);
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '(') return Expression::variable(std::move(name));

    auto op = function_op(name);
    if (!op) fail(ParseCode::BadExpression, "unknown function '" + name + "'", start);
    ++pos_;
    std::vector<Expression> args;
    args.push_back(expr());
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        args.push_back(expr());
        continue;
      }
      expect(')');
      break;
    }
    if (static_cast<int>(args.size()) != op_arity(*op))
      fail(ParseCode::ArityMismatch,
           name + " takes " + std::to_string(op_arity(*op)) + " argument(s), got " + std::to_string(args.size()),
           start);
    if (args.size() == 1) return Expression::unary(*op, std::move(args[0]));
    return Expression::binary(*op, std::move(args[0]), std::move(args[1]));
  }

  Expression number() {
    const std::size_t start = pos_;
    if (s_[pos_] == '+') ++pos_;
    const std::size_t digits = pos_;
    ++pos_;
    while (pos_ < s_.size() && digit(s_[pos_])) ++pos_;
    Value v = 0;
    auto [end, ec] = std::from_chars(s_.data() + digits, s_.data() + pos_, v);
    if (ec != std::errc() || end != s_.data() + pos_) fail(ParseCode::BadExpression, "integer out of range", start);
    if (pos_ < s_.size() && ident_char(s_[pos_])) fail(ParseCode::BadExpression, "malformed integer", start);
    return Expression::constant(v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Network documents

namespace {

// Finds the byte offset of the value a JSON pointer designates, by walking
// the raw text. Only used on text that already parsed.
class Locator {
 public:
  explicit Locator(std::string_view text) : s_(text) {}

  std::optional<std::size_t> find(const Pointer& ptr) const {
    std::size_t i = ws(0);
    Pointer parent = ptr;
    std::vector<std::string> tokens;
    while (!parent.empty()) {
      tokens.push_back(parent.back());
      parent.pop_back();
    }
    std::reverse(tokens.begin(), tokens.end());
    for (const auto& token : tokens) {
      if (i >= s_.size()) return std::nullopt;
      if (s_[i] == '{') {
        i = ws(i + 1);
        bool found = false;
        while (i < s_.size() && s_[i] == '"') {
          const std::size_t end = string_end(i);
          const auto key = json::parse(s_.substr(i, end - i)).get<std::string>();
          i = ws(ws(end) + 1);
          if (key == token) {
            found = true;
            break;
          }
          i = ws(value_end(i));
          if (i < s_.size() && s_[i] == ',') i = ws(i + 1);
        }
        if (!found) return std::nullopt;
      } else if (s_[i] == '[') {
        std::size_t index = 0;
        auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
        if (ec != std::errc() || p != token.data() + token.size()) return std::nullopt;
        i = ws(i + 1);
        for (std::size_t k = 0; k < index; ++k) {
          if (i >= s_.size() || s_[i] == ']') return std::nullopt;
          i = ws(value_end(i));
          if (i < s_.size() && s_[i] == ',') i = ws(i + 1);
        }
        if (i >= s_.size() || s_[i] == ']') return std::nullopt;
      } else {
        return std::nullopt;
      }
    }
    return i;
  }

  std::pair<std::size_t, std::size_t> line_column(std::size_t offset) const {
    offset = std::min(offset, s_.size());
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < offset; ++k) {
      if (s_[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

 private:
  std::size_t ws(std::size_t i) const {
    while (i < s_.size() && (s_[i] == ' ' || s_[i] == '\t' || s_[i] == '\n' || s_[i] == '\r')) ++i;
    return i;
  }

  std::size_t string_end(std::size_t i) const {
    for (++i; i < s_.size(); ++i) {
      if (s_[i] == '\\')
        ++i;
      else if (s_[i] == '"')
        return i + 1;
    }
    return s_.size();
  }

  std::size_t value_end(std::size_t i) const {
    if (i >= s_.size()) return i;
    if (s_[i] == '"') return string_end(i);
    if (s_[i] == '{' || s_[i] == '[') {
      int depth = 0;
      for (; i < s_.size(); ++i) {
        const char c = s_[i];
        if (c == '"') {
          i = string_end(i) - 1;
        } else if (c == '{' || c == '[') {
          ++depth;
        } else if (c == '}' || c == ']') {
          if (--depth == 0) return i + 1;
        }
      }
      return i;
    }
    while (i < s_.size() && s_[i] != ',' && s_[i] != '}' && s_[i] != ']' && s_[i] != ' ' && s_[i] != '\n' &&
           s_[i] != '\t' && s_[i] != '\r')
      ++i;
    return i;
  }

  std::string_view s_;
};

constexpr std::size_t kMaxDomainSize = std::size_t{1} << 20;

class DocParser {
 public:
  explicit DocParser(std::string_view text) : text_(text), locator_(text) {}

  Network parse() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      auto [line, column] = locator_.line_column(e.byte > 0 ? e.byte - 1 : 0);
      std::string what = e.what();
      // Drop the library's "[json.exception.parse_error.101] parse error at ...: " prefix.
      if (auto colon = what.rfind(": "); colon != std::string::npos) what = what.substr(colon + 2);
      throw ParseError(ParseCode::Syntax, what, line, column);
    }

    const Pointer root;
    require_object(doc, root, {"format-version", "variables", "constraints"});
    const json& version = member(doc, root, "format-version");
    if (!version.is_number_integer() || version.get<std::int64_t>() != kFormatVersion)
      fail(ParseCode::Version, root / "format-version",
           "unsupported format-version, expected " + std::to_string(kFormatVersion));

    std::vector<Variable> vars = variables(member(doc, root, "variables"), root / "variables");
    std::vector<ConstraintDef> defs = constraints(member(doc, root, "constraints"), root / "constraints");
    try {
      return Network(std::move(vars), std::move(defs));
    } catch (const StructuralError& e) {
      fail(ParseCode::Schema, root, e.what());
    }
  }

 private:
  [[noreturn]] void fail(ParseCode code, const Pointer& at, std::string message, std::size_t shift = 0) const {
    std::size_t line = 0, column = 0;
    if (auto offset = locator_.find(at)) std::tie(line, column) = locator_.line_column(*offset + shift);
    const std::string path = at.to_string();
    if (!path.empty()) message = path + ": " + message;
    throw ParseError(code, std::move(message), line, column, path);
  }

  void require_object(const json& j, const Pointer& at, std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(ParseCode::Schema, at, "expected an object");
    for (const auto& [key, value] : j.items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        fail(ParseCode::Schema, at / key, "unknown key '" + key + "'");
  }

  const json& member(const json& j, const Pointer& at, const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end()) fail(ParseCode::Schema, at, "missing key '" + key + "'");
    return *it;
  }

  const json& array(const json& j, const Pointer& at) const {
    if (!j.is_array()) fail(ParseCode::Schema, at, "expected an array");
    return j;
  }

  std::string name(const json& j, const Pointer& at) const {
    if (!j.is_string()) fail(ParseCode::Schema, at, "expected a string");
    auto s = j.get<std::string>();
    if (!is_identifier(s)) fail(ParseCode::Schema, at, "'" + s + "' is not a valid name");
    return s;
  }

  Value integer(const json& j, const Pointer& at) const {
    if (!j.is_number_integer()) fail(ParseCode::Schema, at, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      fail(ParseCode::Schema, at, "integer out of range");
    return j.get<Value>();
  }

  std::vector<Value> domain(const json& j, const Pointer& at) const {
    std::vector<Value> out;
    if (j.is_array()) {
      if (j.empty()) fail(ParseCode::EmptyDomain, at, "empty domain");
      if (j.size() > kMaxDomainSize) fail(ParseCode::BadDomain, at, "domain too large");
      std::set<Value> seen;
      for (std::size_t k = 0; k < j.size(); ++k) {
        Value v = integer(j[k], at / k);
        if (!seen.insert(v).second) fail(ParseCode::BadDomain, at / k, "value " + std::to_string(v) + " repeated");
        out.push_back(v);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    if (!j.is_object()) fail(ParseCode::Schema, at, "expected a value list or {\"range\": [lo, hi]}");
    require_object(j, at, {"range"});
    const Pointer rp = at / "range";
    const json& r = array(member(j, at, "range"), rp);
    if (r.size() != 2) fail(ParseCode::Schema, rp, "range takes [lo, hi]");
    const Value lo = integer(r[0], rp / 0), hi = integer(r[1], rp / 1);
    if (lo > hi) fail(ParseCode::EmptyDomain, rp, "empty range");
    if (static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) >= kMaxDomainSize)
      fail(ParseCode::BadDomain, rp, "domain too large");
    for (Value v = lo;; ++v) {
      out.push_back(v);
      if (v == hi) break;
    }
    return out;
  }

  std::vector<Variable> variables(const json& list, const Pointer& at) {
    array(list, at);
    std::vector<Variable> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Pointer p = at / i;
      require_object(list[i], p, {"name", "domain"});
      Variable v;
      v.name = name(member(list[i], p, "name"), p / "name");
      if (!var_index_.emplace(v.name, out.size()).second)
        fail(ParseCode::DuplicateName, p / "name", "duplicate variable name '" + v.name + "'");
      v.domain = domain(member(list[i], p, "domain"), p / "domain");
      domains_.push_back(v.domain);
      out.push_back(std::move(v));
    }
    return out;
  }

  std::vector<ConstraintDef> constraints(const json& list, const Pointer& at) {
    array(list, at);
    std::vector<ConstraintDef> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Pointer p = at / i;
      const json& j = list[i];
      require_object(j, p, {"name", "scope", "expr", "table"});
      ConstraintDef def;
      def.name = name(member(j, p, "name"), p / "name");
      if (!names.insert(def.name).second)
        fail(ParseCode::DuplicateName, p / "name", "duplicate constraint name '" + def.name + "'");

      const Pointer sp = p / "scope";
      const json& scope = array(member(j, p, "scope"), sp);
      if (scope.empty()) fail(ParseCode::ArityMismatch, sp, "empty scope");
      std::vector<std::size_t> scope_vars;
      for (std::size_t k = 0; k < scope.size(); ++k) {
        if (!scope[k].is_string()) fail(ParseCode::Schema, sp / k, "expected a variable name");
        auto n = scope[k].get<std::string>();
        auto it = var_index_.find(n);
        if (it == var_index_.end()) fail(ParseCode::UnknownVariable, sp / k, "unknown variable '" + n + "'");
        if (std::find(def.scope.begin(), def.scope.end(), n) != def.scope.end())
          fail(ParseCode::DuplicateName, sp / k, "variable '" + n + "' repeated in scope");
        def.scope.push_back(n);
        scope_vars.push_back(it->second);
      }

      const bool has_expr = j.contains("expr"), has_table = j.contains("table");
      if (has_expr == has_table) fail(ParseCode::Schema, p, "exactly one of 'expr' and 'table' is required");
      if (has_expr)
        def.body = expression(j["expr"], p / "expr", def.scope);
      else
        def.body = table(j["table"], p / "table", scope_vars);
      out.push_back(std::move(def));
    }
    return out;
  }

  Expression expression(const json& j, const Pointer& at, const std::vector<std::string>& scope) const {
    if (!j.is_string()) fail(ParseCode::Schema, at, "expected an expression string");
    Expression e;
    try {
      e = parse_expression(j.get<std::string>());
    } catch (const ParseError& err) {
      fail(err.code(), at, err.message(), err.column());
    }
    for (const auto& v : e.variables())
      if (std::find(scope.begin(), scope.end(), v) == scope.end())
        fail(ParseCode::UnknownVariable, at, "variable '" + v + "' is not in the scope");
    bool boolean = false;
    try {
      boolean = e.is_boolean();
    } catch (const StructuralError& err) {
      fail(ParseCode::TypeMismatch, at, err.what());
    }
    if (!boolean) fail(ParseCode::TypeMismatch, at, "expression is not a condition");
    return e;
  }

  TupleTable table(const json& j, const Pointer& at, const std::vector<std::size_t>& scope_vars) const {
    require_object(j, at, {"polarity", "tuples"});
    TupleTable t;
    const json& pol = member(j, at, "polarity");
    if (pol == "supports")
      t.polarity = Polarity::Supports;
    else if (pol == "conflicts")
      t.polarity = Polarity::Conflicts;
    else
      fail(ParseCode::Schema, at / "polarity", "polarity is \"supports\" or \"conflicts\"");
    const Pointer tp = at / "tuples";
    const json& tuples = array(member(j, at, "tuples"), tp);
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const json& row = array(tuples[k], tp / k);
      if (row.size() != scope_vars.size())
        fail(ParseCode::ArityMismatch, tp / k,
             "tuple of " + std::to_string(row.size()) + " values for a scope of " + std::to_string(scope_vars.size()));
      std::vector<Value> tuple;
      for (std::size_t m = 0; m < row.size(); ++m) {
        Value v = integer(row[m], tp / k / m);
        const auto& dom = domains_[scope_vars[m]];
        if (!std::binary_search(dom.begin(), dom.end(), v))
          fail(ParseCode::ValueOutOfDomain, tp / k / m, "value " + std::to_string(v) + " outside the domain");
        tuple.push_back(v);
      }
      t.tuples.push_back(std::move(tuple));
    }
    return t;
  }

  std::string_view text_;
  Locator locator_;
  std::map<std::string, std::size_t> var_index_;
  std::vector<std::vector<Value>> domains_;
};

}  // namespace

Network parse_network(std::string_view text) { return DocParser(text).parse(); }

Network load_network(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError(ParseCode::Io, "cannot open " + file.string(), 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string serialize_network(const Network& net) {
  using ordered = nlohmann::ordered_json;
  std::string out = "{\n  \"format-version\": " + std::to_string(kFormatVersion) + ",\n  \"variables\": [";
  for (VarIndex x = 0; x < net.num_variables(); ++x) {
    const auto& v = net.variable(x);
    ordered j;
    j["name"] = v.name;
    const bool contiguous = v.domain.size() >= 3 && v.domain.back() - v.domain.front() + 1 ==
                                                        static_cast<Value>(v.domain.size());
    if (contiguous)
      j["domain"] = ordered{{"range", {v.domain.front(), v.domain.back()}}};
    else
      j["domain"] = v.domain;
    out += x == 0 ? "\n    " : ",\n    ";
    out += j.dump();
  }
  out += "\n  ],\n  \"constraints\": [";
  for (ConstraintId c = 0; c < net.num_constraints(); ++c) {
    const auto& con = net.constraint(c);
    ordered j;
    j["name"] = con.name();
    std::vector<std::string> scope;
    for (auto x : con.scope()) scope.push_back(net.variable(x).name);
    j["scope"] = scope;
    if (const auto* e = std::get_if<Expression>(&con.body())) {
      j["expr"] = e->to_string();
    } else {
      const auto& t = std::get<TupleTable>(con.body());
      j["table"] = ordered{{"polarity", t.polarity == Polarity::Supports ? "supports" : "conflicts"},
                           {"tuples", t.tuples}};
    }
    out += c == 0 ? "\n    " : ",\n    ";
    out += j.dump();
  }
  out += "\n  ]\n}\n";
  return out;
}

void save_network(const Network& net, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << serialize_network(net);
  if (!out) throw Error("cannot write " + file.string());
}

std::string_view csv_header() {
  return "instance,|C|,|X|,prep_size,method,seed,time_ms,muc_size,mac_calls,by_rotation,by_ls,status";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string csv_row(const StatsRecord& r) {
  char time[64];
  std::snprintf(time, sizeof time, "%.3f", r.time_ms);
  std::string out = csv_field(r.instance);
  for (const std::string& field :
       {std::to_string(r.constraints), std::to_string(r.variables), std::to_string(r.prep_size), csv_field(r.method),
        std::to_string(r.seed), std::string(time), std::to_string(r.muc_size), std::to_string(r.mac_calls),
        std::to_string(r.by_rotation), std::to_string(r.by_ls), csv_field(r.status)}) {
    out += ',';
    out += field;
  }
  return out;
}

}  // namespace mucx::io
