#pragma once

#include "ivpoly/floorcert/linear_form.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly::floorcert {

// prod(numerator forms)! / prod(denominator forms)! * 2^scalar_pow2 over the
// integer points of `region` (each form there is >= 0).
struct FactorialRatioSpec {
  std::vector<std::string> variables;
  std::vector<LinearForm> numerator;
  std::vector<LinearForm> denominator;
  std::vector<LinearForm> region;
  std::int64_t scalar_pow2 = 0;

  bool in_region(const Assignment& a) const {
    return std::all_of(region.begin(), region.end(),
                       [&](const LinearForm& f) { return f.evaluate(a) >= 0; });
  }

  friend bool operator==(const FactorialRatioSpec&, const FactorialRatioSpec&) = default;
};

class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_, column_;
  std::string message_;
};

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace detail

// Line-oriented DSL:
//   vars <name>...
//   assume <form> >= <form>      ('>' means '>= +1')
//   num <form> | den <form>      (one factorial per line)
//   pow2 <integer>
// '#' starts a comment.
inline FactorialRatioSpec parse_spec(std::string_view text) {
  FactorialRatioSpec spec;
  bool have_vars = false;
  bool have_pow2 = false;
  std::size_t line_no = 0;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    ++line_no;
    std::string_view line = text.substr(line_start, line_end - line_start);
    line_start = line_end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t p = 0;
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    if (p == line.size()) continue;
    std::size_t kw_end = p;
    while (kw_end < line.size() && !std::isspace(static_cast<unsigned char>(line[kw_end]))) ++kw_end;
    const std::string_view keyword = line.substr(p, kw_end - p);
    const std::string_view rest = line.substr(kw_end);
    const std::size_t rest_col = kw_end + 1;

    auto parse_form = [&](std::string_view body, std::size_t body_col) {
      ParsedForm parsed;
      try {
        parsed = parse_linear_form(body);
      } catch (const FormSyntaxError& e) {
        throw SpecParseError(line_no, body_col + e.column() - 1, e.what());
      }
      for (const VariableUse& use : parsed.uses) {
        if (std::find(spec.variables.begin(), spec.variables.end(), use.name) == spec.variables.end())
          throw SpecParseError(line_no, body_col + use.column - 1,
                               "unbound variable '" + use.name + "'");
      }
      return parsed.form;
    };

    if (keyword == "vars") {
      if (have_vars) throw SpecParseError(line_no, p + 1, "duplicate 'vars' declaration");
      have_vars = true;
      std::size_t q = 0;
      while (q < rest.size()) {
        while (q < rest.size() && std::isspace(static_cast<unsigned char>(rest[q]))) ++q;
        if (q == rest.size()) break;
        std::size_t e = q;
        while (e < rest.size() && !std::isspace(static_cast<unsigned char>(rest[e]))) ++e;
        const std::string name(rest.substr(q, e - q));
        if (!detail::is_identifier(name))
          throw SpecParseError(line_no, rest_col + q, "invalid variable name '" + name + "'");
        if (name == kModulusParameter)
          throw SpecParseError(line_no, rest_col + q,
                               "'n' is reserved for the modulus parameter q = 2n+1");
        if (std::find(spec.variables.begin(), spec.variables.end(), name) != spec.variables.end())
          throw SpecParseError(line_no, rest_col + q, "variable '" + name + "' declared twice");
        spec.variables.push_back(name);
        q = e;
      }
      if (spec.variables.empty()) throw SpecParseError(line_no, p + 1, "'vars' needs at least one name");
    } else if (keyword == "num" || keyword == "den" || keyword == "assume") {
      if (!have_vars) throw SpecParseError(line_no, p + 1, "'vars' must come first");
      if (keyword == "assume") {
        std::size_t op = rest.find_first_of("><");
        if (op == std::string_view::npos)
          throw SpecParseError(line_no, rest_col + rest.size(), "expected '>=' or '>'");
        if (rest[op] == '<') throw SpecParseError(line_no, rest_col + op, "use '>=' or '>'");
        const bool strict = !(op + 1 < rest.size() && rest[op + 1] == '=');
        const std::size_t rhs_at = op + (strict ? 1 : 2);
        LinearForm lhs = parse_form(rest.substr(0, op), rest_col);
        LinearForm rhs = parse_form(rest.substr(rhs_at), rest_col + rhs_at);
        LinearForm f = lhs - rhs;
        if (strict) f.add_constant(-1);
        spec.region.push_back(std::move(f));
      } else {
        LinearForm f = parse_form(rest, rest_col);
        (keyword == "num" ? spec.numerator : spec.denominator).push_back(std::move(f));
      }
    } else if (keyword == "pow2") {
      if (have_pow2) throw SpecParseError(line_no, p + 1, "duplicate 'pow2'");
      have_pow2 = true;
      std::string body(rest);
      std::size_t a = body.find_first_not_of(" \t");
      std::size_t b = body.find_last_not_of(" \t");
      if (a == std::string::npos) throw SpecParseError(line_no, rest_col, "expected an integer");
      body = body.substr(a, b - a + 1);
      std::size_t used = 0;
      try {
        spec.scalar_pow2 = std::stoll(body, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != body.size()) throw SpecParseError(line_no, rest_col + a, "expected an integer");
    } else {
      throw SpecParseError(line_no, p + 1, "unknown statement '" + std::string(keyword) + "'");
    }
  }
  if (!have_vars) throw SpecParseError(line_no == 0 ? 1 : line_no, 1, "missing 'vars' declaration");
  if (spec.numerator.empty() && spec.denominator.empty())
    throw SpecParseError(line_no, 1, "no 'num' or 'den' factorials");
  return spec;
}

inline std::string to_text(const FactorialRatioSpec& spec) {
  std::ostringstream os;
  os << "vars";
  for (const auto& v : spec.variables) os << ' ' << v;
  os << '\n';
  for (const auto& f : spec.region) os << "assume " << f.to_string() << " >= 0\n";
  for (const auto& f : spec.numerator) os << "num " << f.to_string() << '\n';
  for (const auto& f : spec.denominator) os << "den " << f.to_string() << '\n';
  if (spec.scalar_pow2 != 0) os << "pow2 " << spec.scalar_pow2 << '\n';
  return os.str();
}

}  // namespace ivpoly::floorcert
