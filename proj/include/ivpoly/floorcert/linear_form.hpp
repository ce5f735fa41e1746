#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ivpoly::floorcert {

// Name of the modulus parameter: every floor divides by q = 2n + 1.
inline constexpr std::string_view kModulusParameter = "n";

using Assignment = std::map<std::string, std::int64_t, std::less<>>;

// Integer linear form sum_v c_v * v + constant. Zero coefficients are never
// stored, so structural equality is equality of forms.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::int64_t constant) : constant_(constant) {}

  static LinearForm variable(std::string_view name, std::int64_t coeff = 1) {
    LinearForm f;
    f.add(name, coeff);
    return f;
  }

  const std::map<std::string, std::int64_t, std::less<>>& coefficients() const { return coeffs_; }
  std::int64_t constant() const { return constant_; }

  std::int64_t coefficient(std::string_view name) const {
    auto it = coeffs_.find(name);
    return it == coeffs_.end() ? 0 : it->second;
  }

  bool depends_on(std::string_view name) const { return coeffs_.find(name) != coeffs_.end(); }
  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  LinearForm& add(std::string_view name, std::int64_t coeff) {
    if (coeff == 0) return *this;
    auto it = coeffs_.find(name);
    if (it == coeffs_.end()) {
      coeffs_.emplace(std::string(name), coeff);
    } else if ((it->second += coeff) == 0) {
      coeffs_.erase(it);
    }
    return *this;
  }

  LinearForm& add_constant(std::int64_t c) {
    constant_ += c;
    return *this;
  }

  LinearForm& operator+=(const LinearForm& o) {
    for (const auto& [v, c] : o.coeffs_) add(v, c);
    constant_ += o.constant_;
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) { return *this += o * -1; }
  LinearForm& operator*=(std::int64_t s) {
    if (s == 0) return *this = LinearForm{};
    for (auto& [v, c] : coeffs_) c *= s;
    constant_ *= s;
    return *this;
  }

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, std::int64_t s) { return a *= s; }
  friend LinearForm operator*(std::int64_t s, LinearForm a) { return a *= s; }

  // Replaces `name` by `value` everywhere.
  LinearForm substitute(std::string_view name, const LinearForm& value) const {
    const std::int64_t c = coefficient(name);
    if (c == 0) return *this;
    LinearForm out = *this;
    out.coeffs_.erase(out.coeffs_.find(name));
    out += value * c;
    return out;
  }

  std::int64_t evaluate(const Assignment& a) const {
    std::int64_t v = constant_;
    for (const auto& [name, c] : coeffs_) {
      auto it = a.find(name);
      if (it == a.end()) throw std::out_of_range("no value for variable '" + name + "'");
      v += c * it->second;
    }
    return v;
  }

  // e.g. "-2i + 2m - 2"; "0" for the zero form.
  std::string to_string() const {
    std::string s;
    auto emit = [&](std::int64_t c, std::string_view name) {
      const bool neg = c < 0;
      const std::int64_t mag = neg ? -c : c;
      if (s.empty()) {
        if (neg) s += '-';
      } else {
        s += neg ? " - " : " + ";
      }
      if (mag != 1 || name.empty()) s += std::to_string(mag);
      s += name;
    };
    for (const auto& [name, c] : coeffs_) emit(c, name);
    if (constant_ != 0 || s.empty()) {
      if (s.empty())
        s = std::to_string(constant_);
      else
        emit(constant_, "");
    }
    return s;
  }

  friend bool operator==(const LinearForm&, const LinearForm&) = default;
  friend auto operator<=>(const LinearForm& a, const LinearForm& b) {
    if (auto c = a.coeffs_ <=> b.coeffs_; c != 0) return c;
    return a.constant_ <=> b.constant_;
  }

 private:
  std::map<std::string, std::int64_t, std::less<>> coeffs_;
  std::int64_t constant_ = 0;
};

class FormSyntaxError : public std::runtime_error {
 public:
  FormSyntaxError(std::size_t column, const std::string& what)
      : std::runtime_error(what), column_(column) {}
  // 1-based column within the parsed text.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct VariableUse {
  std::string name;
  std::size_t column;
};

struct ParsedForm {
  LinearForm form;
  std::vector<VariableUse> uses;
};

// Grammar: [sign] term { sign term }, term = integer [ '*' ] [ident] | ident.
// Whitespace between tokens is ignored.
inline ParsedForm parse_linear_form(std::string_view text) {
  ParsedForm out;
  std::size_t pos = 0;
  auto col = [&](std::size_t p) { return p + 1; };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

  skip_ws();
  if (pos >= text.size()) throw FormSyntaxError(col(pos), "expected a linear form");
  bool first = true;
  while (true) {
    skip_ws();
    std::int64_t sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw FormSyntaxError(col(pos), "expected '+' or '-'");
    }
    if (pos >= text.size()) throw FormSyntaxError(col(pos), "expected a term");

    std::int64_t coeff = 1;
    bool has_number = false;
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      const std::size_t start = pos;
      std::int64_t v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        const int digit = text[pos] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - digit) / 10)
          throw FormSyntaxError(col(start), "integer too large");
        v = v * 10 + digit;
        ++pos;
      }
      if (pos < text.size() && (text[pos] == '.' || text[pos] == '/'))
        throw FormSyntaxError(col(start), "non-integer coefficient");
      coeff = v;
      has_number = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
        if (pos >= text.size() || !is_ident_start(text[pos]))
          throw FormSyntaxError(col(pos), "expected a variable after '*'");
      }
    }
    if (pos < text.size() && is_ident_start(text[pos])) {
      const std::size_t start = pos;
      while (pos < text.size() && is_ident_char(text[pos])) ++pos;
      std::string name(text.substr(start, pos - start));
      out.form.add(name, sign * coeff);
      out.uses.push_back({std::move(name), col(start)});
    } else if (has_number) {
      out.form.add_constant(sign * coeff);
    } else {
      throw FormSyntaxError(col(pos), std::string("unexpected character '") + text[pos] + "'");
    }
    first = false;
    skip_ws();
    if (pos >= text.size()) break;
  }
  return out;
}

}  // namespace ivpoly::floorcert
