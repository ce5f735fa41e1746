#pragma once

#include "ivpoly/exact.hpp"
#include "ivpoly/floorcert/linear_form.hpp"
#include "ivpoly/floorcert/spec.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly::floorcert {

// weight * floor(form / q)
struct FloorTerm {
  std::int64_t weight = 0;
  LinearForm form;

  friend bool operator==(const FloorTerm&, const FloorTerm&) = default;
  friend auto operator<=>(const FloorTerm&, const FloorTerm&) = default;
};

// Signed sum of floors sum_t weight_t * floor(form_t / q), q = 2n + 1.
// Canonical: terms sorted by form, weights nonzero, no zero forms, each form
// listed once.
class FloorSum {
 public:
  FloorSum() = default;

  static FloorSum from_terms(const std::vector<FloorTerm>& terms) {
    std::map<LinearForm, std::int64_t> merged;
    for (const FloorTerm& t : terms) {
      if (t.form.is_zero()) continue;
      merged[t.form] += t.weight;
    }
    FloorSum fs;
    for (auto& [form, w] : merged)
      if (w != 0) fs.terms_.push_back({w, form});
    return fs;
  }

  const std::vector<FloorTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Free variables other than the modulus parameter, sorted.
  std::vector<std::string> variables() const {
    std::set<std::string> names;
    for (const FloorTerm& t : terms_)
      for (const auto& [v, c] : t.form.coefficients())
        if (v != kModulusParameter) names.insert(v);
    return {names.begin(), names.end()};
  }

  bool depends_on(std::string_view var) const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [&](const FloorTerm& t) { return t.form.depends_on(var); });
  }

  FloorSum substitute(std::string_view var, const LinearForm& value) const {
    std::vector<FloorTerm> out;
    out.reserve(terms_.size());
    for (const FloorTerm& t : terms_) out.push_back({t.weight, t.form.substitute(var, value)});
    return from_terms(out);
  }

  // Text form "-2 [m - i] + [2m]", where [L] stands for floor(L/q).
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const FloorTerm& t : terms_) {
      const std::int64_t mag = t.weight < 0 ? -t.weight : t.weight;
      if (s.empty())
        s += t.weight < 0 ? "-" : "";
      else
        s += t.weight < 0 ? " - " : " + ";
      if (mag != 1) s += std::to_string(mag) + " ";
      s += "[" + t.form.to_string() + "]";
    }
    return s;
  }

  friend bool operator==(const FloorSum&, const FloorSum&) = default;
  friend auto operator<=>(const FloorSum&, const FloorSum&) = default;

 private:
  std::vector<FloorTerm> terms_;
};

inline FloorSum parse_floor_sum(std::string_view text) {
  std::vector<FloorTerm> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) {
    throw FormSyntaxError(pos + 1, "floor sum: " + what);
  };
  skip_ws();
  if (text.substr(pos) == "0") return {};
  bool first = true;
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    std::int64_t sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    std::int64_t weight = 1;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      weight = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        weight = weight * 10 + (text[pos++] - '0');
      skip_ws();
    }
    if (pos >= text.size() || text[pos] != '[') fail("expected '['");
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos) fail("missing ']'");
    terms.push_back({sign * weight, parse_linear_form(text.substr(pos + 1, close - pos - 1)).form});
    pos = close + 1;
    first = false;
  }
  if (terms.empty()) fail("empty floor sum");
  return FloorSum::from_terms(terms);
}

// Numerator factorials contribute +floor(L/q), denominator ones -floor(L/q)
// (Legendre: ord_p(L!) = sum_e floor(L/p^e)).
inline FloorSum build_floor_sum(const FactorialRatioSpec& spec) {
  std::vector<FloorTerm> terms;
  for (const auto& f : spec.numerator) terms.push_back({+1, f});
  for (const auto& f : spec.denominator) terms.push_back({-1, f});
  return FloorSum::from_terms(terms);
}

inline void check_modulus(std::int64_t q) {
  if (q < 3 || q % 2 == 0)
    throw std::invalid_argument("modulus must be odd and >= 3, got " + std::to_string(q));
}

// Exact value at `assignment` with q = 2n + 1; `n` is set from q.
inline std::int64_t evaluate_floor_sum(const FloorSum& fs, const Assignment& assignment, std::int64_t q) {
  check_modulus(q);
  Assignment a = assignment;
  a.insert_or_assign(std::string(kModulusParameter), (q - 1) / 2);
  std::int64_t total = 0;
  for (const FloorTerm& t : fs.terms()) total += t.weight * floor_div(t.form.evaluate(a), q);
  return total;
}

struct Witness {
  std::int64_t q = 0;
  Assignment point;
  std::int64_t value = 0;
};

struct SmallQRow {
  std::int64_t q = 0;
  std::size_t points = 0;
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct SmallQReport {
  std::int64_t q_max = 0;
  std::vector<SmallQRow> rows;
  std::int64_t min = std::numeric_limits<std::int64_t>::max();
  std::optional<Witness> witness;  // first negative value found

  bool ok() const { return !witness.has_value(); }
};

// Calls fn(point) for every point of [0, q)^vars.
template <typename Fn>
void for_each_in_period(const std::vector<std::string>& vars, std::int64_t q, Fn&& fn) {
  Assignment a;
  for (const auto& v : vars) a[v] = 0;
  while (true) {
    fn(static_cast<const Assignment&>(a));
    std::size_t idx = vars.size();
    while (idx > 0) {
      --idx;
      auto& slot = a[vars[idx]];
      if (++slot < q) break;
      slot = 0;
      if (idx == 0) return;
    }
    if (vars.empty()) return;
  }
}

// Exhaustive evaluation over one full period for every odd q in [3, q_max).
inline SmallQReport brute_force_small_q(const FloorSum& fs, std::int64_t q_max) {
  if (q_max < 3) throw std::invalid_argument("brute_force_small_q: q_max must be >= 3");
  SmallQReport report;
  report.q_max = q_max;
  const auto vars = fs.variables();
  for (std::int64_t q = 3; q < q_max; q += 2) {
    SmallQRow row{q, 0, std::numeric_limits<std::int64_t>::max(),
                  std::numeric_limits<std::int64_t>::min()};
    for_each_in_period(vars, q, [&](const Assignment& a) {
      const std::int64_t v = evaluate_floor_sum(fs, a, q);
      ++row.points;
      row.min = std::min(row.min, v);
      row.max = std::max(row.max, v);
      if (v < 0 && !report.witness) report.witness = Witness{q, a, v};
    });
    report.min = std::min(report.min, row.min);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ivpoly::floorcert
