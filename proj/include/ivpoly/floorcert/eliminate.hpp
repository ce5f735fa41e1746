#pragma once

#include "ivpoly/exact.hpp"
#include "ivpoly/floorcert/floor_sum.hpp"
#include "ivpoly/floorcert/linear_form.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly::floorcert {

class NotEliminable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::int64_t, 3> kSampleOffsets = {-1, 0, 1};

// Where the floors of a FloorSum jump as `var` runs over one period.
struct JumpSet {
  std::string var;
  std::vector<LinearForm> points;   // jump points, first-seen order, no repeats
  std::vector<LinearForm> samples;  // points + offsets, first-seen order, no repeats
};

namespace detail {

// floor(x / d) for d in {1, 2} applied to a form whose non-constant
// coefficients are divisible by d.
inline LinearForm floor_halve(const LinearForm& x, std::int64_t d, std::string_view var,
                              const LinearForm& source) {
  LinearForm out(floor_div(x.constant(), d));
  for (const auto& [name, c] : x.coefficients()) {
    if (c % d != 0)
      throw NotEliminable("cannot eliminate '" + std::string(var) + "' from [" + source.to_string() +
                          "]: jump point is not a linear form (odd coefficient on '" + name + "')");
    out.add(name, c / d);
  }
  return out;
}

inline void push_unique(std::vector<LinearForm>& v, const LinearForm& f) {
  if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
}

}  // namespace detail

// For a term floor((c*var + R)/q) the real jump points solve c*var + R = t*q.
// For |c| = 1 that is var = -R/c (one class mod q). For |c| = 2 there are two
// classes, t = 0 and t = 1, and var = floor((t*q - R)/c), using q = 2n + 1.
// Any floor's integer jump lies within one of floor(x)-1, floor(x), floor(x)+1,
// hence the sampling offsets {-1, 0, +1}.
inline JumpSet jump_candidates(const FloorSum& fs, std::string_view var) {
  JumpSet js;
  js.var = std::string(var);
  const LinearForm q_form = LinearForm::variable(kModulusParameter, 2) + LinearForm(1);
  for (const FloorTerm& t : fs.terms()) {
    const std::int64_t c = t.form.coefficient(var);
    if (c == 0) continue;
    LinearForm rest = t.form;
    rest.add(var, -c);
    if (c == 1 || c == -1) {
      detail::push_unique(js.points, rest * -c);
    } else if (c == 2 || c == -2) {
      for (std::int64_t k = 0; k < 2; ++k) {
        LinearForm x = q_form * k - rest;
        if (c < 0) x *= -1;
        detail::push_unique(js.points, detail::floor_halve(x, 2, var, t.form));
      }
    } else {
      throw NotEliminable("cannot eliminate '" + std::string(var) + "' from [" + t.form.to_string() +
                          "]: coefficient " + std::to_string(c) + " is not in {-2,-1,1,2}");
    }
  }
  for (const LinearForm& p : js.points)
    for (std::int64_t off : kSampleOffsets) detail::push_unique(js.samples, p + LinearForm(off));
  return js;
}

inline std::vector<FloorSum> eliminate_with(const FloorSum& fs, const JumpSet& js) {
  if (js.samples.empty()) return {fs};
  std::vector<FloorSum> out;
  out.reserve(js.samples.size());
  for (const LinearForm& s : js.samples) out.push_back(fs.substitute(js.var, s));
  return out;
}

// One FloorSum per sampled value of `var`. fs is constant in `var` between
// consecutive jumps, so the cases together attain every value fs attains
// over a period. A sum that does not mention `var` comes back unchanged.
inline std::vector<FloorSum> eliminate(const FloorSum& fs, std::string_view var) {
  return eliminate_with(fs, jump_candidates(fs, var));
}

struct Stabilization {
  std::int64_t bound = 1;
  std::int64_t stable_value = 0;

  friend bool operator==(const Stabilization&, const Stabilization&) = default;
};

// Least N >= 1 such that floor((a*n + b)/(2n + 1)) is constant for n >= N,
// together with that constant.
//   a = 2s:     (a n + b)/(2n+1) = s + (b - s)/(2n+1)
//   a = 2s + 1: (a n + b)/(2n+1) = s + (n + b - s)/(2n+1)
inline Stabilization stabilization_bound(std::int64_t a, std::int64_t b) {
  Stabilization st;
  if (a % 2 == 0) {
    const std::int64_t s = a / 2;
    const std::int64_t r = b - s;
    if (r >= 0) {
      st = {ceil_div(r, 2), s};  // 0 <= r < 2n + 1
    } else {
      st = {ceil_div(-r - 1, 2), s - 1};  // -(2n + 1) <= r < 0
    }
  } else {
    const std::int64_t s = floor_div(a - 1, 2);
    const std::int64_t r = b - s;
    st = {r >= 0 ? r : -r, s};  // 0 <= n + r < 2n + 1
  }
  st.bound = std::max<std::int64_t>(st.bound, 1);
  for (std::int64_t n = st.bound; n <= st.bound + 1; ++n) {
    if (floor_div(a * n + b, 2 * n + 1) != st.stable_value)
      throw std::logic_error("stabilization_bound: self-check failed");
  }
  return st;
}

inline Stabilization stabilization_bound(const LinearForm& form) {
  for (const auto& [v, c] : form.coefficients())
    if (v != kModulusParameter)
      throw std::invalid_argument("stabilization_bound: form [" + form.to_string() +
                                  "] still depends on '" + v + "'");
  return stabilization_bound(form.coefficient(kModulusParameter), form.constant());
}

}  // namespace ivpoly::floorcert
