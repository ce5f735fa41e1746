#pragma once

#include "ivpoly/exact.hpp"
#include "ivpoly/parallel.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivpoly {

// Summand of P_m(x):
//   binom(x+j,j) binom(x-1,j) binom(j,i) binom(m,i) binom(i,m-j)
//     * 3 / ((2i-1)(2j+1)(2m-2i-1)).
// The three denominator factors are odd, so never zero.
inline BigRational pterm(std::int64_t m, std::int64_t x, std::int64_t i, std::int64_t j) {
  BigInt num = binom(j, i);
  if (num == 0) return 0;
  num *= binom(m, i);
  if (num == 0) return 0;
  num *= binom(i, m - j);
  if (num == 0) return 0;
  num *= binom(x + j, j);
  num *= binom(x - 1, j);
  if (num == 0) return 0;
  BigInt den = BigInt(static_cast<long>(2 * i - 1)) * static_cast<long>(2 * j + 1) *
               static_cast<long>(2 * m - 2 * i - 1);
  return make_rational(3 * num, den);
}

// P_m(x) summed over its finite support 0 <= i <= m, m-i <= j <= m.
inline BigRational eval_P(std::int64_t m, std::int64_t x) {
  if (m < 0) throw std::invalid_argument("eval_P: m must be >= 0");
  BigRational sum = 0;
  for (std::int64_t i = 0; i <= m; ++i)
    for (std::int64_t j = std::max<std::int64_t>(0, m - i); j <= m; ++j) sum += pterm(m, x, i, j);
  return sum;
}

// [m >= 0] * 3 (-1)^(k+j) binom(2k,k) binom(j,i) binom(m,i) binom(i,m-j)
//   / (2 (2i-1)(2j+1)(2m-2i-1))
inline BigRational term(std::int64_t m, std::int64_t k, std::int64_t i, std::int64_t j) {
  if (m < 0) return 0;
  BigInt num = binom(j, i);
  if (num == 0) return 0;
  num *= binom(m, i);
  if (num == 0) return 0;
  num *= binom(i, m - j);
  if (num == 0) return 0;
  num *= binom(2 * k, k);
  if (num == 0) return 0;
  num *= 3;
  if ((k + j) % 2 != 0) num = -num;
  BigInt den = BigInt(2) * static_cast<long>(2 * i - 1) * static_cast<long>(2 * j + 1) *
               static_cast<long>(2 * m - 2 * i - 1);
  return make_rational(num, den);
}

inline BigRational iterm(std::int64_t m, std::int64_t k, std::int64_t i) {
  return BigRational(2 * (2 * k + 1)) * term(m, k, i, k);
}

inline BigRational iterm_sum(std::int64_t m, std::int64_t k) {
  BigRational sum = 0;
  for (std::int64_t i = 0; i <= m; ++i) sum += iterm(m, k, i);
  return sum;
}

// Coefficient of B_k in P_m: sum over i in [0,m], j in [k,m] of term(m,k,i,j).
inline BigRational d_direct(std::int64_t m, std::int64_t k) {
  if (m < 0 || k < 0 || k > m) return 0;
  BigRational sum = 0;
  for (std::int64_t i = 0; i <= m; ++i)
    for (std::int64_t j = k; j <= m; ++j) sum += term(m, k, i, j);
  return sum;
}

// (d(2k-2,k), d(2k-3,k)) from the pterm closed forms, k >= 3. At x = k only
// j = k-1 survives, with i in {m-j, ..., j}.
inline std::pair<BigRational, BigRational> d_boundary(std::int64_t k) {
  if (k < 3) throw std::invalid_argument("d_boundary: k must be >= 3");
  BigRational even = pterm(2 * k - 2, k, k - 1, k - 1);
  BigRational odd = pterm(2 * k - 3, k, k - 2, k - 1) + pterm(2 * k - 3, k, k - 1, k - 1);
  return {even, odd};
}

// rel1(m,k) = lower * d(m,k-2) + middle * d(m,k-1) + upper * d(m,k).
struct Rel1Coefficients {
  BigInt lower;
  BigInt middle;
  BigInt upper;
};

inline Rel1Coefficients rel1_coefficients(std::int64_t m_, std::int64_t k_) {
  const BigInt m = static_cast<long>(m_);
  const BigInt k = static_cast<long>(k_);
  Rel1Coefficients c;
  c.lower = -32 * (3 - 2 * k) * (3 - 2 * k) * (-k + m + 1) * (-k + m + 2);
  c.middle = 4 * (-k + m + 1) *
             (2 * k * m * m - 2 * (k - 1) * (8 * k - 9) * m + (2 * k - 3) * (8 * (k - 2) * k + 9));
  c.upper = k * (-2 * k + m + 2) * (-2 * k + m + 3) * (-2 * k + 2 * m + 1);
  return c;
}

class RecursionInapplicable : public std::runtime_error {
 public:
  RecursionInapplicable(std::int64_t m, std::int64_t k)
      : std::runtime_error("recursion inapplicable at d(" + std::to_string(m) + "," +
                           std::to_string(k) + ")"),
        m_(m),
        k_(k) {}
  std::int64_t m() const { return m_; }
  std::int64_t k() const { return k_; }

 private:
  std::int64_t m_, k_;
};

// d(m,k) from rel1(m,k) = 0 solved upward in k for d(m,k), with pivot
// rel1_coefficients(m,k).upper. Seeds: d = 0 for k > m, d = 0 for
// m > 2k-2 (m >= 2), and the d_boundary closed forms on m = 2k-2, 2k-3.
inline BigRational d_via_recursion(std::int64_t m, std::int64_t k) {
  if (m < 0 || k < 0 || k > m) return 0;
  std::vector<BigRational> row(static_cast<std::size_t>(k + 1));
  for (std::int64_t t = 0; t <= k; ++t) {
    BigRational& out = row[t];
    if (m >= 2 && m > 2 * t - 2) {
      out = 0;
    } else if (t >= 3 && m == 2 * t - 2) {
      out = d_boundary(t).first;
    } else if (t >= 3 && m == 2 * t - 3) {
      out = d_boundary(t).second;
    } else if (m < 2 * t - 3) {
      const Rel1Coefficients c = rel1_coefficients(m, t);
      if (c.upper == 0) throw RecursionInapplicable(m, t);
      BigRational rhs = 0;
      if (t >= 1) rhs += c.middle * row[t - 1];
      if (t >= 2) rhs += c.lower * row[t - 2];
      out = -rhs / c.upper;
    } else {
      throw RecursionInapplicable(m, t);
    }
  }
  return row[k];
}

// Square table of d(m,k) for 0 <= m,k <= max_m. Lookups with m < 0, k < 0 or
// k > m return 0, matching the definition of d.
class DMatrix {
 public:
  DMatrix() = default;
  explicit DMatrix(std::int64_t max_m)
      : max_m_(max_m), entries_(static_cast<std::size_t>((max_m + 1) * (max_m + 1))) {}

  std::int64_t max_m() const { return max_m_; }

  BigRational& at(std::int64_t m, std::int64_t k) {
    check(m, k);
    return entries_[static_cast<std::size_t>(m * (max_m_ + 1) + k)];
  }
  const BigRational& at(std::int64_t m, std::int64_t k) const {
    check(m, k);
    return entries_[static_cast<std::size_t>(m * (max_m_ + 1) + k)];
  }

  BigRational operator()(std::int64_t m, std::int64_t k) const {
    if (m < 0 || k < 0 || k > m) return 0;
    if (m > max_m_) throw std::out_of_range("DMatrix: m=" + std::to_string(m) + " beyond table");
    return at(m, k);
  }

  std::vector<BigRational> row(std::int64_t m) const {
    std::vector<BigRational> r;
    for (std::int64_t k = 0; k <= max_m_; ++k) r.push_back(at(m, k));
    return r;
  }

  friend bool operator==(const DMatrix&, const DMatrix&) = default;

 private:
  void check(std::int64_t m, std::int64_t k) const {
    if (m < 0 || k < 0 || m > max_m_ || k > max_m_)
      throw std::out_of_range("DMatrix index out of range");
  }

  std::int64_t max_m_ = -1;
  std::vector<BigRational> entries_;
};

inline DMatrix d_matrix(std::int64_t max_m, unsigned jobs = 1) {
  if (max_m < 0) throw std::invalid_argument("d_matrix: max_m must be >= 0");
  DMatrix d(max_m);
  parallel_for(static_cast<std::size_t>(max_m + 1), jobs, [&](std::size_t row) {
    const auto m = static_cast<std::int64_t>(row);
    for (std::int64_t k = 0; k <= m; ++k) d.at(m, k) = d_direct(m, k);
  });
  return d;
}

}  // namespace ivpoly
