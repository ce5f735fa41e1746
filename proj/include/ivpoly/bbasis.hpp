#pragma once

#include "ivpoly/exact.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ivpoly {

// Values f(0), ..., f(m) of an even polynomial of degree 2m.
struct EvenPolyValues {
  std::int64_t m = 0;
  std::vector<BigRational> values;
};

// Coefficients of an even polynomial in the basis B_0, ..., B_m.
struct BCoeffs {
  std::int64_t m = 0;
  std::vector<BigRational> coeffs;

  friend bool operator==(const BCoeffs&, const BCoeffs&) = default;
};

// B_k(x) = binom(x+k, 2k) + binom(-x+k, 2k).
inline BigInt eval_B(std::int64_t k, std::int64_t x) {
  if (k < 0) throw std::invalid_argument("eval_B: negative k");
  return binom(x + k, 2 * k) + binom(-x + k, 2 * k);
}

// Forward substitution against the triangular matrix (B_k(t))_{k,t <= m}.
// B_k(t) = 0 for t < k, B_k(k) = 1 for k >= 1 and B_0(0) = 2.
inline BCoeffs decompose(const EvenPolyValues& f) {
  if (f.m < 0 || f.values.size() != static_cast<std::size_t>(f.m + 1))
    throw std::invalid_argument("decompose: expected m+1 values");
  BCoeffs out{f.m, std::vector<BigRational>(f.values.size())};
  out.coeffs[0] = f.values[0] / 2;
  for (std::int64_t k = 1; k <= f.m; ++k) {
    BigRational c = f.values[k];
    for (std::int64_t j = 0; j < k; ++j) {
      if (out.coeffs[j] != 0) c -= out.coeffs[j] * eval_B(j, k);
    }
    out.coeffs[k] = c;
  }
  return out;
}

inline BigRational recompose(const BCoeffs& c, std::int64_t x) {
  BigRational sum = 0;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    if (c.coeffs[k] != 0) sum += c.coeffs[k] * eval_B(static_cast<std::int64_t>(k), x);
  }
  return sum;
}

}  // namespace ivpoly
