#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivpoly {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Builds num/den in lowest terms with a positive denominator.
inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const BigRational& r) { return r.get_den() == 1; }

// "p/q" in lowest terms, or plain decimal for integers.
inline std::string to_string(const BigRational& r) {
  if (is_integer(r)) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline BigRational abs(const BigRational& r) { return r < 0 ? BigRational(-r) : r; }

inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

// Largest e with p^e | z, z != 0.
inline long valuation(const BigInt& z, unsigned long p) {
  if (z == 0) throw std::domain_error("valuation of zero");
  BigInt t = z;
  long e = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++e;
  }
  return e;
}

inline long valuation(const BigRational& r, unsigned long p) {
  return valuation(BigInt(r.get_num()), p) - valuation(BigInt(r.get_den()), p);
}

// True when the reduced denominator of r is a power of two.
inline bool in_z_half(const BigRational& r) {
  const BigInt& den = r.get_den();
  return mpz_scan1(den.get_mpz_t(), 0) + 1 == mpz_sizeinbase(den.get_mpz_t(), 2);
}

namespace detail {

inline constexpr int kPascalRows = 200;

inline const std::vector<std::vector<BigInt>>& pascal_rows() {
  static const std::vector<std::vector<BigInt>> rows = [] {
    std::vector<std::vector<BigInt>> t(kPascalRows + 1);
    for (int x = 0; x <= kPascalRows; ++x) {
      t[x].resize(x + 1);
      t[x][0] = 1;
      t[x][x] = 1;
      for (int j = 1; j < x; ++j) t[x][j] = t[x - 1][j - 1] + t[x - 1][j];
    }
    return t;
  }();
  return rows;
}

}  // namespace detail

// Binomial coefficient with the polynomial convention: zero for j < 0,
// otherwise x(x-1)...(x-j+1)/j! evaluated at the integer x.
// The j < 0 test comes first; negative pairs such as (-1,-1) give 0.
inline BigInt binom(std::int64_t x, std::int64_t j) {
  if (j < 0) return 0;
  if (x >= 0) {
    if (j > x) return 0;
    if (x <= detail::kPascalRows) return detail::pascal_rows()[x][j];
    if (j > x - j) j = x - j;
  }
  BigInt r = 1;
  for (std::int64_t t = 1; t <= j; ++t) {
    r *= static_cast<long>(x - t + 1);
    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(t));
  }
  return r;
}

inline BigInt factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number " + std::to_string(n));
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline BigInt catalan(std::int64_t i) {
  if (i < 0) throw std::invalid_argument("catalan of negative index " + std::to_string(i));
  BigInt c = binom(2 * i, i);
  mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(i + 1));
  return c;
}

// ord_p(n!) = sum_{e>=1} floor(n / p^e).
inline std::int64_t legendre_valuation(std::int64_t n, std::int64_t p) {
  if (n < 0) throw std::invalid_argument("legendre_valuation: negative n");
  if (p < 2) throw std::invalid_argument("legendre_valuation: p must be >= 2");
  std::int64_t total = 0;
  for (std::int64_t t = n / p; t > 0; t /= p) total += t;
  return total;
}

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace ivpoly
