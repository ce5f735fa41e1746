#pragma once

#include "ivpoly/coefficients.hpp"
#include "ivpoly/exact.hpp"
#include "ivpoly/interval.hpp"
#include "ivpoly/parallel.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly {

// Any callable (m, k) -> BigRational standing in for d(m,k).
template <typename D>
concept DSource = requires(const D& d, std::int64_t m, std::int64_t k) {
  { d(m, k) } -> std::convertible_to<BigRational>;
};

struct DirectD {
  BigRational operator()(std::int64_t m, std::int64_t k) const { return d_direct(m, k); }
};

template <DSource D>
BigRational rel1(const D& d, std::int64_t m, std::int64_t k) {
  const Rel1Coefficients c = rel1_coefficients(m, k);
  BigRational r = 0;
  if (c.lower != 0) r += c.lower * BigRational(d(m, k - 2));
  if (c.middle != 0) r += c.middle * BigRational(d(m, k - 1));
  if (c.upper != 0) r += c.upper * BigRational(d(m, k));
  return r;
}

template <DSource D>
BigRational rel2(const D& d, std::int64_t m_, std::int64_t k_) {
  const BigInt m = static_cast<long>(m_);
  const BigInt k = static_cast<long>(k_);
  const BigInt a = -4 * ((m - 1) * (m - 1) - 1);
  const BigInt b = -4 * (2 * (k - 1) + m + 1) * (-k + m + 1);
  const BigInt c = k * (2 * k - m - 2);
  BigRational r = 0;
  if (a != 0) r += a * BigRational(d(m_ - 1, k_ - 1));
  if (b != 0) r += b * BigRational(d(m_, k_ - 1));
  if (c != 0) r += c * BigRational(d(m_, k_));
  return r;
}

inline BigRational rel1(std::int64_t m, std::int64_t k) { return rel1(DirectD{}, m, k); }
inline BigRational rel2(std::int64_t m, std::int64_t k) { return rel2(DirectD{}, m, k); }

// Zeilberger certificate
//   g = 3 * 2^(2k+3) m (m+1-2i) [Gamma(k+3/2)/Gamma(1/2)]
//       * binom(k+1,i-1) binom(m-1,k+1) binom(k+1,m-i) / (k+1)!
// with Gamma(k+3/2)/Gamma(1/2) = prod_{t=0..k} (2t+1)/2.
inline BigRational certificate_g(std::int64_t m, std::int64_t k, std::int64_t i) {
  if (k < 0) throw std::invalid_argument("certificate_g: k must be >= 0");
  BigInt num = binom(k + 1, i - 1);
  if (num == 0) return 0;
  num *= binom(k + 1, m - i);
  if (num == 0) return 0;
  num *= binom(m - 1, k + 1);
  if (num == 0) return 0;
  num *= BigInt(3) * static_cast<long>(m) * static_cast<long>(m + 1 - 2 * i);
  num *= pow2(static_cast<unsigned long>(2 * k + 3));
  BigInt odd_double_factorial = 1;
  for (std::int64_t t = 0; t <= k; ++t) odd_double_factorial *= static_cast<long>(2 * t + 1);
  num *= odd_double_factorial;
  BigInt den = pow2(static_cast<unsigned long>(k + 1)) * factorial(k + 1);
  return make_rational(num, den);
}

inline BigRational frac1(std::int64_t m, std::int64_t k, std::int64_t i) {
  BigInt num = binom(k - 1, i);
  if (num == 0) return 0;
  num *= binom(m, i);
  if (num == 0) return 0;
  num *= binom(i, m + 1 - k);
  if (num == 0) return 0;
  num *= binom(2 * (k - 1), k - 1);
  num *= BigInt(3) * static_cast<long>(m - 1) * static_cast<long>(m) *
         static_cast<long>(2 * m - 2 * k + 1);
  BigInt den = BigInt(static_cast<long>(2 * i - 1)) * static_cast<long>(2 * m - 2 * i - 1);
  return make_rational(num, den);
}

inline BigRational frac2(std::int64_t m, std::int64_t k, std::int64_t i) {
  BigInt v = binom(k - 1, i);
  if (v == 0) return 0;
  v *= binom(m, i);
  if (v == 0) return 0;
  v *= binom(i, m + 1 - k);
  if (v == 0) return 0;
  v *= binom(2 * (k - 1), k - 1);
  v *= BigInt(6) * static_cast<long>(k - m - 1);
  return v;
}

enum class IdentityId {
  CertG,
  Rel1Recursion,
  MixedRel1Rel2,
  Rel2Recursion,
  SigmaIRewrite,
  FracSplit,
  Rel2Corner,
};

inline constexpr std::array<IdentityId, 7> kAllIdentities = {
    IdentityId::CertG,         IdentityId::Rel1Recursion, IdentityId::MixedRel1Rel2,
    IdentityId::Rel2Recursion, IdentityId::SigmaIRewrite, IdentityId::FracSplit,
    IdentityId::Rel2Corner,
};

inline std::string_view name_of(IdentityId id) {
  switch (id) {
    case IdentityId::CertG: return "cert-g";
    case IdentityId::Rel1Recursion: return "rel1-recursion";
    case IdentityId::MixedRel1Rel2: return "mixed-rel1-rel2";
    case IdentityId::Rel2Recursion: return "rel2-recursion";
    case IdentityId::SigmaIRewrite: return "sigma-i-rewrite";
    case IdentityId::FracSplit: return "frac-split";
    case IdentityId::Rel2Corner: return "rel2-corner";
  }
  return "?";
}

inline std::optional<IdentityId> identity_from_name(std::string_view name) {
  for (IdentityId id : kAllIdentities)
    if (name_of(id) == name) return id;
  return std::nullopt;
}

inline std::vector<std::string> variables_of(IdentityId id) {
  switch (id) {
    case IdentityId::CertG:
    case IdentityId::FracSplit: return {"m", "k", "i"};
    case IdentityId::Rel2Corner: return {"k"};
    default: return {"m", "k"};
  }
}

inline std::size_t arity(IdentityId id) { return variables_of(id).size(); }

namespace detail {

inline BigInt big(std::int64_t v) { return static_cast<long>(v); }

inline BigInt cert_g_iterm_coefficient(int shift, std::int64_t m_, std::int64_t k_) {
  const BigInt m = big(m_), k = big(k_);
  switch (shift) {
    case 0: return -32 * (1 + 2 * k) * (3 + 2 * k) * (k - m) * (1 + k - m);
    case 1:
      return -4 * (1 + k - m) *
             (57 + 110 * k + 72 * k * k + 16 * k * k * k - 34 * m - 46 * k * m - 16 * k * k * m +
              4 * m * m + 2 * k * m * m);
    default: return -(2 + k) * (5 + 2 * k - 2 * m) * (3 + 2 * k - m) * (4 + 2 * k - m);
  }
}

template <DSource D>
BigRational residual_with(IdentityId id, std::span<const std::int64_t> p, const D& d) {
  if (p.size() != arity(id))
    throw std::invalid_argument("identity " + std::string(name_of(id)) + " expects " +
                                std::to_string(arity(id)) + " coordinates, got " +
                                std::to_string(p.size()));
  switch (id) {
    case IdentityId::CertG: {
      const std::int64_t m = p[0], k = p[1], i = p[2];
      BigRational r = 0;
      for (int s = 0; s < 3; ++s) {
        BigRational it = iterm(m, k + s, i);
        if (it != 0) r += cert_g_iterm_coefficient(s, m, k) * it;
      }
      r += certificate_g(m, k, i) - certificate_g(m, k, i + 1);
      return r;
    }
    case IdentityId::Rel1Recursion: {
      const std::int64_t m = p[0], k = p[1];
      return BigRational(2 * (3 + 2 * k)) * rel1(d, m, k + 2) +
             BigRational(2 + k) * rel1(d, m, k + 3);
    }
    case IdentityId::MixedRel1Rel2: {
      const std::int64_t m_ = p[0], k_ = p[1];
      const BigInt m = big(m_), k = big(k_);
      BigRational r = 0;
      r += BigRational((-1 + k) * (-1 + 2 * k - 2 * m) * (-3 + 2 * k - m) * (4 - 2 * k + m)) *
           rel2(d, m_, k_);
      r += BigRational(4 * (-1 + (-1 + m) * (-1 + m))) * rel1(d, m_ - 1, k_ - 1);
      r -= BigRational(32 * (5 - 2 * k) * (5 - 2 * k) * (-2 + k - m) * (-1 + k - m)) *
           rel2(d, m_, k_ - 2);
      r += BigRational(4 * (1 - k + m) *
                       (-99 + 16 * k * k * k - 2 * m * (32 + m) - 8 * k * k * (11 + 2 * m) +
                        2 * k * (81 + m * (31 + m)))) *
           rel2(d, m_, k_ - 1);
      r -= BigRational((-1 + k) * (-4 + 2 * k - m)) * rel1(d, m_, k_);
      r -= BigRational(4 * (-1 + k - m) * (-5 + 2 * k + m)) * rel1(d, m_, k_ - 1);
      return r;
    }
    case IdentityId::Rel2Recursion: {
      const std::int64_t m_ = p[0], k_ = p[1];
      const BigInt m = big(m_), k = big(k_);
      BigRational r = 0;
      r += BigRational((-1 + k) * (-1 + 2 * k - 2 * m) * (-3 + 2 * k - m) * (4 - 2 * k + m)) *
           rel2(d, m_, k_);
      r -= BigRational(32 * (5 - 2 * k) * (5 - 2 * k) * (-2 + k - m) * (-1 + k - m)) *
           rel2(d, m_, k_ - 2);
      r += BigRational(4 * (1 - k + m) *
                       (-99 + 16 * k * k * k - 2 * m * (32 + m) - 8 * k * k * (11 + 2 * m) +
                        2 * k * (81 + m * (31 + m)))) *
           rel2(d, m_, k_ - 1);
      return r;
    }
    case IdentityId::SigmaIRewrite: {
      const std::int64_t m_ = p[0], k_ = p[1];
      const BigInt m = big(m_), k = big(k_);
      BigRational r = BigRational(2 * (m - 1) * m * (2 * m + 1)) * BigRational(d(m_, k_ - 1));
      r += BigRational((2 - 2 * k + m) * (3 - 2 * k + m) * (1 - 2 * k + 2 * m)) *
           iterm_sum(m_, k_ - 1);
      r += BigRational(16 * (3 - 2 * k) * (-2 + k - m) * (-1 + k - m)) * iterm_sum(m_, k_ - 2);
      return r;
    }
    case IdentityId::FracSplit: {
      const std::int64_t m_ = p[0], k_ = p[1], i = p[2];
      const BigInt m = big(m_), k = big(k_);
      BigRational rhs =
          BigRational((2 - 2 * k + m) * (3 - 2 * k + m) * (1 - 2 * k + 2 * m)) *
              iterm(m_, k_ - 1, i) +
          BigRational(16 * (3 - 2 * k) * (-2 + k - m) * (-1 + k - m)) * iterm(m_, k_ - 2, i);
      return frac1(m_, k_, i) + frac2(m_, k_, i) - rhs;
    }
    case IdentityId::Rel2Corner: {
      const std::int64_t k = p[0];
      return BigRational(2 * k - 7) * rel2(d, 2 * k - 4, k) - rel1(d, 2 * k - 4, k);
    }
  }
  throw std::logic_error("unknown identity");
}

}  // namespace detail

// Left side minus right side of the identity at `point`, with d computed
// directly from its double sum.
inline BigRational identity_residual(IdentityId id, std::span<const std::int64_t> point) {
  return detail::residual_with(id, point, DirectD{});
}

template <DSource D>
BigRational identity_residual(IdentityId id, std::span<const std::int64_t> point, const D& d) {
  return detail::residual_with(id, point, d);
}

struct IdentityReport {
  IdentityId id{};
  std::string ranges;
  std::size_t points_checked = 0;
  BigRational max_abs_residual = 0;
  std::vector<std::vector<std::int64_t>> failures;

  bool ok() const { return failures.empty(); }
};

inline std::string describe_ranges(std::span<const std::string> vars, std::span<const Interval> ranges) {
  std::ostringstream os;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (v) os << ' ';
    os << vars[v] << "=[" << ranges[v].lo << ',' << ranges[v].hi << ']';
  }
  return os.str();
}

namespace detail {

// Largest m at which the identity looks up d over the given ranges.
inline std::int64_t max_m_needed(IdentityId id, std::span<const Interval> r) {
  switch (id) {
    case IdentityId::CertG:
    case IdentityId::FracSplit: return -1;
    case IdentityId::Rel2Corner: return std::max<std::int64_t>(0, 2 * r[0].hi - 4);
    default: return std::max<std::int64_t>(0, r[0].hi);
  }
}

}  // namespace detail

// Evaluates the residual at every lattice point of the box. Work is split on
// the first coordinate; failures come back in lexicographic order.
inline IdentityReport verify_identity(IdentityId id, std::span<const Interval> ranges,
                                      unsigned jobs = 1) {
  const auto vars = variables_of(id);
  if (ranges.size() != vars.size())
    throw std::invalid_argument("verify_identity: expected " + std::to_string(vars.size()) +
                                " ranges for " + std::string(name_of(id)));
  IdentityReport report;
  report.id = id;
  report.ranges = describe_ranges(vars, ranges);
  for (const Interval& r : ranges)
    if (r.size() == 0) return report;

  const std::int64_t need = detail::max_m_needed(id, ranges);
  const DMatrix table = need >= 0 ? d_matrix(need, jobs) : DMatrix(0);

  struct Slot {
    std::size_t points = 0;
    BigRational max_abs = 0;
    std::vector<std::vector<std::int64_t>> failures;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(ranges[0].size()));
  parallel_for(slots.size(), jobs, [&](std::size_t s) {
    Slot& slot = slots[s];
    std::vector<std::int64_t> point(ranges.size());
    for (std::size_t v = 0; v < ranges.size(); ++v) point[v] = ranges[v].lo;
    point[0] = ranges[0].lo + static_cast<std::int64_t>(s);
    auto advance = [&] {
      for (std::size_t v = point.size(); v-- > 1;) {
        if (point[v] < ranges[v].hi) {
          ++point[v];
          return true;
        }
        point[v] = ranges[v].lo;
      }
      return false;
    };
    do {
      BigRational r = detail::residual_with(id, point, table);
      ++slot.points;
      if (r != 0) {
        slot.failures.push_back(point);
        if (abs(r) > slot.max_abs) slot.max_abs = abs(r);
      }
    } while (advance());
  });
  for (Slot& slot : slots) {
    report.points_checked += slot.points;
    if (slot.max_abs > report.max_abs_residual) report.max_abs_residual = slot.max_abs;
    for (auto& f : slot.failures) report.failures.push_back(std::move(f));
  }
  return report;
}

}  // namespace ivpoly
