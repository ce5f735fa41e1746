#pragma once

// Verification suites over finite ranges. Each check reports the points it
// visited and any failing point; an empty failure list means the property
// held everywhere in range.

#include "ivpoly/bbasis.hpp"
#include "ivpoly/coefficients.hpp"
#include "ivpoly/exact.hpp"
#include "ivpoly/relations.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ivpoly {

struct CheckResult {
  std::string name;
  std::string ranges;
  std::size_t points = 0;
  std::vector<std::string> failures;  // "m=3 k=2: <detail>"

  bool ok() const { return failures.empty(); }
};

enum class Suite { Relations, Integrality, Basis, All };

inline std::optional<Suite> suite_from_name(std::string_view s) {
  if (s == "relations") return Suite::Relations;
  if (s == "integrality") return Suite::Integrality;
  if (s == "basis") return Suite::Basis;
  if (s == "all") return Suite::All;
  return std::nullopt;
}

// Default upper bounds on m per check. `override_max_m` replaces every one.
struct CheckRanges {
  std::int64_t rel_max_m = 40;        // rel1, rel2 vanish for 0 <= m <= 40, 0 <= k <= m+4
  std::int64_t cert_max_m = 20;       // certificate identity, i in [-2, 25]
  std::int64_t mixed_max_m = 30;      // mixed rel1/rel2, both recursions, sigma-i
  std::int64_t frac_split_max_m = 25;
  std::int64_t corner_max_k = 15;
  std::int64_t integrality_max_m = 40;
  std::int64_t integer_valued_max_m = 15;  // eval_P(m,x) in Z for |x| <= 20
  std::int64_t vanishing_p_max_m = 20;     // P_m(k) = 0 for 0 <= 2k-2 < m
  std::int64_t recursion_max_m = 30;
  std::int64_t boundary_max_k = 20;
  std::int64_t catalan_max_k = 20;
  std::int64_t z_half_max_m = 60;
  std::int64_t basis_max_m = 25;
  std::int64_t triangular_max_k = 40;
  std::int64_t telescoping_max_j = 20;

  static CheckRanges with_max_m(std::int64_t m) {
    CheckRanges r;
    r.rel_max_m = r.cert_max_m = r.mixed_max_m = r.frac_split_max_m = m;
    r.integrality_max_m = r.recursion_max_m = r.z_half_max_m = r.basis_max_m = m;
    r.integer_valued_max_m = std::min<std::int64_t>(m, 15);
    r.vanishing_p_max_m = std::min<std::int64_t>(m, 20);
    r.corner_max_k = std::max<std::int64_t>(3, m / 2 + 2);
    r.boundary_max_k = std::max<std::int64_t>(3, m / 2 + 2);
    r.catalan_max_k = std::max<std::int64_t>(3, m / 2 + 2);
    return r;
  }
};

namespace detail {

inline std::string at(std::initializer_list<std::pair<const char*, std::int64_t>> coords) {
  std::string s;
  for (const auto& [name, v] : coords) {
    if (!s.empty()) s += ' ';
    s += std::string(name) + "=" + std::to_string(v);
  }
  return s;
}

inline std::string box(std::initializer_list<std::pair<const char*, Interval>> coords) {
  std::string s;
  for (const auto& [name, r] : coords) {
    if (!s.empty()) s += ' ';
    s += std::string(name) + "=[" + std::to_string(r.lo) + "," + std::to_string(r.hi) + "]";
  }
  return s;
}

inline CheckResult from_report(const IdentityReport& r) {
  CheckResult c{std::string(name_of(r.id)), r.ranges, r.points_checked, {}};
  const auto vars = variables_of(r.id);
  for (const auto& p : r.failures) {
    std::string s;
    for (std::size_t v = 0; v < p.size(); ++v) s += (v ? " " : "") + vars[v] + "=" + std::to_string(p[v]);
    c.failures.push_back(s + ": nonzero residual");
  }
  return c;
}

}  // namespace detail

inline std::vector<CheckResult> run_relations_suite(const CheckRanges& R, unsigned jobs = 1) {
  std::vector<CheckResult> out;
  const std::int64_t need = std::max({R.rel_max_m, R.mixed_max_m, 2 * R.corner_max_k - 4});
  const DMatrix d = d_matrix(std::max<std::int64_t>(need, 0), jobs);

  for (int which = 1; which <= 2; ++which) {
    CheckResult c{which == 1 ? "rel1" : "rel2",
                  detail::box({{"m", {0, R.rel_max_m}}, {"k", {0, R.rel_max_m + 4}}}), 0, {}};
    for (std::int64_t m = 0; m <= R.rel_max_m; ++m)
      for (std::int64_t k = 0; k <= m + 4; ++k) {
        ++c.points;
        const BigRational v = which == 1 ? rel1(d, m, k) : rel2(d, m, k);
        if (v != 0) c.failures.push_back(detail::at({{"m", m}, {"k", k}}) + ": " + to_string(v));
      }
    out.push_back(std::move(c));
  }

  {
    CheckResult c{"sigma-i", detail::box({{"m", {0, R.mixed_max_m}}, {"k", {0, R.mixed_max_m + 2}}}),
                  0, {}};
    for (std::int64_t m = 0; m <= R.mixed_max_m; ++m)
      for (std::int64_t k = 0; k <= m + 2; ++k) {
        ++c.points;
        const BigRational lhs = BigRational(2 * (2 * k + 1)) * d(m, k) + BigRational(k + 1) * d(m, k + 1);
        if (lhs != iterm_sum(m, k)) c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
      }
    out.push_back(std::move(c));
  }

  auto run = [&](IdentityId id, std::vector<Interval> ranges) {
    out.push_back(detail::from_report(verify_identity(id, ranges, jobs)));
  };
  run(IdentityId::CertG, {{0, R.cert_max_m}, {0, R.cert_max_m}, {-2, R.cert_max_m + 5}});
  run(IdentityId::Rel1Recursion, {{0, R.mixed_max_m}, {0, R.mixed_max_m + 3}});
  run(IdentityId::MixedRel1Rel2, {{0, R.mixed_max_m}, {0, R.mixed_max_m + 3}});
  run(IdentityId::Rel2Recursion, {{0, R.mixed_max_m}, {0, R.mixed_max_m + 3}});
  run(IdentityId::SigmaIRewrite, {{0, R.mixed_max_m}, {0, R.mixed_max_m + 3}});
  run(IdentityId::FracSplit, {{0, R.frac_split_max_m}, {0, R.frac_split_max_m + 2}, {-2, R.frac_split_max_m + 2}});
  run(IdentityId::Rel2Corner, {{3, R.corner_max_k}});

  {
    // Summing the certificate identity over i in [0, m+1]: the g terms
    // telescope to g(m,k,0) - g(m,k,m+2), and both ends vanish.
    CheckResult c{"cert-g-telescoped", detail::box({{"m", {0, R.cert_max_m}}, {"k", {0, R.cert_max_m}}}),
                  0, {}};
    for (std::int64_t m = 0; m <= R.cert_max_m; ++m)
      for (std::int64_t k = 0; k <= R.cert_max_m; ++k) {
        ++c.points;
        if (certificate_g(m, k, 0) != 0 || certificate_g(m, k, m + 2) != 0) {
          c.failures.push_back(detail::at({{"m", m}, {"k", k}}) + ": boundary g nonzero");
          continue;
        }
        BigRational sum = 0;
        for (std::int64_t i = 0; i <= m + 1; ++i) {
          const std::int64_t p[] = {m, k, i};
          sum += identity_residual(IdentityId::CertG, p);
        }
        if (sum != 0) c.failures.push_back(detail::at({{"m", m}, {"k", k}}) + ": telescoped sum " + to_string(sum));
      }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CheckResult> run_integrality_suite(const CheckRanges& R, unsigned jobs = 1) {
  std::vector<CheckResult> out;
  const std::int64_t M = R.integrality_max_m;
  const DMatrix d = d_matrix(std::max<std::int64_t>({M, R.recursion_max_m, 0}), jobs);

  {
    CheckResult c{"d-integral", detail::box({{"m", {1, M}}, {"k", {0, M}}}), 0, {}};
    for (std::int64_t m = 1; m <= M; ++m)
      for (std::int64_t k = 0; k <= m; ++k) {
        ++c.points;
        if (!is_integer(d(m, k))) c.failures.push_back(detail::at({{"m", m}, {"k", k}}) + ": " + to_string(d(m, k)));
      }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"d-m0-zero", detail::box({{"m", {2, M}}}), 0, {}};
    for (std::int64_t m = 2; m <= M; ++m) {
      ++c.points;
      if (d(m, 0) != 0) c.failures.push_back(detail::at({{"m", m}}) + ": " + to_string(d(m, 0)));
    }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"d1-d2-from-d0", detail::box({{"m", {3, M}}}), 0, {}};
    for (std::int64_t m = 3; m <= M; ++m) {
      ++c.points;
      if (d(m, 1) != -2 * d(m, 0) || d(m, 2) != 6 * d(m, 0)) c.failures.push_back(detail::at({{"m", m}}));
    }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"sse", detail::box({{"m", {0, M}}, {"k", {0, M + 2}}}), 0, {}};
    for (std::int64_t m = 0; m <= M; ++m)
      for (std::int64_t k = 0; k <= M + 2; ++k) {
        if (!(m > 2 * k - 2)) continue;
        ++c.points;
        if (BigRational(m * (m - 1)) * d(m, k) != 0) c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
      }
    out.push_back(std::move(c));
  }
  {
    // m(m-1)(2m+1) d(m,k) in 3 m(m-1) Z, i.e. (2m+1) d(m,k) / 3 in Z for m >= 2.
    CheckResult c{"key-multiple", detail::box({{"m", {2, M}}, {"k", {0, M}}}), 0, {}};
    for (std::int64_t m = 2; m <= M; ++m)
      for (std::int64_t k = 0; k <= m; ++k) {
        ++c.points;
        const BigRational lhs = BigRational(m * (m - 1) * (2 * m + 1)) * d(m, k);
        if (!is_integer(lhs / BigRational(3 * m * (m - 1)))) c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
      }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"p-vanishing", detail::box({{"m", {0, R.vanishing_p_max_m}}}), 0, {}};
    for (std::int64_t m = 0; m <= R.vanishing_p_max_m; ++m)
      for (std::int64_t k = 1; 2 * k - 2 < m; ++k) {
        ++c.points;
        if (eval_P(m, k) != 0) c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
      }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"integer-valued", detail::box({{"m", {0, R.integer_valued_max_m}}, {"x", {-20, 20}}}), 0, {}};
    for (std::int64_t m = 0; m <= R.integer_valued_max_m; ++m)
      for (std::int64_t x = -20; x <= 20; ++x) {
        ++c.points;
        const BigRational v = eval_P(m, x);
        if (!is_integer(v)) c.failures.push_back(detail::at({{"m", m}, {"x", x}}) + ": " + to_string(v));
      }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"boundary", detail::box({{"k", {3, R.boundary_max_k}}}), 0, {}};
    for (std::int64_t k = 3; k <= R.boundary_max_k; ++k) {
      ++c.points;
      const auto [even, odd] = d_boundary(k);
      if (even != d_direct(2 * k - 2, k) || odd != d_direct(2 * k - 3, k))
        c.failures.push_back(detail::at({{"k", k}}));
    }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"recursion", detail::box({{"m", {0, R.recursion_max_m}}, {"k", {0, R.recursion_max_m + 1}}}), 0, {}};
    for (std::int64_t m = 0; m <= R.recursion_max_m; ++m)
      for (std::int64_t k = 0; k <= m + 1; ++k) {
        try {
          const BigRational v = d_via_recursion(m, k);
          ++c.points;
          if (v != d(m, k)) c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
        } catch (const RecursionInapplicable&) {
        }
      }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"catalan", detail::box({{"k", {3, R.catalan_max_k}}}), 0, {}};
    for (std::int64_t k = 3; k <= R.catalan_max_k; ++k) {
      ++c.points;
      const BigRational scale(6 * (k - 1) * (k - 2));
      const BigRational cat(catalan(k - 2));
      if (frac1(k - 1, k, k - 1) / scale != cat || frac1(k - 1, k, 0) / scale != cat)
        c.failures.push_back(detail::at({{"k", k}}));
    }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"frac-z-half", detail::box({{"m", {2, R.z_half_max_m}}}), 0, {}};
    for (std::int64_t m = 2; m <= R.z_half_max_m; ++m) {
      const BigRational scale(6 * m * (m - 1));
      for (std::int64_t k = 1; k <= m + 1; ++k)
        for (std::int64_t i = 0; i <= k - 1; ++i) {
          ++c.points;
          if (!in_z_half(frac1(m, k, i) / scale) || !in_z_half(frac2(m, k, i) / scale))
            c.failures.push_back(detail::at({{"m", m}, {"k", k}, {"i", i}}));
        }
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CheckResult> run_basis_suite(const CheckRanges& R, unsigned jobs = 1) {
  std::vector<CheckResult> out;
  {
    CheckResult c{"triangular", detail::box({{"k", {0, R.triangular_max_k}}}), 0, {}};
    for (std::int64_t k = 0; k <= R.triangular_max_k; ++k) {
      for (std::int64_t i = 0; i < k; ++i) {
        ++c.points;
        if (eval_B(k, i) != 0) c.failures.push_back(detail::at({{"k", k}, {"i", i}}));
      }
      ++c.points;
      if (eval_B(k, k) != (k == 0 ? 2 : 1)) c.failures.push_back(detail::at({{"k", k}}) + ": diagonal");
    }
    out.push_back(std::move(c));
  }
  {
    CheckResult c{"decomposition", detail::box({{"m", {0, R.basis_max_m}}}), 0, {}};
    const DMatrix d = d_matrix(R.basis_max_m, jobs);
    for (std::int64_t m = 0; m <= R.basis_max_m; ++m) {
      ++c.points;
      EvenPolyValues vals{m, {}};
      for (std::int64_t t = 0; t <= m; ++t) vals.values.push_back(eval_P(m, t));
      const BCoeffs coeffs = decompose(vals);
      for (std::int64_t k = 0; k <= m; ++k)
        if (coeffs.coeffs[k] != d(m, k)) {
          c.failures.push_back(detail::at({{"m", m}, {"k", k}}));
          break;
        }
    }
    out.push_back(std::move(c));
  }
  {
    // (-1)^j binom(x+j,j) binom(x-1,j) = sum_{k<=j} (-1)^k binom(2k,k) B_k(x)/2
    CheckResult c{"telescoping", detail::box({{"j", {0, R.telescoping_max_j}}, {"x", {-25, 25}}}), 0, {}};
    for (std::int64_t j = 0; j <= R.telescoping_max_j; ++j)
      for (std::int64_t x = -25; x <= 25; ++x) {
        ++c.points;
        BigInt lhs = binom(x + j, j) * binom(x - 1, j);
        if (j % 2) lhs = -lhs;
        BigRational rhs = 0;
        for (std::int64_t k = 0; k <= j; ++k) {
          BigRational t = BigRational(binom(2 * k, k) * eval_B(k, x)) / 2;
          rhs += (k % 2) ? BigRational(-t) : t;
        }
        if (BigRational(lhs) != rhs) c.failures.push_back(detail::at({{"j", j}, {"x", x}}));
      }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CheckResult> run_suite(Suite s, const CheckRanges& R, unsigned jobs = 1) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) {
    for (auto& c : v) out.push_back(std::move(c));
  };
  if (s == Suite::Relations || s == Suite::All) append(run_relations_suite(R, jobs));
  if (s == Suite::Integrality || s == Suite::All) append(run_integrality_suite(R, jobs));
  if (s == Suite::Basis || s == Suite::All) append(run_basis_suite(R, jobs));
  return out;
}

}  // namespace ivpoly
