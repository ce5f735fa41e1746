#pragma once

#include "ivpoly/exact.hpp"
#include "ivpoly/floorcert/linear_form.hpp"
#include "ivpoly/floorcert/spec.hpp"
#include "ivpoly/interval.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivpoly::floorcert {

// A factorial argument evaluates negative at a point the region admits.
class RegionInconsistency : public std::runtime_error {
 public:
  RegionInconsistency(Assignment point, const LinearForm& form, std::int64_t value)
      : std::runtime_error("factorial of " + std::to_string(value) + " from [" + form.to_string() +
                           "] inside the region"),
        point_(std::move(point)) {}
  const Assignment& point() const { return point_; }

 private:
  Assignment point_;
};

// Exact value of the ratio at `point`.
inline BigRational ratio_value(const FactorialRatioSpec& spec, const Assignment& point) {
  auto product = [&](const std::vector<LinearForm>& forms) {
    BigInt p = 1;
    for (const auto& f : forms) {
      const std::int64_t v = f.evaluate(point);
      if (v < 0) throw RegionInconsistency(point, f, v);
      p *= factorial(v);
    }
    return p;
  };
  BigRational r = make_rational(product(spec.numerator), product(spec.denominator));
  if (spec.scalar_pow2 > 0) r *= pow2(static_cast<unsigned long>(spec.scalar_pow2));
  if (spec.scalar_pow2 < 0) r /= pow2(static_cast<unsigned long>(-spec.scalar_pow2));
  return r;
}

struct MembershipViolation {
  Assignment point;
  BigRational value;
};

struct OracleReport {
  std::size_t points_checked = 0;
  std::vector<MembershipViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Brute-force Z[1/2] membership: evaluates the ratio exactly at every point of
// the box that lies in the region and records each value whose reduced
// denominator has an odd factor.
inline OracleReport oracle_membership(const FactorialRatioSpec& spec,
                                      const std::map<std::string, Interval>& ranges) {
  for (const auto& v : spec.variables)
    if (!ranges.count(v)) throw std::invalid_argument("oracle_membership: no range for '" + v + "'");
  OracleReport report;
  Assignment a;
  for (const auto& v : spec.variables) {
    if (ranges.at(v).size() == 0) return report;
    a[v] = ranges.at(v).lo;
  }
  while (true) {
    if (spec.in_region(a)) {
      ++report.points_checked;
      BigRational r = ratio_value(spec, a);
      if (!in_z_half(r)) report.violations.push_back({a, std::move(r)});
    }
    std::size_t idx = spec.variables.size();
    bool done = true;
    while (idx > 0) {
      --idx;
      const auto& name = spec.variables[idx];
      if (a[name] < ranges.at(name).hi) {
        ++a[name];
        done = false;
        break;
      }
      a[name] = ranges.at(name).lo;
    }
    if (done) break;
  }
  return report;
}

}  // namespace ivpoly::floorcert
