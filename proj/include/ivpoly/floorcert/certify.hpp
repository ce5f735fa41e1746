#pragma once

#include "ivpoly/floorcert/eliminate.hpp"
#include "ivpoly/floorcert/floor_sum.hpp"
#include "ivpoly/floorcert/spec.hpp"
#include "ivpoly/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivpoly::floorcert {

// One elimination step: every case of the previous level is split on `var`.
struct CaseLevel {
  std::string var;
  std::vector<JumpSet> splits;            // one per parent case
  std::vector<FloorSum> cases;
  std::vector<std::size_t> parent;        // index into the previous level
  std::vector<LinearForm> substitution;   // value substituted for var
};

struct LeafCheck {
  Stabilization stabilization;  // of the whole leaf: max term bound, summed stable value
  std::int64_t min_below_bound = 0;  // min over 1 <= n < global bound (or at the bound if none)
};

struct Certificate {
  std::string name;
  FloorSum floor_sum;
  std::vector<std::string> order;
  SmallQReport small_q;
  std::vector<CaseLevel> levels;  // levels[0] is the root with a single case
  std::int64_t bound = 1;         // max stabilization bound over all leaf floors
  std::vector<LeafCheck> leaves;
  std::size_t distinct_leaves = 0;
  bool pass = false;
  std::optional<Witness> witness;
  std::string failure;

  const std::vector<FloorSum>& leaf_cases() const { return levels.back().cases; }
  std::size_t floors_in_leaves() const {
    std::size_t total = 0;
    for (const auto& fs : leaf_cases()) total += fs.size();
    return total;
  }
};

class CertifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Concrete assignment reproducing leaf `leaf` at parameter n, by evaluating
// the substitutions from the leaf back to the root.
inline Assignment witness_point(const Certificate& cert, std::size_t leaf, std::int64_t n) {
  Assignment a;
  a[std::string(kModulusParameter)] = n;
  std::size_t idx = leaf;
  for (std::size_t l = cert.levels.size() - 1; l >= 1; --l) {
    const CaseLevel& level = cert.levels[l];
    a[level.var] = level.substitution[idx].evaluate(a);
    idx = level.parent[idx];
  }
  a.erase(std::string(kModulusParameter));
  return a;
}

namespace detail {

inline std::int64_t leaf_value(const FloorSum& fs, std::int64_t n) {
  Assignment a{{std::string(kModulusParameter), n}};
  return evaluate_floor_sum(fs, a, 2 * n + 1);
}

}  // namespace detail

// Nonnegativity of the floor sum of `spec` for every odd q >= 3:
//  1. exhaustive check over full periods for 3 <= q < small_q_max;
//  2. eliminate the variables in `order` through their jump points;
//  3. each leaf depends on n only; every floor in it is constant past its
//     stabilization bound, so checking 1 <= n < N* directly plus the stable
//     value covers all n >= 1.
inline Certificate certify(const FactorialRatioSpec& spec, std::span<const std::string> order,
                           std::int64_t small_q_max = 17, std::string name = {},
                           unsigned jobs = 1) {
  Certificate cert;
  cert.name = std::move(name);
  cert.floor_sum = build_floor_sum(spec);
  cert.order.assign(order.begin(), order.end());

  {
    std::set<std::string> ordered(order.begin(), order.end());
    if (ordered.size() != order.size()) throw CertifyError("elimination order repeats a variable");
    for (const auto& v : spec.variables)
      if (!ordered.count(v)) throw CertifyError("elimination order does not cover '" + v + "'");
    for (const auto& v : order)
      if (std::find(spec.variables.begin(), spec.variables.end(), v) == spec.variables.end())
        throw CertifyError("elimination order names unknown variable '" + v + "'");
  }

  cert.small_q = brute_force_small_q(cert.floor_sum, small_q_max);

  CaseLevel root;
  root.cases.push_back(cert.floor_sum);
  root.parent.push_back(0);
  root.substitution.emplace_back();
  cert.levels.push_back(std::move(root));

  for (const std::string& var : order) {
    const CaseLevel& prev = cert.levels.back();
    CaseLevel next;
    next.var = var;
    next.splits.resize(prev.cases.size());
    try {
      parallel_for(prev.cases.size(), jobs, [&](std::size_t p) {
        next.splits[p] = jump_candidates(prev.cases[p], var);
      });
    } catch (const NotEliminable& e) {
      throw CertifyError(e.what());
    }
    for (std::size_t p = 0; p < prev.cases.size(); ++p) {
      const JumpSet& js = next.splits[p];
      if (js.samples.empty()) {
        next.cases.push_back(prev.cases[p]);
        next.parent.push_back(p);
        next.substitution.push_back(LinearForm::variable(var));
        continue;
      }
      for (const LinearForm& s : js.samples) {
        next.cases.push_back(prev.cases[p].substitute(var, s));
        next.parent.push_back(p);
        next.substitution.push_back(s);
      }
    }
    cert.levels.push_back(std::move(next));
  }

  const auto& leaves = cert.leaf_cases();
  cert.distinct_leaves = std::set<FloorSum>(leaves.begin(), leaves.end()).size();

  cert.leaves.resize(leaves.size());
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    LeafCheck& check = cert.leaves[l];
    check.stabilization = {1, 0};
    for (const FloorTerm& t : leaves[l].terms()) {
      const Stabilization st = stabilization_bound(t.form);
      check.stabilization.bound = std::max(check.stabilization.bound, st.bound);
      check.stabilization.stable_value += t.weight * st.stable_value;
    }
    cert.bound = std::max(cert.bound, check.stabilization.bound);
  }

  cert.pass = cert.small_q.ok();
  if (!cert.pass) {
    cert.witness = cert.small_q.witness;
    cert.failure = "negative value in small-q sweep";
  }
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    LeafCheck& check = cert.leaves[l];
    check.min_below_bound = detail::leaf_value(leaves[l], cert.bound);
    if (detail::leaf_value(leaves[l], cert.bound) != check.stabilization.stable_value)
      throw std::logic_error("leaf value at the bound differs from its stable value");
    for (std::int64_t n = 1; n < cert.bound; ++n) {
      const std::int64_t v = detail::leaf_value(leaves[l], n);
      check.min_below_bound = std::min(check.min_below_bound, v);
      if (v < 0 && cert.pass) {
        cert.pass = false;
        cert.witness = Witness{2 * n + 1, witness_point(cert, l, n), v};
        cert.failure = "leaf " + std::to_string(l) + " negative at n=" + std::to_string(n);
      }
    }
    if (check.stabilization.stable_value < 0 && cert.pass) {
      cert.pass = false;
      cert.witness = Witness{2 * cert.bound + 1, witness_point(cert, l, cert.bound),
                             check.stabilization.stable_value};
      cert.failure = "leaf " + std::to_string(l) + " has negative stable value";
    }
  }
  return cert;
}

inline std::string assignment_text(const Assignment& a) {
  std::string s;
  for (const auto& [k, v] : a) {
    if (!s.empty()) s += ' ';
    s += k + "=" + std::to_string(v);
  }
  return s;
}

// Canonical text: header, SMALLQ, CASES, STABLE, VERDICT.
inline std::string to_text(const Certificate& cert) {
  std::ostringstream os;
  os << "FLOORS-CERTIFICATE 1\n";
  os << "instance " << (cert.name.empty() ? "-" : cert.name) << '\n';
  os << "floorsum " << cert.floor_sum.to_string() << '\n';
  os << "modulus q = 2n + 1\n";
  os << "order";
  for (const auto& v : cert.order) os << ' ' << v;
  os << '\n';

  os << "SMALLQ\n";
  os << "q_max " << cert.small_q.q_max << '\n';
  for (const auto& row : cert.small_q.rows)
    os << "q " << row.q << " points " << row.points << " min " << row.min << " max " << row.max
       << '\n';
  if (!cert.small_q.rows.empty()) os << "min " << cert.small_q.min << '\n';

  os << "CASES\n";
  for (std::size_t l = 1; l < cert.levels.size(); ++l) {
    const CaseLevel& level = cert.levels[l];
    os << "step " << l << " eliminate " << level.var << " offsets";
    for (auto off : kSampleOffsets) os << ' ' << off;
    os << '\n';
    for (std::size_t p = 0; p < level.splits.size(); ++p) {
      os << "split " << p << " jumps {";
      const auto& pts = level.splits[p].points;
      for (std::size_t j = 0; j < pts.size(); ++j) os << (j ? "; " : "") << pts[j].to_string();
      os << "} samples " << level.splits[p].samples.size() << '\n';
    }
    for (std::size_t c = 0; c < level.cases.size(); ++c)
      os << "case " << c << " parent " << level.parent[c] << " " << level.var
         << " := " << level.substitution[c].to_string() << " | " << level.cases[c].to_string()
         << '\n';
  }
  os << "leaves " << cert.leaf_cases().size() << " distinct " << cert.distinct_leaves << " floors "
     << cert.floors_in_leaves() << '\n';

  os << "STABLE\n";
  os << "bound " << cert.bound << '\n';
  for (std::size_t l = 0; l < cert.leaves.size(); ++l)
    os << "leaf " << l << " bound " << cert.leaves[l].stabilization.bound << " stable "
       << cert.leaves[l].stabilization.stable_value << " min " << cert.leaves[l].min_below_bound
       << '\n';

  os << "VERDICT\n";
  if (cert.pass) {
    os << "pass\n";
  } else {
    os << "fail " << cert.failure << '\n';
    if (cert.witness)
      os << "witness q " << cert.witness->q << " " << assignment_text(cert.witness->point)
         << " value " << cert.witness->value << '\n';
  }
  return os.str();
}

struct CertificateCheck {
  bool ok = false;
  std::string message;
  std::size_t leaves = 0;
  std::int64_t bound = 0;
};

// Re-verifies a certificate from its text alone: each case must equal its
// parent with the recorded substitution applied, the small-q sweep is redone
// on the recorded floor sum, and every leaf is re-evaluated for
// 1 <= n <= bound together with its stabilization data.
inline CertificateCheck check_certificate_text(std::string_view text) {
  CertificateCheck out;
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.message = msg;
    return out;
  };
  std::optional<FloorSum> root;
  std::int64_t q_max = 0;
  std::vector<FloorSum> prev, cur;
  std::int64_t bound = -1;
  std::vector<std::int64_t> leaf_stable;
  std::string section;
  bool verdict_pass = false;
  bool any_small_q_negative = false;

  while (std::getline(in, line)) {
    if (line == "SMALLQ" || line == "CASES" || line == "STABLE" || line == "VERDICT") {
      section = line;
      if (section == "CASES") {
        if (!root) return fail("missing floorsum line");
        prev = {*root};
      }
      continue;
    }
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    try {
      if (section.empty()) {
        if (word == "floorsum") root = parse_floor_sum(line.substr(9));
      } else if (section == "SMALLQ") {
        if (word == "q_max") ls >> q_max;
        if (word == "q") {
          std::int64_t q, pts, mn;
          std::string w;
          ls >> q >> w >> pts >> w >> mn;
          if (mn < 0) any_small_q_negative = true;
        }
      } else if (section == "CASES") {
        if (word == "step") {
          if (!cur.empty()) prev = std::move(cur);
          cur.clear();
        } else if (word == "case") {
          std::size_t idx, parent;
          std::string w, var, assign;
          ls >> idx >> w >> parent >> var >> assign;
          const auto bar = line.find(" | ");
          const auto start = line.find(":= ") + 3;
          if (bar == std::string::npos || parent >= prev.size() || idx != cur.size())
            return fail("malformed case line: " + line);
          const LinearForm value = parse_linear_form(line.substr(start, bar - start)).form;
          const FloorSum fs = parse_floor_sum(line.substr(bar + 3));
          if (prev[parent].substitute(var, value) != fs)
            return fail("case " + std::to_string(idx) + " does not follow from its parent");
          cur.push_back(fs);
        }
      } else if (section == "STABLE") {
        if (word == "bound") ls >> bound;
        if (word == "leaf") {
          std::size_t idx;
          std::string w;
          std::int64_t b, st;
          ls >> idx >> w >> b >> w >> st;
          leaf_stable.push_back(st);
        }
      } else if (section == "VERDICT") {
        if (word == "pass") verdict_pass = true;
      }
    } catch (const std::exception& e) {
      return fail(std::string("parse error: ") + e.what() + " in line: " + line);
    }
  }
  if (!root) return fail("missing floorsum line");
  const std::vector<FloorSum>& leaves = cur.empty() ? prev : cur;
  if (leaves.size() != leaf_stable.size()) return fail("leaf count mismatch");
  if (bound < 1) return fail("missing bound");

  const SmallQReport sq = brute_force_small_q(*root, std::max<std::int64_t>(q_max, 3));
  if (sq.ok() == any_small_q_negative) return fail("small-q sweep disagrees with certificate");

  bool all_nonneg = sq.ok();
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    Stabilization agg{1, 0};
    for (const FloorTerm& t : leaves[l].terms()) {
      const Stabilization st = stabilization_bound(t.form);
      agg.bound = std::max(agg.bound, st.bound);
      agg.stable_value += t.weight * st.stable_value;
    }
    if (agg.bound > bound) return fail("leaf " + std::to_string(l) + " stabilizes after the bound");
    if (agg.stable_value != leaf_stable[l])
      return fail("leaf " + std::to_string(l) + " stable value mismatch");
    for (std::int64_t n = 1; n <= bound; ++n)
      if (detail::leaf_value(leaves[l], n) < 0) all_nonneg = false;
    if (agg.stable_value < 0) all_nonneg = false;
  }
  if (all_nonneg != verdict_pass) return fail("verdict does not match the recomputed values");
  out.ok = true;
  out.leaves = leaves.size();
  out.bound = bound;
  out.message = verdict_pass ? "certificate verified: pass" : "certificate verified: fail";
  return out;
}

}  // namespace ivpoly::floorcert
