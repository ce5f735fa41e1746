#include "ivpoly/floorcert/builtin.hpp"
#include "ivpoly/floorcert/certify.hpp"
#include "ivpoly/floorcert/eliminate.hpp"
#include "ivpoly/floorcert/floor_sum.hpp"
#include "ivpoly/floorcert/linear_form.hpp"
#include "ivpoly/floorcert/oracle.hpp"
#include "ivpoly/floorcert/spec.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace ivpoly::floorcert {
namespace {

LinearForm form(std::string_view s) { return parse_linear_form(s).form; }

const BuiltinInstance& builtin(std::string_view name) {
  static const auto all = builtin_instances();
  for (const auto& b : all)
    if (b.name == name) return b;
  throw std::logic_error("no builtin");
}

// ---- linear forms -------------------------------------------------------

TEST(LinearForm, ParseAndPrint) {
  EXPECT_EQ(form("2m - 2i - 2").to_string(), "-2i + 2m - 2");
  EXPECT_EQ(form(" - k + 1 ").to_string(), "-k + 1");
  EXPECT_EQ(form("3 * x").to_string(), "3x");
  EXPECT_EQ(form("m - m").to_string(), "0");
  EXPECT_EQ(form("i + i + 4").coefficient("i"), 2);
  EXPECT_EQ(form("i + i + 4").constant(), 4);
  EXPECT_TRUE(form("m - m + 0").is_zero());
}

TEST(LinearForm, RoundTrip) {
  for (const char* s : {"-2i + 2m - 2", "k", "-7", "i + k - m - 1", "2n + 1"})
    EXPECT_EQ(form(form(s).to_string()), form(s)) << s;
}

TEST(LinearForm, Errors) {
  auto column_of = [](std::string_view s) {
    try {
      parse_linear_form(s);
    } catch (const FormSyntaxError& e) {
      return e.column();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(column_of(""), 1u);
  EXPECT_EQ(column_of("2m +"), 5u);
  EXPECT_EQ(column_of("2m m"), 4u);
  EXPECT_EQ(column_of("1.5m"), 1u);
  EXPECT_EQ(column_of("m $"), 3u);
  EXPECT_EQ(column_of("99999999999999999999m"), 1u);
}

TEST(LinearForm, SubstituteAndEvaluate) {
  const LinearForm f = form("2m - i + 3");
  const LinearForm g = f.substitute("m", form("i + 1"));
  EXPECT_EQ(g, form("i + 5"));
  EXPECT_EQ(f.evaluate({{"m", 4}, {"i", 2}}), 9);
  EXPECT_THROW(f.evaluate({{"m", 4}}), std::out_of_range);
  EXPECT_EQ(f.substitute("k", form("7")), f);
}

// ---- spec DSL ------------------------------------------------------------

SpecParseError spec_error(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const SpecParseError& e) {
    return e;
  }
  throw std::logic_error("expected a parse error");
}

TEST(Spec, BuiltinsParse) {
  EXPECT_EQ(builtin("frac1-diag").spec.numerator.size(), 3u);
  EXPECT_EQ(builtin("frac1-diag").spec.denominator.size(), 6u);
  EXPECT_EQ(builtin("frac1-diag").spec.scalar_pow2, -1);
  EXPECT_EQ(builtin("frac1-general").spec.numerator.size() + builtin("frac1-general").spec.denominator.size(), 13u);
  EXPECT_EQ(builtin("frac2").spec.numerator.size() + builtin("frac2").spec.denominator.size(), 8u);
  EXPECT_EQ(builtin("frac2").order, (std::vector<std::string>{"k", "m", "i"}));
  EXPECT_FALSE(find_builtin("frac3").has_value());
}

TEST(Spec, StrictInequalityShiftsByOne) {
  const auto spec = parse_spec("vars a b\nassume a > b\nassume b >= 2\nnum a\n");
  ASSERT_EQ(spec.region.size(), 2u);
  EXPECT_EQ(spec.region[0], form("a - b - 1"));
  EXPECT_EQ(spec.region[1], form("b - 2"));
}

TEST(Spec, TextRoundTrip) {
  for (const auto& b : builtin_instances()) EXPECT_EQ(parse_spec(to_text(b.spec)), b.spec) << b.name;
}

TEST(Spec, ErrorsCarryPosition) {
  auto e = spec_error("vars m\nnum 2k\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 6u);
  EXPECT_NE(e.message().find("unbound"), std::string::npos);

  e = spec_error("vars m n\nnum m\n");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_NE(e.message().find("reserved"), std::string::npos);

  e = spec_error("num m\n");
  EXPECT_EQ(e.line(), 1u);

  e = spec_error("vars m\nnum 2m +\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 9u);

  e = spec_error("vars m\nfactor m\n");
  EXPECT_NE(e.message().find("unknown statement"), std::string::npos);

  e = spec_error("vars m m\nnum m\n");
  EXPECT_NE(e.message().find("twice"), std::string::npos);

  e = spec_error("vars m\nassume m < 3\nnum m\n");
  EXPECT_EQ(e.line(), 2u);

  e = spec_error("vars m\npow2 x\nnum m\n");
  EXPECT_EQ(e.line(), 2u);

  e = spec_error("vars m\n# nothing\n");
  EXPECT_NE(e.message().find("no 'num'"), std::string::npos);
}

// ---- floor sums ------------------------------------------------------------

TEST(FloorSum, CanonicalForm) {
  const FloorSum fs = FloorSum::from_terms({{1, form("m")}, {-1, form("m")}, {2, form("i")}, {1, form("0")}, {1, form("i")}});
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs.terms()[0].weight, 3);
  EXPECT_EQ(fs.to_string(), "3 [i]");
  EXPECT_EQ(FloorSum::from_terms({}).to_string(), "0");
}

TEST(FloorSum, ParseRoundTrip) {
  for (const auto& b : builtin_instances()) {
    const FloorSum fs = build_floor_sum(b.spec);
    EXPECT_EQ(parse_floor_sum(fs.to_string()), fs) << b.name;
  }
  EXPECT_EQ(parse_floor_sum("0"), FloorSum{});
  EXPECT_THROW(parse_floor_sum("[m] [i]"), FormSyntaxError);
  EXPECT_THROW(parse_floor_sum("2 m"), FormSyntaxError);
}

TEST(FloorSum, DiagonalText) {
  EXPECT_EQ(build_floor_sum(builtin("frac1-diag").spec).to_string(),
            "[-2i + 2m - 2] - [-2i + 2m - 1] - 2 [-i + m] - 2 [i] + [2i - 2] - [2i - 1] + [2m]");
}

TEST(FloorSum, ModulusMustBeOddAndAtLeastThree) {
  const FloorSum fs = parse_floor_sum("[m]");
  EXPECT_THROW(evaluate_floor_sum(fs, {{"m", 1}}, 4), std::invalid_argument);
  EXPECT_THROW(evaluate_floor_sum(fs, {{"m", 1}}, 1), std::invalid_argument);
  EXPECT_EQ(evaluate_floor_sum(parse_floor_sum("[2n + m]"), {{"m", 1}}, 7), 1);
  EXPECT_THROW(brute_force_small_q(fs, 2), std::invalid_argument);
}

TEST(FloorSum, PeriodicInEveryVariable) {
  std::mt19937_64 rng(17);
  for (const auto& b : builtin_instances()) {
    const FloorSum fs = build_floor_sum(b.spec);
    for (int t = 0; t < 300; ++t) {
      const std::int64_t q = 3 + 2 * static_cast<std::int64_t>(rng() % 12);
      Assignment a;
      for (const auto& v : b.spec.variables) a[v] = static_cast<std::int64_t>(rng() % 200) - 100;
      for (const auto& v : b.spec.variables) {
        Assignment shifted = a;
        shifted[v] += q;
        EXPECT_EQ(evaluate_floor_sum(fs, a, q), evaluate_floor_sum(fs, shifted, q)) << b.name << " q=" << q;
      }
    }
  }
}

TEST(FloorSum, LegendreLinkage) {
  std::mt19937_64 rng(23);
  for (const auto& b : builtin_instances()) {
    const FloorSum fs = build_floor_sum(b.spec);
    int checked = 0;
    while (checked < 60) {
      Assignment a;
      for (const auto& v : b.spec.variables) a[v] = static_cast<std::int64_t>(rng() % 40);
      if (!b.spec.in_region(a)) continue;
      ++checked;
      const BigRational r = ratio_value(b.spec, a);
      std::int64_t biggest = 0;
      for (const auto& f : b.spec.numerator) biggest = std::max(biggest, f.evaluate(a));
      for (const auto& f : b.spec.denominator) biggest = std::max(biggest, f.evaluate(a));
      for (long p : {3L, 5L, 7L, 11L, 13L}) {
        std::int64_t total = 0;
        for (std::int64_t pe = p; pe <= biggest; pe *= p) total += evaluate_floor_sum(fs, a, pe);
        const long v = oracle::valuation(r.get_num(), p) - oracle::valuation(r.get_den(), p);
        EXPECT_EQ(total, v) << b.name << " p=" << p;
      }
    }
  }
}

TEST(FloorSum, SmallQSweepOnBuiltins) {
  for (const auto& b : builtin_instances()) {
    const SmallQReport r = brute_force_small_q(build_floor_sum(b.spec), 17);
    EXPECT_TRUE(r.ok()) << b.name;
    EXPECT_GE(r.min, 0);
    ASSERT_EQ(r.rows.size(), 7u);
    EXPECT_EQ(r.rows.front().q, 3);
    EXPECT_EQ(r.rows.back().q, 15);
    std::size_t expect = 1;
    for (std::size_t v = 0; v < b.spec.variables.size(); ++v) expect *= 15;
    EXPECT_EQ(r.rows.back().points, expect);
  }
}

// ---- elimination and stabilization -----------------------------------------

TEST(Eliminate, JumpPoints) {
  // m - i = 0; 2i + 2m = 0 and 2i + 2m = 2n + 1
  const JumpSet js = jump_candidates(parse_floor_sum("[m - i] - [2i + 2m]"), "i");
  ASSERT_EQ(js.points.size(), 3u);
  EXPECT_EQ(js.points[0], form("m"));
  EXPECT_EQ(js.points[1], form("-m"));
  EXPECT_EQ(js.points[2], form("n - m"));
  EXPECT_EQ(js.samples.size(), 9u);
  EXPECT_EQ(js.samples[0], form("m - 1"));
}

TEST(Eliminate, NotEliminable) {
  EXPECT_THROW(jump_candidates(parse_floor_sum("[3m]"), "m"), NotEliminable);
  EXPECT_THROW(jump_candidates(parse_floor_sum("[2m + i]"), "m"), NotEliminable);
  EXPECT_NO_THROW(jump_candidates(parse_floor_sum("[2m + 2i + 1]"), "m"));
}

TEST(Eliminate, AbsentVariableLeavesSumAlone) {
  const FloorSum fs = parse_floor_sum("[m] - [i]");
  const auto out = eliminate(fs, "k");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], fs);
}

TEST(Eliminate, DiagonalFirstStepHasFifteenCases) {
  EXPECT_EQ(eliminate(build_floor_sum(builtin("frac1-diag").spec), "i").size(), 15u);
}

TEST(Stabilization, SpecExample) {
  const Stabilization st = stabilization_bound(2, 3);
  EXPECT_EQ(st.stable_value, 1);
  EXPECT_LE(st.bound, 2);
  EXPECT_EQ(st.bound, 1);
}

TEST(Stabilization, TightAndConstantAfterwards) {
  for (std::int64_t a = -9; a <= 9; ++a)
    for (std::int64_t b = -40; b <= 40; ++b) {
      const Stabilization st = stabilization_bound(a, b);
      ASSERT_GE(st.bound, 1);
      for (std::int64_t n = st.bound; n <= st.bound + 40; ++n)
        ASSERT_EQ(oracle::floor_div(a * n + b, 2 * n + 1), st.stable_value) << a << " " << b << " n=" << n;
      if (st.bound > 1) {
        EXPECT_NE(oracle::floor_div(a * (st.bound - 1) + b, 2 * st.bound - 1), st.stable_value) << a << " " << b;
      }
    }
}

TEST(Stabilization, FormMustDependOnlyOnN) {
  EXPECT_EQ(stabilization_bound(form("2n + 3")), stabilization_bound(2, 3));
  EXPECT_THROW(stabilization_bound(form("2n + m")), std::invalid_argument);
}

// ---- certification ------------------------------------------------------------

TEST(Certify, BuiltinsPassWithPublishedBounds) {
  const std::map<std::string, std::int64_t> max_bound = {{"frac1-diag", 5}, {"frac1-general", 6}, {"frac2", 6}};
  for (const auto& b : builtin_instances()) {
    const Certificate c = certify(b.spec, b.order, 17, b.name, 4);
    EXPECT_TRUE(c.pass) << b.name << ": " << c.failure;
    EXPECT_LE(c.bound, max_bound.at(b.name)) << b.name;
    EXPECT_GE(c.small_q.min, 0);
    for (const LeafCheck& l : c.leaves) {
      EXPECT_GE(l.min_below_bound, 0);
      EXPECT_GE(l.stabilization.stable_value, 0);
    }
  }
}

TEST(Certify, DiagonalCaseCounts) {
  const auto& b = builtin("frac1-diag");
  const Certificate c = certify(b.spec, b.order);
  ASSERT_EQ(c.levels.size(), 3u);
  EXPECT_EQ(c.levels[1].cases.size(), 15u);
  EXPECT_EQ(c.leaf_cases().size(), 153u);
  EXPECT_EQ(c.bound, 5);
}

TEST(Certify, LeavesDependOnNOnly) {
  for (const auto& b : builtin_instances()) {
    const Certificate c = certify(b.spec, b.order);
    for (const FloorSum& leaf : c.leaf_cases()) EXPECT_TRUE(leaf.variables().empty()) << leaf.to_string();
  }
}

// Every value the sum takes over a period is the value of some leaf.
TEST(Certify, LeavesCoverThePeriod) {
  for (const auto& b : builtin_instances()) {
    const FloorSum fs = build_floor_sum(b.spec);
    const Certificate c = certify(b.spec, b.order);
    for (std::int64_t q : {3, 5, 7, 9, 11}) {
      std::set<std::int64_t> period, leaves;
      for_each_in_period(fs.variables(), q, [&](const Assignment& a) { period.insert(evaluate_floor_sum(fs, a, q)); });
      for (const FloorSum& leaf : c.leaf_cases()) leaves.insert(evaluate_floor_sum(leaf, {}, q));
      for (std::int64_t v : period) EXPECT_TRUE(leaves.count(v)) << b.name << " q=" << q << " value " << v;
    }
  }
}

TEST(Certify, DeterministicAcrossJobs) {
  const auto& b = builtin("frac2");
  EXPECT_EQ(to_text(certify(b.spec, b.order, 17, b.name, 1)), to_text(certify(b.spec, b.order, 17, b.name, 4)));
}

TEST(Certify, FlippedDiagonalFailsWithWitness) {
  FactorialRatioSpec flipped = builtin("frac1-diag").spec;
  std::swap(flipped.numerator, flipped.denominator);
  const Certificate c = certify(flipped, std::vector<std::string>{"i", "m"}, 5);
  EXPECT_FALSE(c.pass);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(c.witness->q, 3);
  EXPECT_LT(c.witness->value, 0);
  EXPECT_EQ(evaluate_floor_sum(c.floor_sum, c.witness->point, c.witness->q), c.witness->value);
}

TEST(Certify, NegativeControlFails) {
  const auto spec = parse_spec(golden::kNegativeControlSpec);
  const Certificate c = certify(spec, std::vector<std::string>{"m"});
  EXPECT_FALSE(c.pass);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(evaluate_floor_sum(c.floor_sum, c.witness->point, c.witness->q), c.witness->value);
  EXPECT_LT(c.witness->value, 0);
}

TEST(Certify, LeafWitnessAboveSmallQ) {
  // q_max = 3 leaves the sweep empty, so the witness has to come from a leaf.
  const auto spec = parse_spec(golden::kNegativeControlSpec);
  const Certificate c = certify(spec, std::vector<std::string>{"m"}, 3);
  EXPECT_FALSE(c.pass);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(evaluate_floor_sum(c.floor_sum, c.witness->point, c.witness->q), c.witness->value);
}

TEST(Certify, BadOrders) {
  const auto& b = builtin("frac2");
  EXPECT_THROW(certify(b.spec, std::vector<std::string>{"k", "m"}), CertifyError);
  EXPECT_THROW(certify(b.spec, std::vector<std::string>{"k", "m", "i", "k"}), CertifyError);
  EXPECT_THROW(certify(b.spec, std::vector<std::string>{"k", "m", "j"}), CertifyError);
  const auto bad = parse_spec("vars m\nnum 3m\nden m\nden m\nden m\n");
  EXPECT_THROW(certify(bad, std::vector<std::string>{"m"}), CertifyError);
}

TEST(Certify, AlternativeOrderAlsoPasses) {
  const auto& b = builtin("frac1-diag");
  const Certificate c = certify(b.spec, std::vector<std::string>{"m", "i"});
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.bound, 5);
}

TEST(CertificateText, VerifiesAndDetectsTampering) {
  const auto& b = builtin("frac1-diag");
  const std::string text = to_text(certify(b.spec, b.order, 17, b.name));
  EXPECT_EQ(text.rfind("FLOORS-CERTIFICATE 1\n", 0), 0u);
  const CertificateCheck ok = check_certificate_text(text);
  EXPECT_TRUE(ok.ok) << ok.message;
  EXPECT_EQ(ok.leaves, 153u);
  EXPECT_EQ(ok.bound, 5);

  std::string tampered = text;
  const auto at = tampered.find("case 3 parent 0");
  ASSERT_NE(at, std::string::npos);
  const auto bar = tampered.find(" | ", at);
  tampered.insert(bar + 3, "[2n] + ");
  EXPECT_FALSE(check_certificate_text(tampered).ok);

  std::string wrong_verdict = text;
  wrong_verdict.replace(wrong_verdict.rfind("pass"), 4, "fail");
  EXPECT_FALSE(check_certificate_text(wrong_verdict).ok);

  EXPECT_FALSE(check_certificate_text("garbage").ok);
}

TEST(CertificateText, FailingCertificateStillVerifies) {
  const auto spec = parse_spec(golden::kNegativeControlSpec);
  const std::string text = to_text(certify(spec, std::vector<std::string>{"m"}));
  EXPECT_NE(text.find("witness q 3 m=1 value -1"), std::string::npos);
  const CertificateCheck check = check_certificate_text(text);
  EXPECT_TRUE(check.ok) << check.message;
  EXPECT_EQ(check.message, "certificate verified: fail");
}

// ---- oracle -------------------------------------------------------------------

TEST(Oracle, BuiltinsAreInZHalf) {
  for (const auto& b : builtin_instances()) {
    std::map<std::string, Interval> ranges;
    for (const auto& v : b.spec.variables) ranges[v] = {0, 30};
    const OracleReport r = oracle_membership(b.spec, ranges);
    EXPECT_TRUE(r.ok()) << b.name;
    EXPECT_GT(r.points_checked, 100u);
  }
}

TEST(Oracle, NegativeControlHasWitness) {
  const auto spec = parse_spec(golden::kNegativeControlSpec);
  const OracleReport r = oracle_membership(spec, {{"m", {0, 10}}});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().point.at("m"), 1);
  EXPECT_EQ(r.violations.front().value, make_rational(2, 3));
  for (const auto& v : r.violations) EXPECT_FALSE(oracle::denominator_is_power_of_two(v.value));
}

TEST(Oracle, RatioValueMatchesBinomial) {
  const auto spec = parse_spec(golden::kNegativeControlSpec);
  for (std::int64_t m = 0; m <= 20; ++m)
    EXPECT_EQ(ratio_value(spec, {{"m", m}}), make_rational(oracle::binom(2 * m, m), m + 2));
  EXPECT_EQ(ratio_value(builtin("frac1-diag").spec, {{"i", 1}, {"m", 2}}),
            make_rational(oracle::factorial(4), 2));
}

TEST(Oracle, RegionInconsistencyReportsPoint) {
  const auto spec = parse_spec("vars m\nassume m >= 0\nnum m - 1\n");
  try {
    oracle_membership(spec, {{"m", {0, 3}}});
    FAIL() << "expected RegionInconsistency";
  } catch (const RegionInconsistency& e) {
    EXPECT_EQ(e.point().at("m"), 0);
  }
  EXPECT_THROW(oracle_membership(spec, {}), std::invalid_argument);
}

}  // namespace
}  // namespace ivpoly::floorcert
