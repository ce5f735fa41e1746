#pragma once

#include "ivpoly/ivpoly.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ivpoly::cli {

enum class Format { Table, Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

using nlohmann::ordered_json;

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return Format::Table;
}

inline void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << r[c];
    out << '\n';
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Instance {
  std::string name;
  floorcert::FactorialRatioSpec spec;
  std::vector<std::string> order;
};

// Either a builtin name or a spec file; errors are usage errors.
inline std::optional<Instance> resolve_instance(const std::string& name, const std::string& spec_path,
                                                std::ostream& err) {
  if (name.empty() == spec_path.empty()) {
    err << "error: give exactly one of an instance name or --spec FILE\n";
    return std::nullopt;
  }
  if (!name.empty()) {
    auto b = floorcert::find_builtin(name);
    if (!b) {
      err << "error: unknown instance '" << name << "' (builtins:";
      for (const auto& i : floorcert::builtin_instances()) err << ' ' << i.name;
      err << ")\n";
      return std::nullopt;
    }
    return Instance{b->name, b->spec, b->order};
  }
  try {
    auto spec = floorcert::parse_spec(read_file(spec_path));
    return Instance{spec_path, spec, spec.variables};
  } catch (const floorcert::SpecParseError& e) {
    err << spec_path << ":" << e.line() << ":" << e.column() << ": " << e.message() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

inline std::vector<std::string> split_order(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part.erase(0, part.find_first_not_of(" \t"));
      part.erase(part.find_last_not_of(" \t") + 1);
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

}  // namespace detail

inline int cmd_dmatrix(std::int64_t max_m, Format format, unsigned jobs, std::ostream& out, std::ostream& err) {
  if (max_m < 0) {
    err << "error: --max-m must be >= 0\n";
    return kExitUsage;
  }
  const DMatrix d = d_matrix(max_m, jobs);
  std::vector<std::vector<std::string>> rows;
  for (std::int64_t m = 0; m <= max_m; ++m) {
    std::vector<std::string> row;
    for (std::int64_t k = 0; k <= max_m; ++k) row.push_back(to_string(d(m, k)));
    rows.push_back(std::move(row));
  }
  switch (format) {
    case Format::Table:
      detail::print_table(out, rows);
      break;
    case Format::Csv:
      for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
        out << '\n';
      }
      break;
    case Format::Json:
      out << detail::ordered_json{{"max_m", max_m}, {"d", rows}}.dump() << '\n';
      break;
  }
  return kExitOk;
}

inline int cmd_eval(std::int64_t m, std::int64_t x, Format format, std::ostream& out, std::ostream& err) {
  if (m < 0) {
    err << "error: m must be >= 0\n";
    return kExitUsage;
  }
  const std::string v = to_string(eval_P(m, x));
  switch (format) {
    case Format::Table:
      out << v << '\n';
      break;
    case Format::Csv:
      out << "m,x,value\n" << m << ',' << x << ',' << v << '\n';
      break;
    case Format::Json:
      out << detail::ordered_json{{"m", m}, {"x", x}, {"value", v}}.dump() << '\n';
      break;
  }
  return kExitOk;
}

inline int cmd_check(const std::string& suite_name, std::optional<std::int64_t> max_m, Format format,
                     unsigned jobs, std::ostream& out, std::ostream& err) {
  const auto suite = suite_from_name(suite_name);
  if (!suite) {
    err << "error: unknown suite '" << suite_name << "' (relations, integrality, basis, all)\n";
    return kExitUsage;
  }
  if (max_m && *max_m < 0) {
    err << "error: --max-m must be >= 0\n";
    return kExitUsage;
  }
  const CheckRanges ranges = max_m ? CheckRanges::with_max_m(*max_m) : CheckRanges{};
  const auto results = run_suite(*suite, ranges, jobs);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.ok(); });

  switch (format) {
    case Format::Table: {
      std::size_t failed = 0;
      for (const auto& r : results) {
        out << (r.ok() ? "PASS  " : "FAIL  ") << std::left << std::setw(20) << r.name << std::setw(32)
            << r.ranges << std::right << "points " << r.points << '\n';
        constexpr std::size_t kShown = 10;
        for (std::size_t f = 0; f < std::min(kShown, r.failures.size()); ++f)
          out << "      " << r.failures[f] << '\n';
        if (r.failures.size() > kShown) out << "      ... " << r.failures.size() - kShown << " more\n";
        if (!r.ok()) ++failed;
      }
      out << results.size() << " checks, " << failed << " failed\n";
      break;
    }
    case Format::Csv:
      out << "check,ranges,points,failures,status\n";
      for (const auto& r : results)
        out << r.name << ',' << r.ranges << ',' << r.points << ',' << r.failures.size() << ','
            << (r.ok() ? "pass" : "fail") << '\n';
      break;
    case Format::Json: {
      detail::ordered_json checks = detail::ordered_json::array();
      for (const auto& r : results)
        checks.push_back(detail::ordered_json{{"name", r.name},
                                              {"ranges", r.ranges},
                                              {"points", r.points},
                                              {"failures", r.failures},
                                              {"status", r.ok() ? "pass" : "fail"}});
      out << detail::ordered_json{{"suite", suite_name}, {"checks", checks}, {"ok", ok}}.dump() << '\n';
      break;
    }
  }
  return ok ? kExitOk : kExitFailure;
}

inline int cmd_certify(const std::string& name, const std::string& spec_path,
                       const std::vector<std::string>& order_flag, std::int64_t small_q_max,
                       const std::string& emit_path, Format format, unsigned jobs, std::ostream& out,
                       std::ostream& err) {
  auto inst = detail::resolve_instance(name, spec_path, err);
  if (!inst) return kExitUsage;
  if (small_q_max < 3) {
    err << "error: --small-q-max must be >= 3\n";
    return kExitUsage;
  }
  std::vector<std::string> order = order_flag.empty() ? inst->order : detail::split_order(order_flag);

  floorcert::Certificate cert;
  try {
    cert = floorcert::certify(inst->spec, order, small_q_max, inst->name, jobs);
  } catch (const floorcert::CertifyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!emit_path.empty()) {
    std::ofstream f(emit_path, std::ios::binary);
    f << floorcert::to_text(cert);
    if (!f) {
      err << "error: cannot write '" << emit_path << "'\n";
      return kExitUsage;
    }
  }

  std::string steps;
  for (std::size_t l = 1; l < cert.levels.size(); ++l)
    steps += (l > 1 ? "; " : "") + cert.levels[l].var + ": " + std::to_string(cert.levels[l].cases.size());
  const std::string verdict = cert.pass ? "pass" : "fail";
  std::string witness;
  if (cert.witness)
    witness = "q=" + std::to_string(cert.witness->q) + " " + floorcert::assignment_text(cert.witness->point) +
              " value=" + std::to_string(cert.witness->value);
  std::string order_text;
  for (const auto& v : cert.order) order_text += (order_text.empty() ? "" : " ") + v;

  switch (format) {
    case Format::Table:
      out << "instance    " << cert.name << '\n'
          << "floor sum   " << cert.floor_sum.to_string() << '\n'
          << "order       " << order_text << '\n'
          << "small-q     q in [3," << small_q_max << ") min "
          << (cert.small_q.rows.empty() ? std::string("-") : std::to_string(cert.small_q.min)) << '\n'
          << "cases       " << steps << '\n'
          << "leaves      " << cert.leaf_cases().size() << " (" << cert.distinct_leaves << " distinct, "
          << cert.floors_in_leaves() << " floors)\n"
          << "bound       " << cert.bound << '\n'
          << "verdict     " << verdict << (cert.pass ? "" : ": " + cert.failure) << '\n';
      if (cert.witness) out << "witness     " << witness << '\n';
      break;
    case Format::Csv:
      out << "instance,small_q_min,leaves,distinct_leaves,floors,bound,verdict,witness\n"
          << cert.name << ',' << cert.small_q.min << ',' << cert.leaf_cases().size() << ','
          << cert.distinct_leaves << ',' << cert.floors_in_leaves() << ',' << cert.bound << ',' << verdict
          << ',' << witness << '\n';
      break;
    case Format::Json: {
      detail::ordered_json j{{"instance", cert.name},
                             {"floor_sum", cert.floor_sum.to_string()},
                             {"order", cert.order},
                             {"small_q_max", small_q_max},
                             {"small_q_min", cert.small_q.min},
                             {"leaves", cert.leaf_cases().size()},
                             {"distinct_leaves", cert.distinct_leaves},
                             {"floors", cert.floors_in_leaves()},
                             {"bound", cert.bound},
                             {"verdict", verdict}};
      if (cert.witness)
        j["witness"] = {{"q", cert.witness->q}, {"point", cert.witness->point}, {"value", cert.witness->value}};
      out << j.dump() << '\n';
      break;
    }
  }
  return cert.pass ? kExitOk : kExitFailure;
}

inline int cmd_oracle(const std::string& name, const std::string& spec_path, std::int64_t max_m, Format format,
                      std::ostream& out, std::ostream& err) {
  auto inst = detail::resolve_instance(name, spec_path, err);
  if (!inst) return kExitUsage;
  if (max_m < 0) {
    err << "error: --max-m must be >= 0\n";
    return kExitUsage;
  }
  std::map<std::string, Interval> ranges;
  std::string ranges_text;
  for (const auto& v : inst->spec.variables) {
    ranges[v] = {0, max_m};
    ranges_text += (ranges_text.empty() ? "" : " ") + v + "=[0," + std::to_string(max_m) + "]";
  }
  floorcert::OracleReport report;
  try {
    report = floorcert::oracle_membership(inst->spec, ranges);
  } catch (const floorcert::RegionInconsistency& e) {
    err << "region inconsistency at " << floorcert::assignment_text(e.point()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
  constexpr std::size_t kShown = 10;
  switch (format) {
    case Format::Table:
      out << "instance    " << inst->name << '\n'
          << "ranges      " << ranges_text << '\n'
          << "points      " << report.points_checked << '\n'
          << "violations  " << report.violations.size() << '\n';
      for (std::size_t v = 0; v < std::min(kShown, report.violations.size()); ++v)
        out << "witness     " << floorcert::assignment_text(report.violations[v].point) << " value "
            << to_string(report.violations[v].value) << '\n';
      break;
    case Format::Csv:
      out << "instance,ranges,points,violations\n"
          << inst->name << ',' << ranges_text << ',' << report.points_checked << ','
          << report.violations.size() << '\n';
      break;
    case Format::Json: {
      detail::ordered_json w = detail::ordered_json::array();
      for (std::size_t v = 0; v < std::min(kShown, report.violations.size()); ++v)
        w.push_back(detail::ordered_json{{"point", report.violations[v].point},
                                         {"value", to_string(report.violations[v].value)}});
      out << detail::ordered_json{{"instance", inst->name},
                                  {"ranges", ranges_text},
                                  {"points", report.points_checked},
                                  {"violations", report.violations.size()},
                                  {"witnesses", w}}
                 .dump()
          << '\n';
      break;
    }
  }
  return report.ok() ? kExitOk : kExitFailure;
}

inline int cmd_verify_certificate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto check = floorcert::check_certificate_text(text);
  if (!check.ok) {
    out << "rejected: " << check.message << '\n';
    return kExitFailure;
  }
  out << check.message << " (" << check.leaves << " leaves, bound " << check.bound << ")\n";
  return check.message.ends_with("pass") ? kExitOk : kExitFailure;
}

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computation and verification for the integer-valued polynomials P_m(x)", "ivpoly"};
  app.require_subcommand(1);

  std::string format_name = "table";
  unsigned jobs = 1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };

  std::int64_t max_m = 10;
  auto* dmatrix = app.add_subcommand("dmatrix", "Print the coefficient matrix d(m,k), 0 <= m,k <= max-m");
  dmatrix->add_option("--max-m", max_m, "Largest m")->capture_default_str();
  common(dmatrix);

  std::int64_t eval_m = 0, eval_x = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate P_m(x) exactly");
  eval->add_option("m", eval_m, "Index m >= 0")->required();
  eval->add_option("x", eval_x, "Integer argument")->required();
  common(eval);

  std::string suite;
  std::optional<std::int64_t> check_max_m;
  auto* check = app.add_subcommand("check", "Verify identities and invariants over finite ranges");
  check->add_option("suite", suite, "relations | integrality | basis | all")->required();
  check->add_option("--max-m", check_max_m, "Replace every default range bound on m");
  common(check);

  std::string instance, spec_path, emit_path;
  std::vector<std::string> order;
  std::int64_t small_q_max = 17;
  auto* certify = app.add_subcommand("certify", "Run the floor-sum certifier on a factorial ratio");
  certify->add_option("instance", instance, "Builtin: frac1-diag | frac1-general | frac2");
  certify->add_option("--spec", spec_path, "Spec file in the factorial-ratio DSL");
  certify->add_option("--order", order, "Elimination order, comma separated");
  certify->add_option("--small-q-max", small_q_max, "Exhaustive sweep over odd q < this")->capture_default_str();
  certify->add_option("--emit-certificate", emit_path, "Write the certificate text here");
  common(certify);

  std::int64_t oracle_max = 60;
  auto* oracle = app.add_subcommand("oracle", "Brute-force Z[1/2] membership of a factorial ratio");
  oracle->add_option("instance", instance, "Builtin: frac1-diag | frac1-general | frac2");
  oracle->add_option("--spec", spec_path, "Spec file in the factorial-ratio DSL");
  oracle->add_option("--max-m", oracle_max, "Every variable ranges over [0, max-m]")->capture_default_str();
  common(oracle);

  std::string cert_path;
  auto* verify = app.add_subcommand("verify-certificate", "Re-check an emitted certificate");
  verify->add_option("file", cert_path, "Certificate text")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const Format format = detail::parse_format(format_name);
  try {
    if (*dmatrix) return cmd_dmatrix(max_m, format, jobs, out, err);
    if (*eval) return cmd_eval(eval_m, eval_x, format, out, err);
    if (*check) return cmd_check(suite, check_max_m, format, jobs, out, err);
    if (*certify)
      return cmd_certify(instance, spec_path, order, small_q_max, emit_path, format, jobs, out, err);
    if (*oracle) return cmd_oracle(instance, spec_path, oracle_max, format, out, err);
    if (*verify) return cmd_verify_certificate(cert_path, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ivpoly::cli
