#include "app.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ivpoly::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("ivpoly_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++)))
                .string();
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

TEST(CliDmatrix, CsvMatchesGolden) {
  const Result r = invoke({"dmatrix", "--max-m", "10", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 11u);
  for (std::size_t m = 0; m < 11; ++m) EXPECT_EQ(rows[m], golden::kDMatrixRows[m]);
}

TEST(CliDmatrix, SingleEntry) {
  const Result r = invoke({"dmatrix", "--max-m", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3/2\n");
}

TEST(CliDmatrix, JsonRoundTrips) {
  const Result r = invoke({"dmatrix", "--max-m", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["max_m"], 3);
  EXPECT_EQ(j["d"][0][0], "3/2");
  EXPECT_EQ(j["d"][3][3], "24");
}

TEST(CliDmatrix, NegativeIsUsageError) {
  EXPECT_EQ(invoke({"dmatrix", "--max-m", "-1"}).code, 2);
  EXPECT_EQ(invoke({"dmatrix", "--max-m", "ten"}).code, 2);
  EXPECT_EQ(invoke({"dmatrix", "--format", "xml"}).code, 2);
}

TEST(CliEval, Values) {
  EXPECT_EQ(invoke({"eval", "2", "2"}).out, "6\n");
  EXPECT_EQ(invoke({"eval", "5", "2"}).out, "0\n");
  EXPECT_EQ(invoke({"eval", "1", "2"}).out, "-6\n");
  EXPECT_EQ(invoke({"eval", "1", "-2"}).out, "-6\n");
  EXPECT_EQ(invoke({"eval", "-1", "2"}).code, 2);
  EXPECT_EQ(invoke({"eval", "3"}).code, 2);
  const auto j = nlohmann::json::parse(invoke({"eval", "2", "2", "--format", "json"}).out);
  EXPECT_EQ(j["value"], "6");
}

TEST(CliCheck, SuitesPass) {
  EXPECT_EQ(invoke({"check", "relations", "--max-m", "12"}).code, 0);
  EXPECT_EQ(invoke({"check", "integrality", "--max-m", "12"}).code, 0);
  EXPECT_EQ(invoke({"check", "basis", "--max-m", "12", "--jobs", "2"}).code, 0);
}

TEST(CliCheck, UnknownSuite) {
  const Result r = invoke({"check", "everything"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown suite"), std::string::npos);
  EXPECT_EQ(invoke({"check"}).code, 2);
  EXPECT_EQ(invoke({"check", "basis", "--max-m", "-3"}).code, 2);
}

TEST(CliCheck, CsvAndJson) {
  const Result csv = invoke({"check", "basis", "--max-m", "5", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(lines(csv.out).front(), "check,ranges,points,failures,status");
  const auto j = nlohmann::json::parse(invoke({"check", "basis", "--max-m", "5", "--format", "json"}).out);
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["checks"].size(), 3u);
}

TEST(CliCertify, Builtins) {
  Result r = invoke({"certify", "frac1-diag"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict     pass"), std::string::npos);
  EXPECT_NE(r.out.find("bound       5"), std::string::npos);

  r = invoke({"certify", "frac2", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["bound"], 6);
  EXPECT_EQ(j["verdict"], "pass");
}

TEST(CliCertify, EmitAndVerifyCertificate) {
  TempFile cert("");
  ASSERT_EQ(invoke({"certify", "frac1-diag", "--emit-certificate", cert.path()}).code, 0);
  const Result r = invoke({"verify-certificate", cert.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("153 leaves"), std::string::npos);
}

TEST(CliCertify, OrderFlag) {
  EXPECT_EQ(invoke({"certify", "frac1-diag", "--order", "m,i"}).code, 0);
  EXPECT_EQ(invoke({"certify", "frac1-diag", "--order", "m"}).code, 2);
}

TEST(CliCertify, SpecFiles) {
  TempFile good(golden::kNegativeControlSpec);
  const Result r = invoke({"certify", "--spec", good.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("witness     q=3 m=1"), std::string::npos);

  TempFile bad("vars m\nnum 2m +\n");
  const Result b = invoke({"certify", "--spec", bad.path()});
  EXPECT_EQ(b.code, 2);
  EXPECT_NE(b.err.find(":2:9:"), std::string::npos);

  EXPECT_EQ(invoke({"certify", "--spec", "/nonexistent/file.frs"}).code, 2);
  EXPECT_EQ(invoke({"certify"}).code, 2);
  EXPECT_EQ(invoke({"certify", "frac2", "--spec", good.path()}).code, 2);
  EXPECT_EQ(invoke({"certify", "frac9"}).code, 2);
}

TEST(CliOracle, BuiltinsAndNegativeControl) {
  EXPECT_EQ(invoke({"oracle", "frac2", "--max-m", "20"}).code, 0);
  TempFile neg(golden::kNegativeControlSpec);
  const Result r = invoke({"oracle", "--spec", neg.path(), "--max-m", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("witness     m=1 value 2/3"), std::string::npos);
}

TEST(CliOracle, RegionInconsistencyIsFailure) {
  TempFile spec("vars m\nassume m >= 0\nnum m - 1\n");
  const Result r = invoke({"oracle", "--spec", spec.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("m=0"), std::string::npos);
}

TEST(CliGeneral, NoSubcommandAndHelp) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(CliGeneral, OutputIndependentOfJobs) {
  EXPECT_EQ(invoke({"certify", "frac1-general", "--jobs", "1"}).out,
            invoke({"certify", "frac1-general", "--jobs", "4"}).out);
  EXPECT_EQ(invoke({"dmatrix", "--max-m", "12", "--jobs", "1"}).out,
            invoke({"dmatrix", "--max-m", "12", "--jobs", "3"}).out);
}

}  // namespace
}  // namespace ivpoly::cli
