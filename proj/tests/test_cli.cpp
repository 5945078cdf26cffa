#include "hlmax/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hlmax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.status = hlmax::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(HLMAX_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / ("hlmax_test_" + name)).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VerifyTheoremCeilWithNegativeRange) {
  const auto r = run_cli({"verify", "--input", data("two_point_indicator.json"), "--alpha", "1/3", "--rounding", "ceil", "--claim", "theorem",
                          "--range", "-50:54"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "holds");
  EXPECT_EQ(j["numbers"]["var_f"], "4");
  EXPECT_LE(hlmax::Rational::parse(j["numbers"]["var_maximal"].get<std::string>()), hlmax::Rational(4));
}

TEST(Cli, VerifyPlateauFloorReportsViolation) {
  const auto r = run_cli({"verify", "--input", data("two_point_indicator.json"), "--alpha", "1/3", "--rounding", "floor", "--claim", "plateau"});
  ASSERT_EQ(r.status, 1) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "violated");
  bool at_two = false;
  for (const auto& w : j["witnesses"]) at_two = at_two || (w["m_prime"].is_null() && w["r"] == 2);
  EXPECT_TRUE(at_two);
}

TEST(Cli, EvalZeroFunction) {
  const auto r = run_cli({"eval", "--input", data("zero.json"), "--range", "-3:3"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 7u);
  for (const auto& p : j["points"]) EXPECT_EQ(p["value"], "0");
}

TEST(Cli, EvalCsvFormat) {
  const auto r = run_cli({"eval", "--input", data("two_point_indicator.json"), "--range", "0:4", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out,
            "site,value_numerator,value_denominator,decimal_approx\n"
            "0,1,1,1\n"
            "1,2,5,0.40000000000000002\n"
            "2,2,5,0.40000000000000002\n"
            "3,2,5,0.40000000000000002\n"
            "4,1,1,1\n");
}

TEST(Cli, InputErrorsExitTwo) {
  const auto bad = run_cli({"eval", "--input", data("malformed.json")});
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.err.find("values"), std::string::npos) << bad.err;
  EXPECT_EQ(run_cli({"eval", "--input", data("delta.json"), "--bogus"}).status, 2);
  EXPECT_EQ(run_cli({"eval", "--input", data("no_such_file.json")}).status, 2);
  EXPECT_EQ(run_cli({"eval", "--input", data("delta.json"), "--alpha", "x"}).status, 2);
  EXPECT_EQ(run_cli({"eval", "--input", data("delta.json"), "--alpha", "-1"}).status, 2);
  EXPECT_EQ(run_cli({"eval", "--input", data("delta.json"), "--range", "3:1"}).status, 2);
  EXPECT_EQ(run_cli({"verify", "--input", data("delta.json"), "--claim", "nonsense"}).status, 2);
  EXPECT_EQ(run_cli({"eval"}).status, 2);
  EXPECT_EQ(run_cli({}).status, 2);
}

TEST(Cli, VarReportsBothSides) {
  const auto r = run_cli({"var", "--input", data("delta.json"), "--alpha", "0", "--range", "-50:50"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["var_f"], "2");
  EXPECT_EQ(j["maximal"]["var_maximal"], "200/101");
}

TEST(Cli, StepFunctionVerifyAll) {
  const auto r = run_cli({"verify", "--input", data("two_boxes.json"), "--alpha", "1/2", "--claim", "all", "--grid", "-2:7:181"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  for (const auto& rep : j) EXPECT_EQ(rep["verdict"], "holds");
}

TEST(Cli, StepFunctionEvalGrid) {
  const auto r = run_cli({"eval", "--input", data("unit_box.json"), "--alpha", "1/3", "--grid", "0:2:5"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 5u);
  EXPECT_EQ(j["points"][1]["site"], "1/2");
  EXPECT_EQ(j["points"][1]["value"], "1");
  EXPECT_EQ(j["points"][4]["site"], "2");
  EXPECT_EQ(j["points"][4]["value"], "1/3");
}

TEST(Cli, WitnessExtremosPair) {
  const auto r = run_cli({"witness", "--input", data("two_point_indicator.json"), "--claim", "extremos", "--x", "2", "--y", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["witnesses"][0]["w"], 4);
  EXPECT_EQ(j["witnesses"][0]["z"], 2);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args = {"verify", "--input", data("two_point_indicator.json"), "--claim", "all", "--rounding", "floor"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
  const std::vector<std::string> search = {"search", "--seed", "5", "--count", "40", "--alphas", "1/3", "--roundings", "floor,ceil",
                                           "--claims", "plateau", "--margin", "10"};
  const auto a = run_cli(search), b = run_cli(search);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepWritesCorpusFile) {
  const std::string path = temp_path("sweep.jsonl");
  const auto r = run_cli({"sweep", "--max-length", "5", "--values", "0,1", "--alphas", "1/3", "--roundings", "floor", "--claims", "plateau",
                          "--margin", "10", "--shrink", "--output", path});
  EXPECT_EQ(r.status, 1) << r.err;
  const auto summary = nlohmann::json::parse(r.out);
  EXPECT_EQ(summary["candidates"], summary["visited"]);
  std::ifstream in(path);
  const auto records = hlmax::read_corpus(in);
  ASSERT_FALSE(records.empty());
  for (const auto& rec : records) {
    EXPECT_TRUE(rec.shrunk);
    EXPECT_TRUE(hlmax::recheck(rec).violated());
  }
  std::remove(path.c_str());
}

TEST(Cli, SweepBudgetRefusal) {
  const auto r = run_cli({"sweep", "--max-length", "6", "--budget", "5"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}

TEST(Cli, OutputFlagWritesReport) {
  const std::string path = temp_path("eval.json");
  const auto r = run_cli({"eval", "--input", data("delta.json"), "--range", "-1:1", "--output", path});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["points"].size(), 3u);
  std::remove(path.c_str());
}
