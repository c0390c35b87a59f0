#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using ginovl::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream is(csv);
  std::size_t rows = 0;
  bool header = false;
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GridParsing) {
  EXPECT_EQ(ginovl::cli::parse_grid("0,0.5,1").size(), 3u);
  const auto g = ginovl::cli::parse_grid("log:1e-2:1e4:64");
  ASSERT_EQ(g.size(), 64u);
  EXPECT_NEAR(g.front(), 1e-2, 1e-16);
  EXPECT_NEAR(g.back(), 1e4, 1e-9);
  EXPECT_EQ(ginovl::cli::parse_grid("lin:0:1:5")[2], 0.5);
}

TEST(Cli, AnalyticJpdRowCount) {
  const auto r = run({"analytic", "--ensemble", "real", "--jpd", "--n", "6", "--lambda", "0.5", "--t-grid",
                      "log:1e-2:1e4:64"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(r.out), 64u);
  EXPECT_NE(r.out.find("n,beta,lambda_or_abs_z,t,density"), std::string::npos);
  EXPECT_NE(r.out.find("# config_hash: "), std::string::npos);
}

TEST(Cli, ByteIdenticalRepeats) {
  const std::vector<std::string> args{"sample", "--beta", "2", "--n", "4", "--matrices", "20", "--seed", "9",
                                      "--format", "json"};
  const auto a = run(args);
  auto with_threads = args;
  with_threads.insert(with_threads.end(), {"--threads", "3"});
  const auto b = run(with_threads);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UnknownFlagIsValidationFailure) {
  const auto r = run({"analytic", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BadDomainIsValidationFailure) {
  EXPECT_EQ(run({"density", "--ensemble", "real", "--n", "1", "--lambda", "0"}).code, 1);
}

TEST(Cli, EmptyWindowIsReported) {
  const auto r = run({"compare", "--beta", "1", "--n", "4", "--matrices", "20", "--window", "interval:10:11"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, CompareEmitsReport) {
  const auto r = run({"compare", "--beta", "2", "--n", "6", "--matrices", "400", "--window", "annulus:0:0.8",
                      "--format", "json", "--seed", "3"});
  ASSERT_TRUE(r.code == 0 || r.code == 2) << r.err;
  EXPECT_NE(r.out.find("\"statistic_value\""), std::string::npos);
  EXPECT_NE(r.out.find("\"ginovl.report/1\""), std::string::npos);
}

TEST(Cli, DetratioColumns) {
  const auto r = run({"detratio", "--beta", "1", "--L", "2", "--n", "4", "--lambda", "0.7", "--p", "1", "--mc",
                      "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("closed,mc_mean,mc_stderr,z_score"), std::string::npos);
  EXPECT_EQ(data_rows(r.out), 1u);
}

TEST(Cli, VerifyMetadataReplays) {
  const std::string path = ::testing::TempDir() + "ginovl_cli_verify.csv";
  const auto w = run({"analytic", "--ensemble", "complex", "--n", "5", "--abs-z", "0,1", "--t-grid", "lin:0.5:3:4",
                      "--out", path});
  ASSERT_EQ(w.code, 0) << w.err;
  const auto v = run({"--verify-metadata", path});
  EXPECT_EQ(v.code, 0) << v.err;

  std::string content = slurp(path);
  const auto pos = content.find("density\n");
  ASSERT_NE(pos, std::string::npos);
  content[content.size() - 2] = content[content.size() - 2] == '1' ? '2' : '1';
  std::ofstream(path) << content;
  EXPECT_EQ(run({"--verify-metadata", path}).code, 1);

  std::string tampered = slurp(path);
  const auto h = tampered.find("# config: analytic");
  tampered.replace(h, 18, "# config: analyt1c");
  std::ofstream(path) << tampered;
  EXPECT_EQ(run({"--verify-metadata", path}).code, 1);
  std::remove(path.c_str());
}

TEST(Cli, PlotScript) {
  const std::string data = ::testing::TempDir() + "ginovl_plot.csv";
  const std::string script = ::testing::TempDir() + "ginovl_plot.gp";
  const auto r = run({"density", "--ensemble", "complex", "--edge", "--delta", "lin:-2:2:9", "--out", data,
                      "--plot-script", script});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(script).find("plot '" + data + "'"), std::string::npos);
  std::remove(data.c_str());
  std::remove(script.c_str());
}

TEST(Cli, Selftest) {
  const auto r = run({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}
