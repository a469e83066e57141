#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace clg;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "clg");
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, Validate) {
  const CliRun r = run({"validate", testkit::fixture("netA.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok\n");
  EXPECT_EQ(run({"validate", "/nonexistent.json"}).code, 2);
}

TEST(Cli, CompileStats) {
  const CliRun r = run({"compile", testkit::fixture("netA.json"), "--stats"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "network,|X|,|C|,max_sC,total_sC\nnetA,7,4,8,15\n");
}

TEST(Cli, QueryMatchesOracle) {
  const std::string f = testkit::fixture("netC.json");
  const CliRun q = run({"query", f, "-e", "X2=b", "-t", "Y2"});
  const CliRun o = run({"oracle", f, "-e", "X2=b", "-t", "Y2"});
  ASSERT_EQ(o.code, 0) << o.err;
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(q.out, o.out);
}

TEST(Cli, UsageAndDataErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"query", testkit::fixture("netB.json"), "-e", "Nope=1"}).code, 2);
  EXPECT_EQ(run({"query", testkit::fixture("netB.json"), "-t", "Nope"}).code, 2);
}

TEST(Cli, DegenerateEvidence) {
  const auto path = std::filesystem::temp_directory_path() / "clg_cli_degenerate.json";
  std::ofstream(path) << R"({"variables": [{"name": "Y", "kind": "continuous"}], "edges": [], "cpts": {},
                            "densities": {"Y": {"alpha": [1], "beta": [[]], "sigma2": [0]}}})";
  EXPECT_EQ(run({"query", path.string(), "-e", "Y=1"}).code, 3);
  EXPECT_EQ(run({"oracle", path.string(), "-e", "Y=1"}).code, 3);
  std::filesystem::remove(path);
}

TEST(Cli, GenWritesValidNetwork) {
  const auto path = std::filesystem::temp_directory_path() / "clg_cli_gen.json";
  EXPECT_EQ(run({"gen", "--n", "12", "--frac", "0.5", "--seed", "3", "-o", path.string()}).code, 0);
  EXPECT_EQ(run({"validate", path.string()}).code, 0);
  std::filesystem::remove(path);
}
