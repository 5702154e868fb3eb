#include <gtest/gtest.h>

#include "chipfire/cli.hpp"

using namespace chipfire;
using namespace chipfire::cli;

namespace {

std::string data(const std::string& name) { return std::string(CHIPFIRE_TEST_DATA) + "/" + name; }

RunConfig make(const std::string& command, const std::string& tree = "") {
  RunConfig rc;
  rc.command = command;
  rc.tree_path = tree.empty() ? "" : data(tree);
  return rc;
}

CommandOutput run(const RunConfig& rc) {
  std::string err;
  auto out = run_command(rc, err);
  if (out.exit_code != kExitOk) out.text = err;
  return out;
}

}  // namespace

TEST(Cli, CheckReportsBothSides) {
  auto rc = make("check", "p3.txt");
  rc.config = "1,2,3";
  auto out = run(rc);
  ASSERT_EQ(out.exit_code, kExitOk) << out.text;
  auto j = Json::parse(out.text);
  EXPECT_EQ(j["self_reachable"], true);
  EXPECT_EQ(j["agreement"], "agree");
  EXPECT_EQ(j["search"]["status"], "self-reachable");

  rc.config = "2,0,0";
  j = Json::parse(run(rc).text);
  EXPECT_EQ(j["self_reachable"], false);
  EXPECT_EQ(j["criterion"]["violating_subtree"], Json::parse("[2,3]"));
  EXPECT_EQ(j["criterion"]["min_slack"], -1);
  EXPECT_TRUE(j["search"]["firing_witness"].is_null());
}

TEST(Cli, CheckTextFormat) {
  auto rc = make("check", "p3.txt");
  rc.config = "2,0,0";
  rc.format = Format::Text;
  auto out = run(rc);
  EXPECT_NE(out.text.find("self-reachable: no"), std::string::npos);
  EXPECT_NE(out.text.find("violating subtree: 2,3"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
  auto rc = make("check", "bad_disconnected.txt");
  rc.config = "1,1,1";
  EXPECT_EQ(run(rc).exit_code, kExitUsage);
  rc = make("check", "p3.txt");
  rc.config = "1,2";
  EXPECT_EQ(run(rc).exit_code, kExitUsage);
  rc = make("check", "p3.txt");
  EXPECT_EQ(run(rc).exit_code, kExitUsage);  // no --config
  rc = make("check", "nope.txt");
  rc.config = "1";
  EXPECT_EQ(run(rc).exit_code, kExitUsage);
  EXPECT_EQ(run(make("frobnicate")).exit_code, kExitUsage);
  rc = make("count");
  rc.format = Format::Csv;
  rc.n_max = 500;
  EXPECT_EQ(run(rc).exit_code, kExitUsage);  // guarded
  rc = make("decompose", "p3.txt");
  rc.config = "1,2,3";
  rc.format = Format::Csv;
  EXPECT_EQ(run(rc).exit_code, kExitUsage);  // unsupported format
}

TEST(Cli, EnumerateAndVertices) {
  auto rc = make("enumerate", "p3.txt");
  rc.l = 2;
  auto j = Json::parse(run(rc).text);
  EXPECT_EQ(j["count"], 4);
  rc.t = 2;
  rc.l = 1;
  EXPECT_EQ(run(rc).exit_code, kExitUsage);  // empty below n-1

  rc = make("vertices", "p2.txt");
  rc.l = 1;
  j = Json::parse(run(rc).text);
  EXPECT_EQ(j["count"], 2);
  EXPECT_TRUE(j["vertices"][0]["about"].is_null());
  rc = make("vertices", "p3.txt");
  rc.l = 6;
  j = Json::parse(run(rc).text);
  EXPECT_EQ(j["count"], 5);
  EXPECT_EQ(j["vertices"][1]["config"], Json::parse("[0,6,0]"));
  EXPECT_EQ(j["vertices"][1]["about"], 2);
}

TEST(Cli, CountCsvHasFrozenRow) {
  auto out = run(make("count"));
  ASSERT_EQ(out.exit_code, kExitOk);
  EXPECT_EQ(out.text.rfind("l,n,count\n", 0), 0u);
  EXPECT_NE(out.text.find("\n9,10,512\n"), std::string::npos);
}

TEST(Cli, DecomposeGolden) {
  auto rc = make("decompose", "p3.txt");
  rc.config = "1,2,3";
  auto j = Json::parse(run(rc).text);
  std::map<std::string, std::string> weights;
  for (const auto& term : j["terms"]) weights[term["config"].dump()] = term["weight"];
  EXPECT_EQ(weights, (std::map<std::string, std::string>{{"[5,0,1]", "1/6"},
                                                         {"[1,0,5]", "1/6"},
                                                         {"[0,6,0]", "4/15"},
                                                         {"[0,1,5]", "2/5"}}));
}

TEST(Cli, IdpInfersL) {
  auto rc = make("idp", "p2.txt");
  rc.config = "1,1";
  rc.t = 2;
  auto j = Json::parse(run(rc).text);
  EXPECT_EQ(j["parts"].size(), 2u);
  rc.config = "1,2";
  EXPECT_EQ(run(rc).exit_code, kExitUsage);  // 3 chips, t = 2
}

TEST(Cli, CubeMap) {
  auto j = Json::parse(run(make("cubemap", "star4.txt")).text);
  EXPECT_EQ(j["det"], 1);
  EXPECT_EQ(j["cube_image"], true);
  j = Json::parse(run(make("cubemap", "single.txt")).text);
  EXPECT_EQ(j["det"], 1);
}

TEST(Cli, VerifySmall) {
  auto rc = make("verify");
  rc.n_max = 3;
  auto out = run(rc);
  ASSERT_EQ(out.exit_code, kExitOk) << out.text;
  auto j = Json::parse(out.text);
  EXPECT_EQ(j["passed"], true);
  EXPECT_GT(j["suites"].size(), 10u);
  rc.n_max = 12;
  EXPECT_EQ(run(rc).exit_code, kExitUsage);
}

TEST(Cli, OutputIsDeterministic) {
  auto rc = make("verify");
  rc.n_max = 4;
  rc.format = Format::Csv;
  auto a = run(rc);
  rc.jobs = 3;
  auto b = run(rc);
  EXPECT_EQ(a.text, b.text);
}

TEST(Cli, CacheKey) {
  auto rc = make("check", "p3.txt");
  rc.config = "1,2,3";
  Tree p3 = path_tree(3);
  auto k = cache_key(rc, p3);
  EXPECT_EQ(k.size(), 16u);
  rc.config = "1, 2,3";
  EXPECT_EQ(cache_key(rc, p3), k);  // normalized config
  rc.jobs = 4;
  EXPECT_EQ(cache_key(rc, p3), k);
  rc.config = "3,2,1";
  EXPECT_NE(cache_key(rc, p3), k);
  rc.config = "1,2,3";
  EXPECT_EQ(cache_key(rc, parse_tree("3\n2 1\n3 2\n")), k);  // same tree, other text
  rc.format = Format::Text;
  EXPECT_NE(cache_key(rc, p3), k);
  EXPECT_EQ(fnv1a(""), 1469598103934665603ULL);
}
