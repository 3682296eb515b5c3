#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using bzfam::io::Json;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome bzcalc(std::vector<std::string> args) {
  args.insert(args.begin(), "bzcalc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = bzfam::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BZFAM_EXAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, SegDefaultsToStatistic) {
  const auto r = bzcalc({"seg", R"([{"start":0,"len":3},{"start":4,"len":2}])"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json().at("statistic"), 4);
}

TEST(Cli, SegClosureAndLeq) {
  const auto r = bzcalc({"seg", R"([{"start":0,"len":1},{"start":1,"len":1},{"start":2,"len":1}])",
                         "--closure", "--order", "--support", "--children", "--leq",
                         R"([{"start":0,"len":3}])"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j.at("closure").at("size"), 4);
  EXPECT_EQ(j.at("children").size(), 2u);
  EXPECT_EQ(j.at("support").size(), 3u);
  EXPECT_FALSE(j.at("leq").at("input_leq_other"));
  EXPECT_TRUE(j.at("leq").at("other_leq_input"));
  for (const auto& e : j.at("closure").at("edges")) EXPECT_GT(e.at("statistic_delta"), 0);
}

TEST(Cli, Dims) {
  const auto r = bzcalc({"dims", R"([{"start":0,"len":2},{"start":2,"len":1}])", "--p", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json().at("k1_dim"), "14");
  EXPECT_EQ(r.json().at("valuation_statistic"), 1);
}

TEST(Cli, DimsRejectsCompositeP) {
  EXPECT_EQ(bzcalc({"dims", R"([{"start":0,"len":2}])", "--p", "4"}).status, 1);
}

TEST(Cli, IdentityCheck) {
  const auto r = bzcalc({"identity-check", "--n-max", "5", "--q", "2,9,16"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.json().at("all_pass"));
  EXPECT_EQ(r.json().at("rows").size(), 15u);
  EXPECT_EQ(bzcalc({"identity-check", "--n-max", "40"}).status, 1);
  EXPECT_EQ(bzcalc({"identity-check", "--q", "6"}).status, 1);
}

TEST(Cli, Wd) {
  const auto r = bzcalc({"wd", R"({"segments":[{"line":"B","start":0,"len":3}],
                                   "lines":[{"line_id":"B","block_size":2,"inertial_label":"b"}]})"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json().at("nonzero_count"), 6);
  EXPECT_TRUE(r.json().at("match"));
  EXPECT_EQ(r.json().at("exp").size(), 6u);
}

TEST(Cli, FamilyCertified) {
  const auto r = bzcalc({"family", data("three_point.json"), "--seeds", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j.at("status"), "certified");
  EXPECT_EQ(j.at("X0"), Json::array({"a", "b"}));
  EXPECT_EQ(j.at("unit_seeds").size(), 4u);
  EXPECT_TRUE(j.at("seed_independent"));
}

TEST(Cli, FamilyIsDeterministic) {
  const auto a = bzcalc({"family", data("planted.json")});
  const auto b = bzcalc({"family", data("planted.json")});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, FamilyViolationExitsTwo) {
  const auto r = bzcalc({"family", data("planted.json"), "--x0", "a"});
  EXPECT_EQ(r.status, 2);
  const auto j = r.json();
  EXPECT_EQ(j.at("status"), "violation");
  bool monotonicity = false;
  for (const auto& v : j.at("violations")) monotonicity |= v.at("kind") == "monotonicity";
  EXPECT_TRUE(monotonicity);
}

TEST(Cli, FamilyWritesReport) {
  const std::string path = ::testing::TempDir() + "bzcalc_report.json";
  const auto r = bzcalc({"family", data("three_point.json"), "--report", path});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(path);
  EXPECT_EQ(Json::parse(in).at("X0"), Json::array({"a", "b"}));
  std::remove(path.c_str());
}

TEST(Cli, DomainErrorsExitOne) {
  EXPECT_EQ(bzcalc({"seg", "{not json"}).status, 1);
  EXPECT_EQ(bzcalc({"seg", "/nonexistent/file.json"}).status, 1);
  EXPECT_EQ(bzcalc({"family", data("three_point.json"), "--x0", "zz"}).status, 1);
  EXPECT_EQ(bzcalc({"nosuchcommand"}).status, 1);
  EXPECT_EQ(bzcalc({}).status, 1);
}

TEST(Cli, Selftest) {
  const auto r = bzcalc({"selftest"});
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(r.json().at("all_pass"));
}
