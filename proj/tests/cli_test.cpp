#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "lexopt/cli.hpp"

namespace lexopt::cli {
namespace {

using nlohmann::json;

Outcome call(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
  return run(args, env);
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

TEST(Cli, SolveSymmetricCase) {
  const auto o = call({"solve", "--alpha", "0.5", "--beta", "0.5", "--p1", "1", "--p2", "1",
                       "--P_C", "2"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["result"]["L_C_star"].get<double>(), 1);
  EXPECT_EQ(j["result"]["R_B_star"].get<double>(), 1);
  EXPECT_EQ(j["result"]["lambda"].get<double>(), 0.5);
  EXPECT_EQ(j["result"]["U_star"].get<double>(), 1);
  EXPECT_EQ(j["second_order"].size(), 3u);
}

TEST(Cli, BargainFromFlags) {
  const auto o = call({"bargain", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "10",
                       "--C_b=4"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_EQ(json::parse(o.out)["result"]["R_B"].get<double>(), 44);
}

TEST(Cli, InvalidFieldExitsOneAndNamesIt) {
  auto o = call({"bargain", "--p", "1.5", "--W_B", "100", "--S_B", "60", "--C_a", "10",
                 "--C_b", "4"});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("'p'"), std::string::npos);
  EXPECT_TRUE(o.out.empty());

  o = call({"solve", "--alpha", "0.5", "--beta", "0.5", "--P_C", "2", "--gamma", "1"});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("'gamma'"), std::string::npos);

  o = call({"solve", "--alpha", "0.5", "--beta", "0.5"});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("'P_C'"), std::string::npos);

  o = call({"solve", "--alpha", "\"high\"", "--beta", "0.5", "--P_C", "2"});
  EXPECT_EQ(o.exit_code, 1);
}

TEST(Cli, UsageErrorsExit64) {
  EXPECT_EQ(call({}).exit_code, 64);
  EXPECT_EQ(call({"frobnicate"}).exit_code, 64);
  EXPECT_EQ(call({"solve", "--format", "xml"}).exit_code, 64);
  EXPECT_EQ(call({"solve", "--alpha"}).exit_code, 64);
  EXPECT_EQ(call({"solve", "stray"}).exit_code, 64);
  // seed is required iff the command simulates
  EXPECT_EQ(call({"sweep"}).exit_code, 64);
  EXPECT_EQ(call({"solve", "--seed", "3", "--alpha", "1", "--beta", "1", "--P_C", "1"}).exit_code,
            64);
  EXPECT_EQ(call({"simulate", "--ticks", "2"}, "abc").exit_code, 64);
}

TEST(Cli, EnvironmentSeedIsAFallback) {
  const auto a = call({"simulate", "--ticks", "3", "--stochastic", "true"}, "17");
  const auto b = call({"simulate", "--ticks", "3", "--stochastic", "true", "--seed", "17"}, "99");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  ASSERT_EQ(b.exit_code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["seed"].get<std::uint64_t>(), 17u);
}

TEST(Cli, ConfigFileWithInlineOverride) {
  const std::string path = ::testing::TempDir() + "lexopt_solve.json";
  {
    std::ofstream f(path);
    f << R"({"alpha": 2, "beta": 1, "p1": 1, "p2": 1, "P_C": 6})";
  }
  auto o = call({"solve", "--config", path});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_EQ(json::parse(o.out)["result"]["U_star"].get<double>(), 32);
  EXPECT_TRUE(o.err.empty());

  o = call({"solve", "--config", path, "--P_C", "12"});
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(json::parse(o.out)["result"]["L_C_star"].get<double>(), 8);
  EXPECT_NE(o.err.find("--P_C overrides"), std::string::npos);

  o = call({"solve", "--config", path + ".missing"});
  EXPECT_EQ(o.exit_code, 1);
  std::remove(path.c_str());
}

TEST(Cli, SweepCsvContract) {
  const auto o = call({"sweep", "--seed", "1", "--format", "csv", "--ticks", "5", "--C_a_grid",
                       "[0, 20, 40, 60, 80]"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_EQ(o.out.rfind("# lexopt ", 0), 0u);
  EXPECT_EQ(o.out.find('\r'), std::string::npos);
  const auto lines = data_lines(o.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "C_a,aggregate_trials,settlement_rate,welfare");
  EXPECT_EQ(lines[1].rfind("0,", 0), 0u);
  EXPECT_NE(o.out.find("# argmax_welfare_row="), std::string::npos);
}

TEST(Cli, IdenticalInvocationsAreByteIdentical) {
  const std::vector<std::string> args{"sweep", "--seed", "5", "--ticks", "4", "--stochastic",
                                      "true", "--format", "csv"};
  EXPECT_EQ(call(args).out, call(args).out);
}

TEST(Cli, JsonOutputsReparseWithExpectedShape) {
  const std::vector<std::vector<std::string>> invocations{
      {"bargain", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "10", "--C_b", "4"},
      {"classify", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "50", "--C_b", "1",
       "--theta_a", "10", "--theta_b", "5"},
      {"solve", "--alpha", "2", "--beta", "1", "--P_C", "6"},
      {"hessian", "--alpha", "2", "--beta", "2", "--P_C", "4"},
      {"phi", "--C_b", "1", "--rates", "[[0.2,0.3]]", "--L", "[-5]", "--with_fixed", "true",
       "--R_B", "44"},
      {"alpha-search", "--alpha_grid", "[0.25,0.5,0.75]", "--beta", "0.5", "--P_C", "2"},
      {"comply", "--utilities", R"({"a":3,"b":5})", "--allowed", R"(["a"])", "--margin", "0.01"},
      {"simulate", "--seed", "1", "--ticks", "3"},
      {"sweep", "--seed", "1", "--ticks", "3", "--C_a_grid", "[10, 70]"},
  };
  for (const auto& args : invocations) {
    const auto o = call(args);
    ASSERT_EQ(o.exit_code, 0) << args[0] << ": " << o.err;
    const auto j = json::parse(o.out);
    EXPECT_EQ(j["command"], args[0]);
    EXPECT_EQ(j["lexopt_version"], std::string(kVersion));
  }
}

TEST(Cli, ClassifyReportsSettle) {
  const auto o = call({"classify", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "50",
                       "--C_b", "1", "--theta_a", "10", "--theta_b", "5"});
  const auto j = json::parse(o.out)["result"];
  EXPECT_EQ(j["regime"], "LowCb_HighCa");
  EXPECT_EQ(j["decision"], "Settle");
}

TEST(Cli, ClassifyDefaultThresholdsNeedPositiveBenefit) {
  const auto o = call({"classify", "--p", "0", "--W_B", "0", "--S_B", "0", "--C_a", "5",
                       "--C_b", "1"});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("theta_a"), std::string::npos);
}

TEST(Cli, HessianReportsVariantDisagreement) {
  const auto j = json::parse(call({"hessian", "--alpha", "2", "--beta", "2", "--P_C", "4"}).out);
  EXPECT_TRUE(j["variants_disagree"].get<bool>());
  EXPECT_EQ(j["variants"][0]["verdict"], "LocalMax");
  EXPECT_EQ(j["variants"][1]["verdict"], "LocalMin");
  EXPECT_EQ(j["variants"][2]["verdict"], "LocalMax");
}

TEST(Cli, PhiWiresCaseIntoBounds) {
  auto o = call({"phi", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "10", "--C_b",
                 "4", "--rates", "[[0.2,0.2],[0.3,0.3]]", "--L", "[5,-5]"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  auto r = json::parse(o.out)["result"];
  EXPECT_EQ(r["R_B"].get<double>(), 44);
  EXPECT_EQ(r["phi_total"].get<double>(), 2.5);
  EXPECT_TRUE(r["admissible"].get<bool>());
  EXPECT_TRUE(r["within_budget"].get<bool>());

  o = call({"phi", "--p", "0.5", "--W_B", "100", "--S_B", "60", "--C_a", "10", "--R_B", "3",
            "--rates", "[[0.2,0.2]]", "--L", "[5]"});
  EXPECT_EQ(o.exit_code, 1);

  o = call({"phi", "--rates", "[[0.2,0.2]]", "--L", "[5, 1]"});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("'L'"), std::string::npos);
}

TEST(Cli, AlphaSearchEmptyAdmissibleIsStructuredSuccess) {
  const auto o = call({"alpha-search", "--alpha_grid", "[1.5, 2, 3]", "--beta", "1.5", "--P_C",
                       "2"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_TRUE(j["alpha_star"].is_null());
  EXPECT_TRUE(j["U_star_final"].is_null());
  EXPECT_EQ(j["candidates"].size(), 3u);
}

TEST(Cli, AlphaSearchCsvHasOneRowPerCandidate) {
  const auto o = call({"alpha-search", "--format", "csv", "--alpha_grid", "[0.25, 0.5, 0.75]",
                       "--beta", "0.5", "--P_C", "2"});
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(data_lines(o.out).size(), 4u);
}

TEST(Cli, ComplyReportsPenalty) {
  const auto o = call({"comply", "--utilities", R"({"ok":3,"bad":5})", "--allowed", R"(["ok"])",
                       "--margin", "0.01"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto r = json::parse(o.out)["result"];
  EXPECT_NEAR(r["penalty"].get<double>(), 2.01, 1e-12);
  EXPECT_EQ(r["post_penalty_best"], "ok");

  EXPECT_EQ(call({"comply", "--utilities", R"({"ok":3})", "--allowed", R"(["ok"])"}).exit_code, 1);
}

TEST(Cli, NumbersRoundTripLosslessly) {
  const auto o = call({"solve", "--alpha", "0.3", "--beta", "1.7", "--p1", "3.1", "--p2", "0.7",
                       "--P_C", "13"});
  const auto j = json::parse(o.out)["result"];
  const auto s = solve_closed_form({0.3, 1.7, 3.1, 0.7, 13});
  EXPECT_EQ(j["L_C_star"].get<double>(), s.L_C_star);
  EXPECT_EQ(j["U_star"].get<double>(), s.U_star);

  const auto csv = call({"solve", "--format", "csv", "--alpha", "0.3", "--beta", "1.7", "--p1",
                         "3.1", "--p2", "0.7", "--P_C", "13"});
  const auto lines = data_lines(csv.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(std::stod(lines[1].substr(0, lines[1].find(','))), s.L_C_star);
}

}  // namespace
}  // namespace lexopt::cli
