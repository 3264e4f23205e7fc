#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace lqk {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun lqk_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return testing::problem_dir() + "/" + name; }

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lqk_cli_test_" + name)).string();
}

TEST(CliSolve, BothMethodsOnP1) {
  const std::string csv = temp_path("p1.csv");
  const CliRun r = lqk_cli({"solve", data("p1.json"), "--x0", "[1]", "--method", "both", "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.5, 1e-8);
  EXPECT_LE(j["gap"].get<double>(), 1e-5);
  EXPECT_EQ(j["method"], "both");
  EXPECT_EQ(j["settings"]["steps"], 4000);

  std::ifstream in(csv);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string header;
  const auto rows = read_csv(buffer.str(), &header);
  EXPECT_EQ(header, "t,x_1,u_1");
  ASSERT_EQ(rows.size(), 4001u);
  EXPECT_NEAR(rows.back()[1], 0.5, 1e-8);
  EXPECT_NEAR(rows[100][2], -0.5, 1e-8);
  std::remove(csv.c_str());
}

TEST(CliSolve, MultipointRendezvous) {
  const CliRun r = lqk_cli({"solve", data("p1.json"), "--method", "multipoint", "--constraints", "[[0,[0]],[1,[1]]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-8);
  EXPECT_NEAR(j["covectors"][0]["p"][0].get<double>(), -1.0, 1e-8);
  EXPECT_NEAR(j["covectors"][1]["p"][0].get<double>(), 2.0, 1e-8);
}

TEST(CliSolve, MissingX0IsAnInputError) {
  const std::string path = temp_path("nox0.json");
  std::ofstream(path) << R"({"state_dim": 1, "input_dim": 1, "t0": 0, "T": 1, "A": 0, "B": 1, "Q": 0, "R": 1, "J_T": 1})";
  const CliRun r = lqk_cli({"solve", path, "--method", "kernel"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("x0"), std::string::npos);
  const CliRun m = lqk_cli({"solve", path, "--method", "multipoint"});
  EXPECT_EQ(m.code, 2);
  EXPECT_NE(m.err.find("constraints"), std::string::npos);
  std::remove(path.c_str());
}

TEST(CliSolve, BadArguments) {
  EXPECT_EQ(lqk_cli({"solve", data("p1.json"), "--method", "magic"}).code, 2);
  EXPECT_EQ(lqk_cli({"solve", data("p1.json"), "--x0", "[1,2]"}).code, 2);
  EXPECT_EQ(lqk_cli({"solve", "/nonexistent.json", "--x0", "1"}).code, 2);
  EXPECT_EQ(lqk_cli({}).code, 2);
  EXPECT_EQ(lqk_cli({"--help"}).code, 0);
}

TEST(CliRiccati, P1AndP2) {
  const CliRun r = lqk_cli({"riccati", data("p1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = read_csv(r.out, &header);
  EXPECT_EQ(header, "t,J_11,M_11,defect");
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_NEAR(rows.front()[1], 0.5, 1e-8);
  EXPECT_NEAR(rows.front()[2], 2.0, 1e-8);
  EXPECT_LE(rows.front()[3], 1e-8);

  const auto p2 = read_csv(lqk_cli({"riccati", data("p2.json"), "--steps", "100"}).out, &header);
  EXPECT_EQ(p2.size(), 101u);
  for (const auto& row : p2) EXPECT_NEAR(row[1], 1.0, 1e-12);
}

TEST(CliRiccati, FrozenProblemKeepsTerminalWeight) {
  const std::string path = temp_path("frozen.json");
  std::ofstream(path) << R"({"state_dim": 2, "input_dim": 1, "t0": 0, "T": 1, "A": [[0,0],[0,0]],
    "B": [[0],[0]], "Q": [[0,0],[0,0]], "R": 1, "J_T": [[2,1],[1,3]]})";
  std::string header;
  const auto rows = read_csv(lqk_cli({"riccati", path, "--steps", "20"}).out, &header);
  EXPECT_EQ(header, "t,J_11,J_12,J_21,J_22,M_11,M_12,M_21,M_22,defect");
  for (const auto& row : rows) {
    EXPECT_EQ(row[1], 2.0);
    EXPECT_EQ(row[2], 1.0);
    EXPECT_EQ(row[4], 3.0);
  }
  std::remove(path.c_str());
}

TEST(CliKernel, P2GridAndSymmetry) {
  const CliRun r = lqk_cli({"kernel", data("p2.json"), "--grid", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = read_csv(r.out, &header);
  EXPECT_EQ(header, "s,t,K_11");
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[2][0], 0.0);
  EXPECT_EQ(rows[2][1], 1.0);
  EXPECT_NEAR(rows[2][2], 0.367879, 1e-6);
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      if (a[0] == b[1] && a[1] == b[0]) EXPECT_NEAR(a[2], b[2], 1e-8);
    }
  }
  const auto ric = read_csv(lqk_cli({"riccati", data("p2.json")}).out, &header);
  EXPECT_NEAR(rows[0][2], ric.front()[2], 1e-8);
}

TEST(CliKernel, P1Entry) {
  std::string header;
  const auto rows = read_csv(lqk_cli({"kernel", data("p1.json"), "--grid", "5"}).out, &header);
  bool found = false;
  for (const auto& row : rows) {
    if (row[0] == 0.5 && row[1] == 0.25) {
      EXPECT_NEAR(row[2], 1.5, 1e-6);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(CliVerify, P1PassesDeterministically) {
  const CliRun a = lqk_cli({"verify", data("p1.json"), "--seed", "42", "--steps", "1000"});
  const CliRun b = lqk_cli({"verify", data("p1.json"), "--seed", "42", "--steps", "1000"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["status"], "pass");
}

TEST(CliVerify, ZeroTerminalWeightIsRejected) {
  const std::string path = temp_path("jt0.json");
  std::ofstream(path) << R"({"state_dim": 1, "input_dim": 1, "t0": 0, "T": 1, "A": 0, "B": 1, "Q": 0, "R": 1, "J_T": 0})";
  const CliRun r = lqk_cli({"verify", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("J_T not positive definite"), std::string::npos);
  std::remove(path.c_str());
}

TEST(CliVerify, TightToleranceFailsWithExitOne) {
  const CliRun r = lqk_cli({"verify", data("p2.json"), "--steps", "400", "--tolerances", R"({"oracle_agreement": 1e-300})"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "fail");
  EXPECT_EQ(lqk_cli({"verify", data("p2.json"), "--tolerances", R"({"nope": 1})"}).code, 2);
}

TEST(CliVerify, CoarseStepsGiveWellFormedReport) {
  const CliRun r = lqk_cli({"verify", data("double_integrator.json"), "--steps", "10", "--oracle-steps", "10"});
  EXPECT_TRUE(r.code == 0 || r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["checks"][1]["name"], "kernel_diagonal_inverse");
  EXPECT_TRUE(j["checks"][1]["defect"].is_number());
}

TEST(CliCompare, P1P2AndZero) {
  const auto p1 = nlohmann::json::parse(lqk_cli({"compare", data("p1.json"), "--x0", "[1]"}).out);
  EXPECT_NEAR(p1["extrapolated"].get<double>(), p1["value_kernel"].get<double>(), 1e-4);
  EXPECT_NEAR(p1["value_kernel"].get<double>(), 0.5, 1e-8);
  for (const char* key : {"value_kernel", "value_feedback", "value_oracle_h", "value_oracle_h2", "extrapolated"}) {
    EXPECT_TRUE(p1.contains(key)) << key;
  }
  EXPECT_DOUBLE_EQ(p1["extrapolated"].get<double>(),
                   2 * p1["value_oracle_h2"].get<double>() - p1["value_oracle_h"].get<double>());

  const auto p2 = nlohmann::json::parse(lqk_cli({"compare", data("p2.json"), "--x0", "1"}).out);
  EXPECT_NEAR(p2["value_kernel"].get<double>(), 1.0, 1e-8);

  const auto zero = nlohmann::json::parse(lqk_cli({"compare", data("p2.json"), "--x0", "[0]"}).out);
  for (const char* key : {"value_kernel", "value_feedback", "value_oracle_h", "value_oracle_h2", "extrapolated"}) {
    EXPECT_EQ(zero[key].get<double>(), 0.0) << key;
  }
}

}  // namespace
}  // namespace lqk
