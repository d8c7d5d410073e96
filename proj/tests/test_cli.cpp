#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "widom/arc.hpp"
#include "widom/cli.hpp"

namespace {

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "widom");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = widom::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  for (auto& l : lines(text))
    if (!l.empty() && l[0] != '#') out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("capacity of an arc") {
  const auto r = invoke({"capacity", "--arc", "1.0"});
  CHECK(r.status == 0);
  const auto all = lines(r.out);
  REQUIRE(all.size() >= 4);
  CHECK(all[0] == "# widom 0.1.0");
  CHECK(all[1].rfind("# config {", 0) == 0);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "support,cap,method,converged_2m");
  CHECK(rows[1].find("0.479425538604203") != std::string::npos);
}

TEST_CASE("verify interval passes for p = 2") {
  const auto r = invoke({"verify", "interval", "--p", "2", "--n", "1..10"});
  CHECK(r.status == 0);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "n,widom_p,expected,error,converged_2m");
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].size() - 4) == "true");
  CHECK(r.out.find("# assertion widom-p n=10,pass,") != std::string::npos);
  CHECK(r.out.find("# 2m_agreement true") != std::string::npos);
}

TEST_CASE("json output") {
  const auto r = invoke({"widom", "--interval", "-2,2", "--p", "2", "--n", "1..3", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["version"] == "widom 0.1.0");
  CHECK(j["config"]["command"] == "widom");
  CHECK(j["config"]["m"] == 512);
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) {
    CHECK(std::abs(row["widom_p"].get<double>() - 2.0) < 1e-8);
    CHECK(row["lower_bound_ok"] == true);
    CHECK(row["improved_bound_ok"] == true);
    CHECK(row["converged_2m"] == true);
  }
  CHECK(j["assertions"].size() == 6);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> args{"verify", "bounds", "--count", "3", "--n", "1..2", "--m", "128"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const auto c = invoke({"verify", "bounds", "--count", "3", "--n", "1..2", "--m", "128", "--seed", "7"});
  CHECK(c.out != a.out);
}

TEST_CASE("arc rows follow the closed form") {
  const auto r = invoke({"arc", "--gamma", "1.5707963", "--n", "1..3", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  for (int n = 1; n <= 3; ++n) {
    const double w = j["rows"][n - 1]["widom2"].get<double>();
    CHECK(std::abs(w - widom::arc_widom_closed(1.5707963, n)) < 1e-13);
  }
  const double first = j["rows"][0]["widom2"].get<double>();
  CHECK(std::abs(first - 1.5) < 1e-7);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"capacity"}).status == 2);
  CHECK(invoke({"capacity", "--arc", "4.0"}).status == 2);
  CHECK(invoke({"widom", "--interval", "1,0"}).status == 2);
  CHECK(invoke({"widom", "--interval", "-1,1", "--p", "0.5"}).status == 2);
  CHECK(invoke({"widom", "--interval", "-1,1", "--m", "4"}).status == 2);
  CHECK(invoke({"widom", "--interval", "-1,1", "--n", "3..1"}).status == 2);
  CHECK(invoke({"widom", "--interval", "-1,1", "--circle"}).status == 2);
  CHECK(invoke({"widom", "--interval", "-1,1", "--format", "xml"}).status == 2);
  CHECK(invoke({"verify", "nothing"}).status == 2);
  CHECK(invoke({"entropy", "--interval", "-1,1"}).status == 2);
  CHECK(invoke({"reflectionless", "--T=-2,0,1", "--d", "1.5"}).status == 2);
  CHECK(invoke({"pullback", "--T=-2,0,1", "--R=-1.2,1"}).status == 2);
  const auto bad = invoke({"widom", "--interval", "1,0"});
  CHECK(bad.err.find("error:") != std::string::npos);
  CHECK(bad.out.empty());
}

TEST_CASE("failing assertions exit with 1") {
  const auto r = invoke({"verify", "interval", "--p", "2", "--n", "1..2", "--tol", "-1"});
  CHECK(r.status == 1);
  CHECK(r.err.find("failed: widom-p n=1") != std::string::npos);
  CHECK(r.out.find(",fail,") != std::string::npos);
}

TEST_CASE("unconverged results are flagged") {
  // degree 40 at m = 16 and 32 is far from resolved
  const auto r = invoke({"sharpness", "--eps", "0.1", "--degrees", "40", "--m", "16"});
  CHECK(r.out.find("# 2m_agreement unconverged") != std::string::npos);
  CHECK(r.out.find(",false\n") != std::string::npos);
}

TEST_CASE("output file") {
  const std::string path = "widom_cli_test_output.csv";
  const auto r = invoke({"capacity", "--interval", "-1,1", "-o", path});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("0.5,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("subcommands run end to end") {
  CHECK(invoke({"entropy", "--interval", "-2,2", "--weight", "2,0,1", "--m", "256"}).status == 0);
  CHECK(invoke({"verblunsky", "--gamma", "1.0,2.0", "--n", "1..8"}).status == 0);
  CHECK(invoke({"pullback", "--T=-1,0,2", "--n", "1..3", "--m", "256"}).status == 0);
  CHECK(invoke({"pullback", "--T=-2,0,1", "--R=0.5,1", "--n", "1..2", "--m", "256"}).status == 0);
  CHECK(invoke({"reflectionless", "--T=-2,0,1", "--d", "0.5", "--n", "1..2", "--m", "256"}).status == 0);
  CHECK(invoke({"saturate", "--Q=-1,0,2", "--m", "256"}).status == 0);
  CHECK(invoke({"saturate", "--Q", "0,0,0,1", "--variant", "circle", "--k", "1,2", "--m", "256"}).status == 0);
  CHECK(invoke({"verify", "arc-monotone", "--n", "1..60"}).status == 0);
  CHECK(invoke({"verify", "preimage-invariance", "--n", "1..2", "--m", "256"}).status == 0);
  CHECK(invoke({"verify", "circle-powers", "--n", "1..2", "--m", "256"}).status == 0);
  CHECK(invoke({"sharpness", "--eps", "1,0.3", "--degrees", "40,80", "--m", "256"}).status == 0);
}

TEST_CASE("run reports status without parsing") {
  widom::RunConfig config;
  config.command = "capacity";
  config.support = widom::SupportDescriptor::unit_circle();
  const auto outcome = widom::run(config);
  CHECK(outcome.status == 0);
  REQUIRE(outcome.table.rows.size() == 1);
  CHECK(outcome.table.rows[0][1].get<double>() == 1.0);
  CHECK(outcome.table.columns.back() == "converged_2m");

  config.command = "unknown";
  CHECK(widom::run(config).status == 2);
}
