#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "widom/support.hpp"

namespace widom {

inline constexpr const char* kToolVersion = "widom 0.1.0";

struct RunConfig {
  std::string command;  ///< capacity, entropy, widom, arc, verblunsky, pullback, reflectionless, saturate, sharpness, verify
  std::string suite;    ///< verify suite: interval, arc-monotone, preimage-invariance, circle-powers, bounds
  std::optional<SupportDescriptor> support;
  std::string weight;  ///< polynomial weight, empty for none
  double p = 2.0;
  int n_lo = 1;
  int n_hi = 5;
  std::vector<double> gammas;
  int m = 512;
  std::string format = "csv";
  std::string output;  ///< empty for stdout
  std::optional<double> tolerance;
  std::uint64_t seed = 20240611;

  std::string t_poly;  ///< pullback / reflectionless / saturate polynomial
  std::string r_poly;  ///< pullback branch polynomial, empty for T'/N
  std::vector<double> d_points;
  std::vector<int> multiples;
  std::vector<double> eps;
  std::vector<int> degrees;
  std::string variant = "real";  ///< saturate: real or circle
  int count = 10;                ///< random weights for verify bounds
  int big_n = 3;                 ///< verify circle-powers
};

struct Assertion {
  std::string name;
  bool pass;
  double margin;  ///< positive when passing
};

/// A result table: fixed columns, one JSON value per cell.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, std::string>> meta;
  int value_column = -1;  ///< compared between m and 2m; -1 when quadrature-free
};

struct RunOutcome {
  int status = 0;  ///< 0 pass, 1 assertion failure, 2 usage error, 3 non-convergence
  Table table;
  std::string error;
};

/// Checks the config, dispatches, and appends the m vs 2m flag column.
RunOutcome run(const RunConfig& config);

std::string render_csv(const RunConfig& config, const Table& table);
nlohmann::json render_json(const RunConfig& config, const Table& table);
nlohmann::json config_json(const RunConfig& config);

/// Parses argv, runs, writes the artifact. Returns the exit status.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace widom
