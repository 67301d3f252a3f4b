#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hh::cli {

struct CliConfig {
  double tol = 1e-8;
  long max_evals = 1'000'000;
  int grid = 1024;
  std::uint64_t seed = 0;
  std::string format;  // json | csv; empty selects the command default
  std::string out;     // empty writes to the output stream
};

// Report layout shared by every subcommand. Tabular commands also fill
// columns/rows, which become the CSV body and outputs.table in JSON.
struct Report {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
  nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool failed = false;  // some check missed its threshold

  // Records a measured residual against its threshold.
  void check(const std::string& name, double value, double threshold, bool pass);
};

// JSON text with every floating-point number printed to 17 significant
// digits; non-finite numbers become the strings "inf", "-inf", "nan".
std::string to_json_text(const nlohmann::ordered_json& j);
std::string report_json(const Report& r);
std::string report_csv(const Report& r);

// Runs the command line (argv[0] is the program name). Exit codes: 0 on
// success, 2 on usage or domain errors, 3 on numerical failure or a
// failed check.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace hh::cli
