#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "markoff/padic.hpp"

namespace markoff::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMathFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSchemaVersion = "1.0";

struct RunConfig {
  std::string command;
  std::uint64_t p = 0;
  int k = 3;
  std::string d = "0";
  int budget_words = 8;
  unsigned workers = 1;
  std::string out;  ///< empty: stdout
  std::string gens = "gamma";
  std::string catalog_case = "all";
  std::string lemma = "all";
  std::string csv;
  bool optimized_exponent = false;
};

struct RunResult {
  int exit_code = kExitPass;
  std::string report;  ///< JSON text, empty on usage errors
  std::string csv;     ///< orbit representatives, for --csv
  std::string error;
};

/// Parses expressions such as "3", "-4", "sqrt(2)", "2*sqrt(3)+1" or
/// "(5+sqrt(5))/2" into Z_p at the given precision. Square roots take the
/// canonical branch. Throws std::invalid_argument on syntax errors and
/// MathError when a root or an inverse does not exist.
PadicInt parse_d_expression(const std::string& text, std::uint64_t p, int precision);

/// Validates the config, dispatches to the subcommand and renders the report.
/// Does not write files; see write_outputs.
RunResult run(const RunConfig& config);

/// Writes the report to config.out (or stdout) and the CSV, when requested.
void write_outputs(const RunConfig& config, const RunResult& result);

}  // namespace markoff::cli
