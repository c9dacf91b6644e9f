#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace uniformize::verify {

/// One measured quantity against its limit.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=", "==", "<", ">"
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  bool pass = true;
  std::vector<Check> checks;
  double seconds = 0.0;  // kept out of the report JSON
};

/// poisson, maximum, perron, green, barrier, map, degree, topology,
/// exhaustion, removable, oracle.
const std::vector<std::string>& suite_names();

/// `name` is a suite name or "all". Throws InvalidArgument for unknown names.
std::vector<SuiteReport> run(const std::string& name, std::uint64_t seed);

/// Deterministic: no timings, no paths.
nlohmann::json report_json(const std::string& name, std::uint64_t seed, const std::vector<SuiteReport>& suites);

nlohmann::json timings_json(const std::vector<SuiteReport>& suites);

}  // namespace uniformize::verify
