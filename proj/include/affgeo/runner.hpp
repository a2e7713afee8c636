#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affgeo/scenario.hpp"
#include "json.hpp"

namespace affgeo {

inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitSchema = 2, kExitRuntime = 3 };

struct RunOptions {
  std::vector<std::string> checks;  // empty: the scenario's list; {"all"}: every registered check
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: hardware concurrency
};

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = kExitPass;
};

// Uniform points in the open sampling region, reproducible from the seed.
std::vector<std::vector<double>> sample_points(const AffineMetricSpec& spec, int count, std::uint64_t seed);

RunResult run(const Scenario& scenario, const RunOptions& options);
RunResult run_variation(const Scenario& scenario, const DeformationFamily& family, const RunOptions& options);

// Maps an exception thrown while loading or running to a report and exit code.
RunResult error_result(const std::string& command, const std::exception& e);

}  // namespace affgeo
