#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "coopbandit/experiment.hpp"

namespace coopbandit {

inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kAllocationsFile = "allocations.csv";
inline constexpr const char* kAggregatesFile = "aggregates.csv";
inline constexpr const char* kMetaFile = "meta.json";

inline constexpr const char* kTimeseriesHeader = "policy,run_id,t,team_reward,cumulative_reward,regret";
inline constexpr const char* kAllocationsHeader = "policy,run_id,arm,valid_allocations,successes";
inline constexpr const char* kAggregatesHeader = "policy,t,metric,mean,ci_halfwidth";

inline constexpr const char* kCiMethod = "normal approximation: mean +/- 1.96 * s / sqrt(R), s with divisor R-1";

nlohmann::ordered_json build_meta(const ExperimentResult& result);

/// Writes timeseries.csv, allocations.csv, aggregates.csv and meta.json into
/// `out_dir` (created if missing). Rows are ordered by policy name, then
/// run_id, then t (or arm). Returns the paths written. Throws
/// std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> write_results(const ExperimentResult& result,
                                                 const std::filesystem::path& out_dir);

}  // namespace coopbandit
