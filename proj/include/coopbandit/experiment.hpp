#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coopbandit/config.hpp"
#include "coopbandit/metrics.hpp"
#include "coopbandit/oracle.hpp"

namespace coopbandit {

inline constexpr std::string_view kSoftwareVersion = "1.0.0";

/// Stable per-run seed: splitmix64 finalizer chained over base_seed, then the
/// FNV-1a 64-bit hash of the policy name, then run_index:
///
///   h = mix(base_seed); h = mix(h ^ fnv1a(policy)); h = mix(h ^ run_index)
///
/// with mix(x) = splitmix64 step (x += 0x9e3779b97f4a7c15, then the two
/// xor-shift-multiply rounds and a final xor-shift).
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::string_view policy_name,
                              std::uint64_t run_index);

std::uint64_t fnv1a64(std::string_view bytes);

/// Plays one seeded run: T rounds of select -> resolve -> observe.
RunRecord run_single(const ExperimentConfig& config, std::string_view policy_name, int run_index);

struct PolicyAggregates {
  AggregateSeries cumulative_reward;
  AggregateSeries regret;
  AggregateSeries windowed_reward;
};

struct PolicyRuns {
  std::string policy_name;
  std::vector<RunRecord> runs;  // indexed by run_index
  PolicyAggregates aggregates;
};

struct ExperimentResult {
  ExperimentConfig config;
  OracleResult oracle;
  std::vector<PolicyRuns> policies{};  // config order
  std::uint64_t config_hash = 0;     // fnv1a64 of to_yaml(config)

  const PolicyRuns& policy(std::string_view name) const;
};

PolicyAggregates aggregate_policy(std::span<const RunRecord> runs, double mu_star,
                                  int smoothing_window);

/// Runs every (policy, run) pair across OpenMP threads. `max_threads` <= 0
/// leaves the OpenMP default. Errors from a run are rethrown as
/// std::runtime_error carrying the policy and run index.
ExperimentResult run_experiment(const ExperimentConfig& config, int max_threads = 0);

/// Single-threaded reference driver; produces the same result as run_experiment.
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

}  // namespace coopbandit
