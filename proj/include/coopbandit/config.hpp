#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopbandit/environment.hpp"
#include "coopbandit/policy.hpp"

namespace coopbandit {

/// Raised for unreadable, malformed, or invalid experiment configs. The
/// message always names the offending field or file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultHorizon = 10'000;
inline constexpr int kDefaultNumRuns = 30;
inline constexpr int kDefaultFailureThreshold = 5;
inline constexpr int kDefaultSmoothingWindow = 100;

struct ExperimentConfig {
  EnvironmentSpec environment;
  long horizon = kDefaultHorizon;
  int num_runs = kDefaultNumRuns;
  std::uint64_t base_seed = 0;
  int failure_threshold_m = kDefaultFailureThreshold;
  std::vector<std::string> policies{};
  int smoothing_window = kDefaultSmoothingWindow;

  // Policy tuning knobs; defaults are the documented behaviour.
  std::uint64_t oracle_max_allocations = kDefaultOracleMaxAllocations;
  UcbNormalization ucb_normalization = UcbNormalization::kRunningMax;
  CoopRewardBasis coop_reward_basis = CoopRewardBasis::kAgentShare;
  TieBreak independent_tie_break = TieBreak::kRandom;

  PolicyOptions policy_options() const;
};

/// Config text is YAML: flat scalar keys plus an `arms` list whose entries
/// carry success_prob, reward_magnitude and threshold.
///
///   num_agents: 3
///   horizon: 10000          # default 10000
///   num_runs: 30            # default 30
///   base_seed: 0
///   failure_threshold_m: 5  # default 5
///   smoothing_window: 100   # default 100
///   policies: [random, independent_ucb1, cooperative_ucb1, t_coop_ucb, oracle]
///   arms:
///     - {success_prob: 0.5, reward_magnitude: 5.0, threshold: 1}
///
/// Omitting `policies` selects every registered policy; an explicit empty list
/// is an error. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Defaults for every field, all registered policies.
ExperimentConfig make_config(EnvironmentSpec environment);

/// Re-checks the scalar invariants (after overrides, for instance).
void validate_config(const ExperimentConfig& config);

/// Applies one `key=value` override. Keys: horizon, runs, seed, m.
void apply_override(ExperimentConfig& config, std::string_view assignment);

/// The effective config as YAML, every default spelled out. Parsing the
/// output yields an identical config.
std::string to_yaml(const ExperimentConfig& config);

std::string_view to_string(UcbNormalization v);
std::string_view to_string(CoopRewardBasis v);
std::string_view to_string(TieBreak v);

}  // namespace coopbandit
