#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopbandit/environment.hpp"
#include "coopbandit/oracle.hpp"

namespace coopbandit {

/// What the UCB-based policies divide their mean estimates by before adding
/// the exploration bonus. The stored estimates are never rescaled.
enum class UcbNormalization {
  kRunningMax,  // largest reward observed so far (no scaling until one is nonzero)
  kNone,
};

/// Which reward Cooperative UCB1 averages into its per-arm estimate.
enum class CoopRewardBasis {
  kAgentShare,  // arm reward / coalition size
  kTeam,        // full arm reward
};

/// How an Independent UCB1 agent picks among arms tied for the best score.
enum class TieBreak {
  kRandom,       // uniform among the tied arms, one rng draw, only when tied
  kLowestIndex,
};

struct PolicyOptions {
  int failure_threshold_m = 5;
  UcbNormalization normalization = UcbNormalization::kRunningMax;
  CoopRewardBasis coop_reward_basis = CoopRewardBasis::kAgentShare;
  TieBreak independent_tie_break = TieBreak::kRandom;
  std::uint64_t oracle_max_allocations = kDefaultOracleMaxAllocations;
};

/// Uniform harness contract: select_actions then observe, exactly once per
/// round, with strictly increasing round indices starting at 1.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;
  virtual JointAction select_actions(long round_index, Rng& rng) = 0;
  virtual void observe(long round_index, const RoundOutcome& feedback) = 0;

  /// Current per-arm threshold estimates, for policies that learn them.
  virtual std::optional<std::vector<int>> threshold_estimates() const { return std::nullopt; }
};

namespace policy_names {
inline constexpr std::string_view kRandom = "random";
inline constexpr std::string_view kIndependentUcb1 = "independent_ucb1";
inline constexpr std::string_view kCooperativeUcb1 = "cooperative_ucb1";
inline constexpr std::string_view kTCoopUcb = "t_coop_ucb";
inline constexpr std::string_view kOracle = "oracle";
}  // namespace policy_names

std::span<const std::string_view> registered_policy_names();
bool is_registered_policy(std::string_view name);

/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<Policy> make_policy(std::string_view name, const EnvironmentSpec& spec,
                                    const PolicyOptions& options);

}  // namespace coopbandit
