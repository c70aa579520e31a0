#pragma once

#include <vector>

#include "coopbandit/policy.hpp"

namespace coopbandit {

// T-Coop-UCB: shared estimates of per-arm mean team reward and activation
// threshold. Greedy coalitions of exactly ĥ_i agents; m consecutive zero-reward
// attempts raise ĥ_i, a success with fewer agents than ĥ_i lowers it.

struct TCoopState {
  std::vector<double> mean_estimates;
  std::vector<long> attempt_counts;
  std::vector<int> threshold_estimates;
  std::vector<int> consecutive_failures;
  int failure_threshold = 5;
  double max_observed_reward = 0.0;
};

class TCoopUcbPolicy final : public Policy {
 public:
  TCoopUcbPolicy(int num_arms, int num_agents, int failure_threshold,
                 UcbNormalization normalization = UcbNormalization::kRunningMax);

  std::string_view name() const override { return policy_names::kTCoopUcb; }
  JointAction select_actions(long round_index, Rng& rng) override;
  void observe(long round_index, const RoundOutcome& feedback) override;
  std::optional<std::vector<int>> threshold_estimates() const override {
    return state_.threshold_estimates;
  }

  std::vector<double> ucb_scores(long round_index) const;
  const TCoopState& state() const { return state_; }
  TCoopState& mutable_state() { return state_; }

 private:
  TCoopState state_;
  int num_agents_;
  UcbNormalization normalization_;
};

// Cooperative UCB1: same shared greedy coalition formation, but with the true
// thresholds and no threshold learning.

struct CoopUcbState {
  std::vector<double> mean_estimates;
  std::vector<long> attempt_counts;
  std::vector<int> known_thresholds;
  double max_observed_reward = 0.0;
};

class CooperativeUcbPolicy final : public Policy {
 public:
  CooperativeUcbPolicy(const EnvironmentSpec& spec, CoopRewardBasis basis,
                       UcbNormalization normalization = UcbNormalization::kRunningMax);

  std::string_view name() const override { return policy_names::kCooperativeUcb1; }
  JointAction select_actions(long round_index, Rng& rng) override;
  void observe(long round_index, const RoundOutcome& feedback) override;

  const CoopUcbState& state() const { return state_; }

 private:
  CoopUcbState state_;
  int num_agents_;
  CoopRewardBasis basis_;
  UcbNormalization normalization_;
};

// Independent UCB1: every agent runs classic UCB1 on its own reward share.

struct IndepUcbState {
  std::vector<std::vector<double>> mean_estimates;  // [agent][arm]
  std::vector<std::vector<long>> pull_counts;       // [agent][arm]
  std::vector<double> max_observed_reward;          // per agent
};

class IndependentUcbPolicy final : public Policy {
 public:
  IndependentUcbPolicy(int num_arms, int num_agents, TieBreak tie_break,
                       UcbNormalization normalization = UcbNormalization::kRunningMax);

  std::string_view name() const override { return policy_names::kIndependentUcb1; }
  JointAction select_actions(long round_index, Rng& rng) override;
  void observe(long round_index, const RoundOutcome& feedback) override;

  const IndepUcbState& state() const { return state_; }

 private:
  IndepUcbState state_;
  JointAction last_action_;
  TieBreak tie_break_;
  UcbNormalization normalization_;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(int num_arms, int num_agents) : num_arms_(num_arms), num_agents_(num_agents) {}

  std::string_view name() const override { return policy_names::kRandom; }
  JointAction select_actions(long round_index, Rng& rng) override;
  void observe(long, const RoundOutcome&) override {}

 private:
  int num_arms_;
  int num_agents_;
};

/// Replays the expected-reward-maximizing allocation every round.
class OraclePolicy final : public Policy {
 public:
  OraclePolicy(const EnvironmentSpec& spec, std::uint64_t max_allocations);

  std::string_view name() const override { return policy_names::kOracle; }
  JointAction select_actions(long, Rng&) override { return action_; }
  void observe(long, const RoundOutcome&) override {}

  const OracleResult& result() const { return result_; }

 private:
  OracleResult result_;
  JointAction action_;
};

/// Expands per-arm counts into a joint action, agents in ascending index
/// filling arms in ascending index. Unused agents idle.
JointAction allocation_to_action(std::span<const int> allocation, int num_agents);

/// Running mean update; `count` is the count after including `sample`.
inline double incremental_mean(double mean, double sample, long count) {
  return mean + (sample - mean) / static_cast<double>(count);
}

}  // namespace coopbandit
