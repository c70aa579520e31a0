#include "coopbandit/policies.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>

#include "coopbandit/coalition.hpp"

namespace coopbandit {

namespace {

double scaled(double mean, double max_observed, UcbNormalization mode) {
  if (mode == UcbNormalization::kRunningMax && max_observed > 0.0) return mean / max_observed;
  return mean;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

JointAction allocation_to_action(std::span<const int> allocation, int num_agents) {
  JointAction action = JointAction::all_idle(num_agents);
  int agent = 0;
  for (std::size_t arm = 0; arm < allocation.size(); ++arm) {
    for (int k = 0; k < allocation[arm]; ++k) {
      if (agent == num_agents) throw std::invalid_argument("allocation exceeds agent count");
      action.assign(agent++, static_cast<int>(arm));
    }
  }
  return action;
}

// ---------------------------------------------------------------------------
// T-Coop-UCB

TCoopUcbPolicy::TCoopUcbPolicy(int num_arms, int num_agents, int failure_threshold,
                               UcbNormalization normalization)
    : num_agents_(num_agents), normalization_(normalization) {
  if (failure_threshold < 1) throw std::invalid_argument("failure threshold m must be >= 1");
  const auto k = idx(num_arms);
  state_.mean_estimates.assign(k, 0.0);
  state_.attempt_counts.assign(k, 0);
  state_.threshold_estimates.assign(k, num_agents);
  state_.consecutive_failures.assign(k, 0);
  state_.failure_threshold = failure_threshold;
}

std::vector<double> TCoopUcbPolicy::ucb_scores(long round_index) const {
  std::vector<double> scores(state_.mean_estimates.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = ucb_value(scaled(state_.mean_estimates[i], state_.max_observed_reward, normalization_),
                          state_.attempt_counts[i], round_index);
  return scores;
}

JointAction TCoopUcbPolicy::select_actions(long round_index, Rng&) {
  return greedy_coalition_assignment(ucb_scores(round_index), state_.threshold_estimates,
                                     num_agents_);
}

void TCoopUcbPolicy::observe(long, const RoundOutcome& feedback) {
  TCoopState& s = state_;
  for (std::size_t i = 0; i < s.mean_estimates.size(); ++i) {
    const int n = feedback.coalition_sizes[i];
    if (n == 0) continue;
    // Agents only see rewards; a zero-payout success reads as a failure.
    const double reward = feedback.arm_rewards[i];
    const bool success = reward > 0.0;

    if (success && n < s.threshold_estimates[i]) {
      s.threshold_estimates[i] = n;
      s.consecutive_failures[i] = 0;
    }
    if (n < s.threshold_estimates[i]) continue;  // below our own estimate: uninformative

    s.max_observed_reward = std::max(s.max_observed_reward, reward);
    s.attempt_counts[i] += 1;
    s.mean_estimates[i] = incremental_mean(s.mean_estimates[i], reward, s.attempt_counts[i]);

    if (success) {
      s.consecutive_failures[i] = 0;
      continue;
    }
    if (++s.consecutive_failures[i] < s.failure_threshold) continue;
    s.consecutive_failures[i] = 0;
    if (s.threshold_estimates[i] < num_agents_) {
      s.threshold_estimates[i] += 1;
      // Samples taken under the old estimate may all have been sub-threshold.
      s.mean_estimates[i] = 0.0;
      s.attempt_counts[i] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Cooperative UCB1

CooperativeUcbPolicy::CooperativeUcbPolicy(const EnvironmentSpec& spec, CoopRewardBasis basis,
                                           UcbNormalization normalization)
    : num_agents_(spec.num_agents()), basis_(basis), normalization_(normalization) {
  const auto k = idx(spec.num_arms());
  state_.mean_estimates.assign(k, 0.0);
  state_.attempt_counts.assign(k, 0);
  state_.known_thresholds = spec.thresholds();
}

JointAction CooperativeUcbPolicy::select_actions(long round_index, Rng&) {
  std::vector<double> scores(state_.mean_estimates.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = ucb_value(scaled(state_.mean_estimates[i], state_.max_observed_reward, normalization_),
                          state_.attempt_counts[i], round_index);
  return greedy_coalition_assignment(scores, state_.known_thresholds, num_agents_);
}

void CooperativeUcbPolicy::observe(long, const RoundOutcome& feedback) {
  CoopUcbState& s = state_;
  for (std::size_t i = 0; i < s.mean_estimates.size(); ++i) {
    const int n = feedback.coalition_sizes[i];
    if (n == 0 || n < s.known_thresholds[i]) continue;
    double sample = feedback.arm_rewards[i];
    if (basis_ == CoopRewardBasis::kAgentShare) sample /= n;
    s.max_observed_reward = std::max(s.max_observed_reward, sample);
    s.attempt_counts[i] += 1;
    s.mean_estimates[i] = incremental_mean(s.mean_estimates[i], sample, s.attempt_counts[i]);
  }
}

// ---------------------------------------------------------------------------
// Independent UCB1

IndependentUcbPolicy::IndependentUcbPolicy(int num_arms, int num_agents, TieBreak tie_break,
                                           UcbNormalization normalization)
    : last_action_(JointAction::all_idle(num_agents)),
      tie_break_(tie_break),
      normalization_(normalization) {
  state_.mean_estimates.assign(idx(num_agents), std::vector<double>(idx(num_arms), 0.0));
  state_.pull_counts.assign(idx(num_agents), std::vector<long>(idx(num_arms), 0));
  state_.max_observed_reward.assign(idx(num_agents), 0.0);
}

JointAction IndependentUcbPolicy::select_actions(long round_index, Rng& rng) {
  const int num_agents = last_action_.num_agents();
  JointAction action = JointAction::all_idle(num_agents);
  std::vector<int> tied;
  for (int a = 0; a < num_agents; ++a) {
    const auto& means = state_.mean_estimates[idx(a)];
    const auto& counts = state_.pull_counts[idx(a)];
    double best = -std::numeric_limits<double>::infinity();
    tied.clear();
    for (std::size_t j = 0; j < means.size(); ++j) {
      const double u = ucb_value(scaled(means[j], state_.max_observed_reward[idx(a)], normalization_),
                                 counts[j], round_index);
      if (u > best) {
        best = u;
        tied.assign(1, static_cast<int>(j));
      } else if (u == best) {
        tied.push_back(static_cast<int>(j));
      }
    }
    int pick = tied.front();
    if (tie_break_ == TieBreak::kRandom && tied.size() > 1) {
      std::uniform_int_distribution<std::size_t> dist(0, tied.size() - 1);
      pick = tied[dist(rng)];
    }
    action.assign(a, pick);
  }
  last_action_ = action;
  return action;
}

void IndependentUcbPolicy::observe(long, const RoundOutcome& feedback) {
  for (int a = 0; a < last_action_.num_agents(); ++a) {
    const int arm = last_action_.choice(a);
    if (arm == JointAction::kIdle) continue;
    const double reward = feedback.agent_rewards[idx(a)];
    auto& count = state_.pull_counts[idx(a)][idx(arm)];
    auto& mean = state_.mean_estimates[idx(a)][idx(arm)];
    count += 1;
    mean = incremental_mean(mean, reward, count);
    state_.max_observed_reward[idx(a)] = std::max(state_.max_observed_reward[idx(a)], reward);
  }
}

// ---------------------------------------------------------------------------
// Random

JointAction RandomPolicy::select_actions(long, Rng& rng) {
  std::uniform_int_distribution<int> dist(0, num_arms_ - 1);
  JointAction action = JointAction::all_idle(num_agents_);
  for (int a = 0; a < num_agents_; ++a) action.assign(a, dist(rng));
  return action;
}

// ---------------------------------------------------------------------------
// Oracle

OraclePolicy::OraclePolicy(const EnvironmentSpec& spec, std::uint64_t max_allocations)
    : result_(oracle_allocation(spec, max_allocations)),
      action_(allocation_to_action(result_.allocation, spec.num_agents())) {}

// ---------------------------------------------------------------------------
// Registry

namespace {
constexpr std::array<std::string_view, 5> kNames = {
    policy_names::kRandom, policy_names::kIndependentUcb1, policy_names::kCooperativeUcb1,
    policy_names::kTCoopUcb, policy_names::kOracle};
}  // namespace

std::span<const std::string_view> registered_policy_names() { return kNames; }

bool is_registered_policy(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

std::unique_ptr<Policy> make_policy(std::string_view name, const EnvironmentSpec& spec,
                                    const PolicyOptions& options) {
  const int k = spec.num_arms();
  const int m = spec.num_agents();
  if (name == policy_names::kRandom) return std::make_unique<RandomPolicy>(k, m);
  if (name == policy_names::kIndependentUcb1)
    return std::make_unique<IndependentUcbPolicy>(k, m, options.independent_tie_break,
                                                  options.normalization);
  if (name == policy_names::kCooperativeUcb1)
    return std::make_unique<CooperativeUcbPolicy>(spec, options.coop_reward_basis,
                                                  options.normalization);
  if (name == policy_names::kTCoopUcb)
    return std::make_unique<TCoopUcbPolicy>(k, m, options.failure_threshold_m,
                                            options.normalization);
  if (name == policy_names::kOracle)
    return std::make_unique<OraclePolicy>(spec, options.oracle_max_allocations);
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

}  // namespace coopbandit
