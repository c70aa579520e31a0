#include "coopbandit/environment.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace coopbandit {

EnvironmentSpec::EnvironmentSpec(std::vector<ArmSpec> arms, int num_agents)
    : arms_(std::move(arms)), num_agents_(num_agents) {
  if (arms_.empty()) throw std::invalid_argument("environment needs at least one arm");
  if (num_agents_ < 1) throw std::invalid_argument("num_agents must be >= 1");
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    const ArmSpec& a = arms_[i];
    const std::string where = "arm " + std::to_string(i) + ": ";
    if (!(a.success_prob >= 0.0 && a.success_prob <= 1.0))
      throw std::invalid_argument(where + "success_prob must lie in [0, 1]");
    if (!(a.reward_magnitude >= 0.0))
      throw std::invalid_argument(where + "reward_magnitude must be >= 0");
    if (a.threshold < 1 || a.threshold > num_agents_)
      throw std::invalid_argument(where + "threshold " + std::to_string(a.threshold) +
                                  " outside [1, num_agents=" + std::to_string(num_agents_) +
                                  "]");
  }
}

std::vector<int> EnvironmentSpec::thresholds() const {
  std::vector<int> out;
  out.reserve(arms_.size());
  for (const ArmSpec& a : arms_) out.push_back(a.threshold);
  return out;
}

EnvironmentSpec table1_environment() {
  return EnvironmentSpec({{0.5, 5.0, 1}, {0.7, 6.0, 1}, {0.6, 20.0, 3}, {0.4, 12.0, 2}, {0.0, 0.0, 2}},
                         3);
}

void validate_action(const JointAction& action, const EnvironmentSpec& spec) {
  if (action.num_agents() != spec.num_agents())
    throw std::invalid_argument("joint action has " + std::to_string(action.num_agents()) +
                                " entries, expected " + std::to_string(spec.num_agents()));
  for (int a = 0; a < action.num_agents(); ++a) {
    const int c = action.choice(a);
    if (c != JointAction::kIdle && (c < 0 || c >= spec.num_arms()))
      throw std::invalid_argument("agent " + std::to_string(a) + " chose invalid arm " +
                                  std::to_string(c));
  }
}

std::vector<int> coalition_sizes(const JointAction& action, const EnvironmentSpec& spec) {
  std::vector<int> counts(static_cast<std::size_t>(spec.num_arms()), 0);
  for (int c : action.choices())
    if (c != JointAction::kIdle) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

RoundOutcome resolve_round(const EnvironmentSpec& spec, const JointAction& action, Rng& rng) {
  const auto k = static_cast<std::size_t>(spec.num_arms());
  RoundOutcome out;
  out.coalition_sizes = coalition_sizes(action, spec);
  out.activated.assign(k, false);
  out.succeeded.assign(k, false);
  out.arm_rewards.assign(k, 0.0);
  out.agent_rewards.assign(static_cast<std::size_t>(spec.num_agents()), 0.0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    const int n = out.coalition_sizes[j];
    const ArmSpec& arm = spec.arms()[j];
    if (n == 0 || n < arm.threshold) continue;
    out.activated[j] = true;
    if (unit(rng) < arm.success_prob) {
      out.succeeded[j] = true;
      out.arm_rewards[j] = arm.reward_magnitude;
      out.team_reward += arm.reward_magnitude;
    }
  }
  for (int a = 0; a < action.num_agents(); ++a) {
    const int c = action.choice(a);
    if (c == JointAction::kIdle) continue;
    const auto j = static_cast<std::size_t>(c);
    if (out.succeeded[j])
      out.agent_rewards[static_cast<std::size_t>(a)] = out.arm_rewards[j] / out.coalition_sizes[j];
  }
  return out;
}

double expected_team_reward(const EnvironmentSpec& spec, std::span<const int> allocation) {
  if (static_cast<int>(allocation.size()) != spec.num_arms())
    throw std::invalid_argument("allocation length " + std::to_string(allocation.size()) +
                                " does not match arm count " + std::to_string(spec.num_arms()));
  long total = 0;
  for (int n : allocation) {
    if (n < 0) throw std::invalid_argument("allocation entries must be >= 0");
    total += n;
  }
  if (total > spec.num_agents())
    throw std::invalid_argument("allocation places " + std::to_string(total) + " agents but only " +
                                std::to_string(spec.num_agents()) + " exist");
  double value = 0.0;
  for (std::size_t j = 0; j < allocation.size(); ++j) {
    const ArmSpec& arm = spec.arms()[j];
    if (allocation[j] > 0 && allocation[j] >= arm.threshold)
      value += arm.success_prob * arm.reward_magnitude;
  }
  return value;
}

}  // namespace coopbandit
