#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace coopbandit {

/// One random source per run. Never shared across concurrent runs.
using Rng = std::mt19937_64;

/// Latent parameters of a single arm.
struct ArmSpec {
  double success_prob = 0.0;
  double reward_magnitude = 0.0;
  int threshold = 1;  // minimum simultaneous pullers for the Bernoulli trial to happen

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

/// A stationary environment: K arms shared by M homogeneous agents.
///
/// Construction validates every invariant; an EnvironmentSpec that exists is
/// always well-formed.
class EnvironmentSpec {
 public:
  EnvironmentSpec(std::vector<ArmSpec> arms, int num_agents);

  int num_arms() const { return static_cast<int>(arms_.size()); }
  int num_agents() const { return num_agents_; }
  const ArmSpec& arm(int index) const { return arms_.at(static_cast<std::size_t>(index)); }
  std::span<const ArmSpec> arms() const { return arms_; }
  std::vector<int> thresholds() const;

 private:
  std::vector<ArmSpec> arms_;
  int num_agents_;
};

/// The five-arm, three-agent base environment with one decoy arm (arm 4).
EnvironmentSpec table1_environment();

/// Per-agent arm choice for one round. Idle agents hold `kIdle`.
class JointAction {
 public:
  static constexpr int kIdle = -1;

  JointAction() = default;
  explicit JointAction(std::vector<int> choices) : choices_(std::move(choices)) {}
  static JointAction all_idle(int num_agents) {
    return JointAction(std::vector<int>(static_cast<std::size_t>(num_agents), kIdle));
  }

  int num_agents() const { return static_cast<int>(choices_.size()); }
  int choice(int agent) const { return choices_.at(static_cast<std::size_t>(agent)); }
  bool is_idle(int agent) const { return choice(agent) == kIdle; }
  void assign(int agent, int arm) { choices_.at(static_cast<std::size_t>(agent)) = arm; }
  std::span<const int> choices() const { return choices_; }

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<int> choices_;
};

/// Throws std::invalid_argument unless `action` has one entry per agent and
/// every non-idle entry names an arm of `spec`.
void validate_action(const JointAction& action, const EnvironmentSpec& spec);

struct RoundOutcome {
  std::vector<int> coalition_sizes;
  std::vector<bool> activated;
  std::vector<bool> succeeded;
  std::vector<double> arm_rewards;    // reward_magnitude on success, else 0
  std::vector<double> agent_rewards;  // equal split of arm_rewards within each coalition
  double team_reward = 0.0;           // sum of arm_rewards, not of the splits

  friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

std::vector<int> coalition_sizes(const JointAction& action, const EnvironmentSpec& spec);

/// Resolves one round. Exactly one Bernoulli draw is consumed per activated
/// arm, in ascending arm order; nothing else touches `rng`.
RoundOutcome resolve_round(const EnvironmentSpec& spec, const JointAction& action, Rng& rng);

/// Sum over arms whose allocation meets the threshold of p * r. Throws
/// std::invalid_argument when the allocation has the wrong length, a negative
/// entry, or places more than M agents.
double expected_team_reward(const EnvironmentSpec& spec, std::span<const int> allocation);

}  // namespace coopbandit
