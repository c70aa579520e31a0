#pragma once

#include <cstdint>
#include <vector>

#include "coopbandit/environment.hpp"

namespace coopbandit {

inline constexpr std::uint64_t kDefaultOracleMaxAllocations = 10'000'000;

struct OracleResult {
  std::vector<int> allocation;  // agents per arm
  double mu_star = 0.0;         // expected team reward of `allocation`
};

/// Number of ways to place 0..M agents across K arms, i.e. C(M + K, K).
/// Saturates at UINT64_MAX.
std::uint64_t allocation_count(int num_arms, int num_agents);

/// Exhaustive argmax of expected_team_reward over every allocation of at most
/// M agents. Ties go to the lexicographically smallest allocation. Throws
/// std::length_error when allocation_count exceeds `max_allocations`.
OracleResult oracle_allocation(const EnvironmentSpec& spec,
                               std::uint64_t max_allocations = kDefaultOracleMaxAllocations);

}  // namespace coopbandit
