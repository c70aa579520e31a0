#include "coopbandit/oracle.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace coopbandit {

std::uint64_t allocation_count(int num_arms, int num_agents) {
  // C(M + K, K) built incrementally as C(M + i, i); each step stays integral.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (int i = 1; i <= num_arms; ++i) {
    const auto mult = static_cast<std::uint64_t>(num_agents + i);
    if (c > kMax / mult) return kMax;
    c = c * mult / static_cast<std::uint64_t>(i);
  }
  return c;
}

namespace {

struct Search {
  const EnvironmentSpec& spec;
  std::vector<int> current;
  OracleResult best;
  bool have_best = false;

  void visit(int arm, int remaining) {
    if (arm == spec.num_arms()) {
      const double v = expected_team_reward(spec, current);
      // Lexicographic enumeration order: strict '>' keeps the smallest argmax.
      if (!have_best || v > best.mu_star) {
        best.allocation = current;
        best.mu_star = v;
        have_best = true;
      }
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      current[static_cast<std::size_t>(arm)] = n;
      visit(arm + 1, remaining - n);
    }
    current[static_cast<std::size_t>(arm)] = 0;
  }
};

}  // namespace

OracleResult oracle_allocation(const EnvironmentSpec& spec, std::uint64_t max_allocations) {
  const std::uint64_t n = allocation_count(spec.num_arms(), spec.num_agents());
  if (n > max_allocations)
    throw std::length_error("oracle enumeration needs " + std::to_string(n) +
                            " allocations, above the guard of " + std::to_string(max_allocations));
  Search s{spec, std::vector<int>(static_cast<std::size_t>(spec.num_arms()), 0), {}};
  s.visit(0, spec.num_agents());
  return s.best;
}

}  // namespace coopbandit
