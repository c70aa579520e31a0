#include "coopbandit/coalition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace coopbandit {

double ucb_value(double mean, long count, long round_index) {
  if (round_index < 1) throw std::invalid_argument("round_index must be >= 1");
  if (count <= 0) return std::numeric_limits<double>::infinity();
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(round_index)) /
                          static_cast<double>(count));
}

JointAction greedy_coalition_assignment(std::span<const double> scores,
                                        std::span<const int> thresholds, int num_agents) {
  if (scores.size() != thresholds.size())
    throw std::invalid_argument("scores and thresholds differ in length");

  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });

  JointAction action = JointAction::all_idle(num_agents);
  int next_agent = 0;
  for (int arm : order) {
    const int need = thresholds[static_cast<std::size_t>(arm)];
    if (need < 1 || need > num_agents)
      throw std::invalid_argument("threshold outside [1, num_agents]");
    if (need > num_agents - next_agent) continue;
    for (int k = 0; k < need; ++k) action.assign(next_agent++, arm);
    if (next_agent == num_agents) break;
  }
  return action;
}

}  // namespace coopbandit
