#pragma once

#include <span>

#include "coopbandit/environment.hpp"

namespace coopbandit {

/// mean + sqrt(2 ln t / count), or +inf for an arm that has never been counted.
double ucb_value(double mean, long count, long round_index);

/// Visits arms in descending score order (ties: lower index first) and gives
/// each arm exactly `thresholds[i]` agents when that many are still free,
/// otherwise skips it. Agents are handed out in ascending index; whoever is
/// left after the pass idles. An arm is never topped up past its threshold.
JointAction greedy_coalition_assignment(std::span<const double> scores,
                                        std::span<const int> thresholds, int num_agents);

}  // namespace coopbandit
