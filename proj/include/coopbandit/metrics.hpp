#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coopbandit {

/// Per-round trace of one seeded run. Per-arm series are stored round-major:
/// entry (t, arm) lives at t * num_arms + arm, t zero-based.
struct RunRecord {
  int run_id = 0;
  std::string policy_name;
  int num_arms = 0;
  std::vector<double> team_reward;
  std::vector<std::uint8_t> coalition_size;
  std::vector<std::uint8_t> activated;
  std::vector<std::uint8_t> succeeded;
  // Learned thresholds at the end of the run; empty for policies that have none.
  std::vector<int> final_threshold_estimates;

  long horizon() const { return static_cast<long>(team_reward.size()); }
  int coalition_at(long t, int arm) const {
    return coalition_size[static_cast<std::size_t>(t * num_arms + arm)];
  }
  bool activated_at(long t, int arm) const {
    return activated[static_cast<std::size_t>(t * num_arms + arm)] != 0;
  }
  bool succeeded_at(long t, int arm) const {
    return succeeded[static_cast<std::size_t>(t * num_arms + arm)] != 0;
  }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Half-open, zero-based round window [first, last).
struct RoundRange {
  long first = 0;
  long last = 0;
};

std::vector<double> cumulative_reward(const RunRecord& record);

/// t * mu_star - cumulative_reward(t), with t one-based. Not clipped.
std::vector<double> regret_series(const RunRecord& record, double mu_star);

/// Rounds in which an arm's coalition met its true threshold (successful or not).
std::vector<long> valid_allocation_counts(const RunRecord& record,
                                          std::span<const int> true_thresholds,
                                          std::optional<RoundRange> window = std::nullopt);

std::vector<long> success_counts(const RunRecord& record,
                                 std::optional<RoundRange> window = std::nullopt);

/// Trailing mean over the last `window` rounds (fewer at the start).
std::vector<double> windowed_mean(std::span<const double> series, int window);

inline constexpr double kNormalZ95 = 1.96;

struct AggregateSeries {
  std::vector<double> mean;
  std::vector<double> ci_halfwidth;  // kNormalZ95 * s / sqrt(R), s with divisor R - 1
  int num_runs = 0;
};

/// Per-round mean and normal-approximation 95% CI halfwidth across runs.
/// A single run reports halfwidth 0. Throws std::invalid_argument for zero
/// runs or unequal lengths.
///
/// Rounds are distributed over OpenMP threads. Each round sums its values in
/// sorted order, so the result depends neither on run order nor thread count.
AggregateSeries aggregate_ci(std::span<const std::vector<double>> runs);

struct ReferenceCurves {
  std::vector<double> linear;       // mu_star * t
  std::vector<double> logarithmic;  // mu_star * ln t
};

ReferenceCurves reference_curves(double mu_star, long horizon);

}  // namespace coopbandit
