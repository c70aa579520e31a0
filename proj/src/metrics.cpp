#include "coopbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopbandit {

std::vector<double> cumulative_reward(const RunRecord& record) {
  std::vector<double> out(record.team_reward.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    acc += record.team_reward[t];
    out[t] = acc;
  }
  return out;
}

std::vector<double> regret_series(const RunRecord& record, double mu_star) {
  std::vector<double> out = cumulative_reward(record);
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = static_cast<double>(t + 1) * mu_star - out[t];
  return out;
}

namespace {

RoundRange resolve_window(const RunRecord& record, std::optional<RoundRange> window) {
  RoundRange r = window.value_or(RoundRange{0, record.horizon()});
  if (r.first < 0 || r.last > record.horizon() || r.first > r.last)
    throw std::invalid_argument("round window outside the record");
  return r;
}

}  // namespace

std::vector<long> valid_allocation_counts(const RunRecord& record,
                                          std::span<const int> true_thresholds,
                                          std::optional<RoundRange> window) {
  if (static_cast<int>(true_thresholds.size()) != record.num_arms)
    throw std::invalid_argument("threshold count does not match the record's arm count");
  const RoundRange r = resolve_window(record, window);
  std::vector<long> counts(static_cast<std::size_t>(record.num_arms), 0);
  for (long t = r.first; t < r.last; ++t)
    for (int j = 0; j < record.num_arms; ++j) {
      const int n = record.coalition_at(t, j);
      if (n > 0 && n >= true_thresholds[static_cast<std::size_t>(j)])
        ++counts[static_cast<std::size_t>(j)];
    }
  return counts;
}

std::vector<long> success_counts(const RunRecord& record, std::optional<RoundRange> window) {
  const RoundRange r = resolve_window(record, window);
  std::vector<long> counts(static_cast<std::size_t>(record.num_arms), 0);
  for (long t = r.first; t < r.last; ++t)
    for (int j = 0; j < record.num_arms; ++j)
      if (record.succeeded_at(t, j)) ++counts[static_cast<std::size_t>(j)];
  return counts;
}

std::vector<double> windowed_mean(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t first = t + 1 >= w ? t + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t k = first; k <= t; ++k) sum += series[k];
    out[t] = sum / static_cast<double>(t + 1 - first);
  }
  return out;
}

AggregateSeries aggregate_ci(std::span<const std::vector<double>> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_ci needs at least one run");
  const std::size_t len = runs.front().size();
  for (const auto& r : runs)
    if (r.size() != len) throw std::invalid_argument("runs differ in length");

  const auto num_runs = static_cast<long>(runs.size());
  AggregateSeries out;
  out.num_runs = static_cast<int>(num_runs);
  out.mean.assign(len, 0.0);
  out.ci_halfwidth.assign(len, 0.0);

  const auto n = static_cast<long>(len);
#pragma omp parallel
  {
    std::vector<double> values(runs.size());
#pragma omp for schedule(static)
    for (long t = 0; t < n; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      for (std::size_t r = 0; r < runs.size(); ++r) values[r] = runs[r][ut];
      // Sorted summation makes the result independent of run order.
      std::sort(values.begin(), values.end());
      if (values.front() == values.back()) {
        out.mean[ut] = values.front();
        continue;
      }
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(num_runs);
      out.mean[ut] = mean;
      if (num_runs < 2) continue;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(num_runs - 1));
      out.ci_halfwidth[ut] = kNormalZ95 * sd / std::sqrt(static_cast<double>(num_runs));
    }
  }
  return out;
}

ReferenceCurves reference_curves(double mu_star, long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  ReferenceCurves c;
  c.linear.resize(static_cast<std::size_t>(horizon));
  c.logarithmic.resize(static_cast<std::size_t>(horizon));
  for (long t = 1; t <= horizon; ++t) {
    c.linear[static_cast<std::size_t>(t - 1)] = mu_star * static_cast<double>(t);
    c.logarithmic[static_cast<std::size_t>(t - 1)] = mu_star * std::log(static_cast<double>(t));
  }
  return c;
}

}  // namespace coopbandit
