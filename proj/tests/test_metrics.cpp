#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "coopbandit/experiment.hpp"
#include "coopbandit/metrics.hpp"
#include "doctest.h"

using namespace coopbandit;

namespace {

RunRecord record_from_rewards(std::vector<double> rewards, int num_arms = 1) {
  RunRecord r;
  r.num_arms = num_arms;
  const std::size_t cells = rewards.size() * static_cast<std::size_t>(num_arms);
  r.team_reward = std::move(rewards);
  r.coalition_size.assign(cells, 0);
  r.activated.assign(cells, 0);
  r.succeeded.assign(cells, 0);
  return r;
}

ExperimentConfig table1_config(std::vector<std::string> policies, long horizon, int runs) {
  ExperimentConfig c = make_config(table1_environment());
  c.policies = std::move(policies);
  c.horizon = horizon;
  c.num_runs = runs;
  c.base_seed = 99;
  return c;
}

}  // namespace

TEST_CASE("cumulative_reward") {
  CHECK(cumulative_reward(record_from_rewards({0, 20, 0, 20})) == std::vector<double>{0, 20, 20, 40});
  CHECK(cumulative_reward(record_from_rewards({0, 0, 0})) == std::vector<double>{0, 0, 0});
  CHECK(cumulative_reward(record_from_rewards({})).empty());
}

TEST_CASE("regret_series") {
  std::vector<double> rewards(10, 10.0);  // cumulative 100 at t = 10
  const auto reg = regret_series(record_from_rewards(rewards), 12.0);
  CHECK(reg.back() == 20.0);
  CHECK(reg.front() == 2.0);
  // Lucky runs go negative and stay that way.
  CHECK(regret_series(record_from_rewards({20}), 12.0) == std::vector<double>{-8.0});
}

TEST_CASE("valid and success counts on a hand-built record") {
  // Two arms, thresholds {1, 2}, four rounds.
  RunRecord r = record_from_rewards({0, 0, 0, 0}, 2);
  r.coalition_size = {1, 0, 0, 2, 0, 1, 3, 0};
  r.activated = {1, 0, 0, 1, 0, 0, 1, 0};
  r.succeeded = {1, 0, 0, 0, 0, 0, 1, 0};
  const std::vector<int> th{1, 2};
  CHECK(valid_allocation_counts(r, th) == std::vector<long>{2, 1});
  CHECK(success_counts(r) == std::vector<long>{2, 0});
  CHECK(valid_allocation_counts(r, th, RoundRange{2, 4}) == std::vector<long>{1, 0});
  CHECK(success_counts(r, RoundRange{1, 3}) == std::vector<long>{0, 0});

  const RunRecord empty = record_from_rewards({}, 2);
  CHECK(valid_allocation_counts(empty, th) == std::vector<long>{0, 0});
  CHECK(success_counts(empty) == std::vector<long>{0, 0});
}

TEST_CASE("windowed_mean") {
  const std::vector<double> s{2, 4, 6, 8};
  CHECK(windowed_mean(s, 1) == s);
  CHECK(windowed_mean(s, 2) == std::vector<double>{2, 3, 5, 7});
  CHECK(windowed_mean(s, 10) == std::vector<double>{2, 3, 4, 5});
}

TEST_CASE("aggregate_ci") {
  const std::vector<std::vector<double>> three{{1.0}, {2.0}, {3.0}};
  const auto a = aggregate_ci(three);
  CHECK(a.num_runs == 3);
  CHECK(a.mean[0] == 2.0);
  CHECK(a.ci_halfwidth[0] == doctest::Approx(1.1316065276116665).epsilon(1e-14));

  const std::vector<std::vector<double>> one{{4.0, 5.0}};
  const auto b = aggregate_ci(one);
  CHECK(b.mean == std::vector<double>{4.0, 5.0});
  CHECK(b.ci_halfwidth == std::vector<double>{0.0, 0.0});

  const std::vector<std::vector<double>> same(5, std::vector<double>{0.1, 0.7, 1e6});
  CHECK(aggregate_ci(same).ci_halfwidth == std::vector<double>{0.0, 0.0, 0.0});

  CHECK_THROWS_AS(aggregate_ci(std::vector<std::vector<double>>{}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_ci(std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("property: aggregate_ci is invariant to run order") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(3.0, 7.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> runs(2 + gen() % 20, std::vector<double>(30));
    for (auto& r : runs)
      for (double& v : r) v = noise(gen);
    const auto a = aggregate_ci(runs);
    std::shuffle(runs.begin(), runs.end(), gen);
    const auto b = aggregate_ci(runs);
    CHECK(a.mean == b.mean);
    CHECK(a.ci_halfwidth == b.ci_halfwidth);
    for (double h : a.ci_halfwidth) CHECK(h >= 0.0);
  }
}

TEST_CASE("reference_curves") {
  const auto c = reference_curves(12.0, 10'000);
  REQUIRE(c.linear.size() == 10'000);
  CHECK(c.linear[0] == 12.0);
  CHECK(c.logarithmic[0] == 0.0);
  CHECK(c.logarithmic[2] == doctest::Approx(13.183347464017316).epsilon(1e-14));
  CHECK(c.linear.back() == 120'000.0);
}

TEST_CASE("oracle on table 1: counts match the constant allocation") {
  const auto cfg = table1_config({"oracle"}, 10'000, 1);
  const RunRecord r = run_single(cfg, "oracle", 0);
  const auto valid = valid_allocation_counts(r, cfg.environment.thresholds());
  CHECK(valid == std::vector<long>{0, 0, 10'000, 0, 0});
  const auto wins = success_counts(r);
  CHECK(wins[4] == 0);
  CHECK(std::abs(wins[2] - 6000.0) <= 4 * std::sqrt(0.24 * 10'000));
  CHECK(std::abs(cumulative_reward(r).back() - 120'000.0) <= 3920.0);
}

TEST_CASE("random on table 1: arm-0 valid allocations near 0.488 T") {
  const long horizon = 20'000;
  const auto cfg = table1_config({"random"}, horizon, 1);
  const RunRecord r = run_single(cfg, "random", 0);
  const auto valid = valid_allocation_counts(r, cfg.environment.thresholds());
  const double q = 0.488;
  CHECK(std::abs(valid[0] - q * horizon) <= 4 * std::sqrt(q * (1 - q) * horizon));
}

TEST_CASE("property: per-run identities on table 1 runs") {
  const auto env = table1_environment();
  const double mu_star = 12.0;
  for (const char* name : {"random", "independent_ucb1", "cooperative_ucb1", "t_coop_ucb", "oracle"}) {
    auto cfg = table1_config({name}, 2000, 3);
    for (int run = 0; run < 3; ++run) {
      const RunRecord r = run_single(cfg, name, run);
      const auto cum = cumulative_reward(r);
      const auto reg = regret_series(r, mu_star);
      for (std::size_t t = 0; t < cum.size(); ++t) {
        CHECK(reg[t] + cum[t] == static_cast<double>(t + 1) * mu_star);
        if (t > 0) CHECK(cum[t] >= cum[t - 1]);
      }
      const auto valid = valid_allocation_counts(r, env.thresholds());
      const auto wins = success_counts(r);
      for (int j = 0; j < env.num_arms(); ++j) {
        CHECK(valid[static_cast<std::size_t>(j)] >= wins[static_cast<std::size_t>(j)]);
        CHECK(valid[static_cast<std::size_t>(j)] <= r.horizon());
      }
      CHECK(wins[4] == 0);
    }
  }
}
