#include "coopbandit/experiment.hpp"

#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coopbandit/policy.hpp"

namespace coopbandit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Job {
  std::size_t policy_slot;
  int run_index;
};

std::vector<Job> make_jobs(const ExperimentConfig& config) {
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < config.policies.size(); ++p)
    for (int r = 0; r < config.num_runs; ++r) jobs.push_back({p, r});
  return jobs;
}

ExperimentResult prepare(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentResult result{.config = config,
                          .oracle = oracle_allocation(config.environment, config.oracle_max_allocations)};
  result.config_hash = fnv1a64(to_yaml(config));
  for (const auto& name : config.policies) {
    PolicyRuns pr;
    pr.policy_name = name;
    pr.runs.resize(static_cast<std::size_t>(config.num_runs));
    result.policies.push_back(std::move(pr));
  }
  return result;
}

void finish(ExperimentResult& result) {
  for (auto& pr : result.policies)
    pr.aggregates = aggregate_policy(pr.runs, result.oracle.mu_star, result.config.smoothing_window);
}

void rethrow_first(const std::vector<std::exception_ptr>& errors, const std::vector<Job>& jobs,
                   const ExperimentConfig& config) {
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const std::string ctx = "policy '" + config.policies[jobs[i].policy_slot] + "' run " +
                            std::to_string(jobs[i].run_index) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error(ctx + e.what());
    }
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::string_view policy_name,
                              std::uint64_t run_index) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ fnv1a64(policy_name));
  return splitmix64(h ^ run_index);
}

RunRecord run_single(const ExperimentConfig& config, std::string_view policy_name, int run_index) {
  const EnvironmentSpec& env = config.environment;
  auto policy = make_policy(policy_name, env, config.policy_options());
  Rng rng(derive_run_seed(config.base_seed, policy_name, static_cast<std::uint64_t>(run_index)));

  const int k = env.num_arms();
  const auto horizon = static_cast<std::size_t>(config.horizon);
  RunRecord rec;
  rec.run_id = run_index;
  rec.policy_name = std::string(policy_name);
  rec.num_arms = k;
  rec.team_reward.reserve(horizon);
  rec.coalition_size.reserve(horizon * static_cast<std::size_t>(k));
  rec.activated.reserve(horizon * static_cast<std::size_t>(k));
  rec.succeeded.reserve(horizon * static_cast<std::size_t>(k));

  for (long t = 1; t <= config.horizon; ++t) {
    const JointAction action = policy->select_actions(t, rng);
    validate_action(action, env);
    const RoundOutcome outcome = resolve_round(env, action, rng);
    policy->observe(t, outcome);

    rec.team_reward.push_back(outcome.team_reward);
    for (int j = 0; j < k; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      rec.coalition_size.push_back(static_cast<std::uint8_t>(outcome.coalition_sizes[uj]));
      rec.activated.push_back(outcome.activated[uj] ? 1 : 0);
      rec.succeeded.push_back(outcome.succeeded[uj] ? 1 : 0);
    }
  }
  if (auto th = policy->threshold_estimates()) rec.final_threshold_estimates = std::move(*th);
  return rec;
}

PolicyAggregates aggregate_policy(std::span<const RunRecord> runs, double mu_star,
                                  int smoothing_window) {
  std::vector<std::vector<double>> cum, regret, windowed;
  for (const RunRecord& r : runs) {
    cum.push_back(cumulative_reward(r));
    regret.push_back(regret_series(r, mu_star));
    windowed.push_back(windowed_mean(r.team_reward, smoothing_window));
  }
  return {aggregate_ci(cum), aggregate_ci(regret), aggregate_ci(windowed)};
}

const PolicyRuns& ExperimentResult::policy(std::string_view name) const {
  for (const auto& p : policies)
    if (p.policy_name == name) return p;
  throw std::out_of_range("no results for policy '" + std::string(name) + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config, int max_threads) {
  if (config.environment.num_agents() > 255)
    throw std::invalid_argument("run records store coalition sizes in 8 bits; num_agents > 255");
  ExperimentResult result = prepare(config);
  const std::vector<Job> jobs = make_jobs(config);
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto n = static_cast<long>(jobs.size());

#ifdef _OPENMP
  const int threads = max_threads > 0 ? max_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long i = 0; i < n; ++i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    try {
      result.policies[job.policy_slot].runs[static_cast<std::size_t>(job.run_index)] =
          run_single(config, config.policies[job.policy_slot], job.run_index);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors, jobs, config);
  finish(result);
  return result;
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
  if (config.environment.num_agents() > 255)
    throw std::invalid_argument("run records store coalition sizes in 8 bits; num_agents > 255");
  ExperimentResult result = prepare(config);
  const std::vector<Job> jobs = make_jobs(config);
  std::vector<std::exception_ptr> errors(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      result.policies[jobs[i].policy_slot].runs[static_cast<std::size_t>(jobs[i].run_index)] =
          run_single(config, config.policies[jobs[i].policy_slot], jobs[i].run_index);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors, jobs, config);
  finish(result);
  return result;
}

}  // namespace coopbandit
