#include "coopbandit/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <vector>

#include "CLI11.hpp"
#include "coopbandit/config.hpp"
#include "coopbandit/experiment.hpp"
#include "coopbandit/format.hpp"
#include "coopbandit/results_writer.hpp"

namespace coopbandit::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

ExperimentConfig load_with_overrides(const std::string& path,
                                     std::span<const std::string> overrides) {
  ExperimentConfig config = load_config(path);
  for (const auto& o : overrides) apply_override(config, o);
  return config;
}

int threads_from_env(std::ostream& err) {
  const char* raw = std::getenv(kThreadsEnvVar);
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1) {
    err << "warning: ignoring " << kThreadsEnvVar << "='" << raw << "' (expected a positive integer)\n";
    return 0;
  }
  return static_cast<int>(v);
}

std::string format_allocation(const std::vector<int>& allocation) {
  std::string s = "[";
  for (std::size_t i = 0; i < allocation.size(); ++i)
    s += (i ? ", " : "") + std::to_string(allocation[i]);
  return s + "]";
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::span<const std::string> overrides, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = load_with_overrides(config_path, overrides);
  const ExperimentResult result = run_experiment(config, threads_from_env(err));
  write_results(result, out_dir);

  out << "mu_star = " << result.oracle.mu_star << ", horizon = " << config.horizon
      << ", runs = " << config.num_runs << "\n";
  out << std::left << std::setw(20) << "policy" << std::right << std::setw(16)
      << "final cum. reward" << std::setw(12) << "95% CI" << std::setw(16) << "final regret" << "\n";
  out << std::fixed << std::setprecision(1);
  for (const auto& p : result.policies) {
    const auto& cum = p.aggregates.cumulative_reward;
    const auto& reg = p.aggregates.regret;
    out << std::left << std::setw(20) << p.policy_name << std::right << std::setw(16)
        << cum.mean.back() << std::setw(12) << ("+/-" + std::to_string(static_cast<long>(cum.ci_halfwidth.back() + 0.5)))
        << std::setw(16) << reg.mean.back() << "\n";
  }
  out << std::defaultfloat;
  out << "results written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_oracle(const std::string& config_path, std::span<const std::string> overrides,
               std::ostream& out, std::ostream&) {
  const ExperimentConfig config = load_with_overrides(config_path, overrides);
  const OracleResult oracle = oracle_allocation(config.environment, config.oracle_max_allocations);
  out << "allocation: " << format_allocation(oracle.allocation) << "\n";
  std::string mu = format_real(oracle.mu_star);
  if (mu.find_first_of(".en") == std::string::npos) mu += ".0";
  out << "mu_star: " << mu << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& config_path, std::span<const std::string> overrides,
                 std::ostream& out, std::ostream&) {
  const ExperimentConfig config = load_with_overrides(config_path, overrides);
  out << to_yaml(config);
  return kExitOk;
}

int main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooperative threshold-activated multi-agent bandit experiments", "coopbandit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  const char* override_help = "Override a scalar config value: horizon, runs, seed or m (repeatable)";

  auto* run = app.add_subcommand("run", "Run every configured policy and write CSV/JSON results");
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory for the result files")->required();
  run->add_option("--override", overrides, override_help)->allow_extra_args(false);

  auto* oracle = app.add_subcommand("oracle", "Print the optimal allocation and its expected reward");
  oracle->add_option("--config", config_path, "Experiment config file")->required();
  oracle->add_option("--override", overrides, override_help)->allow_extra_args(false);

  auto* validate = app.add_subcommand("validate", "Validate a config and print it with defaults resolved");
  validate->add_option("--config", config_path, "Experiment config file")->required();
  validate->add_option("--override", overrides, override_help)->allow_extra_args(false);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("coopbandit");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides, out, err);
    if (oracle->parsed()) return cmd_oracle(config_path, overrides, out, err);
    return cmd_validate(config_path, overrides, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace coopbandit::cli
