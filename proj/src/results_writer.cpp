#include "coopbandit/results_writer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "coopbandit/format.hpp"

namespace coopbandit {

namespace {

namespace fs = std::filesystem;

std::vector<const PolicyRuns*> sorted_policies(const ExperimentResult& result) {
  std::vector<const PolicyRuns*> out;
  for (const auto& p : result.policies) out.push_back(&p);
  std::sort(out.begin(), out.end(),
            [](const PolicyRuns* a, const PolicyRuns* b) { return a->policy_name < b->policy_name; });
  return out;
}

class CsvFile {
 public:
  explicit CsvFile(fs::path path) : path_(std::move(path)), out_(path_, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open '" + path_.string() + "' for writing");
  }

  void line(const std::string& row) {
    buffer_ += row;
    buffer_ += '\n';
    if (buffer_.size() > (1u << 20)) flush();
  }

  void close() {
    flush();
    out_.close();
    if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
  }

 private:
  void flush() {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
    buffer_.clear();
  }

  fs::path path_;
  std::ofstream out_;
  std::string buffer_;
};

void write_timeseries(const ExperimentResult& result, const fs::path& path) {
  CsvFile csv(path);
  csv.line(kTimeseriesHeader);
  std::string row;
  for (const PolicyRuns* p : sorted_policies(result)) {
    for (const RunRecord& r : p->runs) {
      const auto cum = cumulative_reward(r);
      const auto reg = regret_series(r, result.oracle.mu_star);
      const std::string prefix = p->policy_name + "," + std::to_string(r.run_id) + ",";
      for (std::size_t t = 0; t < cum.size(); ++t) {
        row = prefix;
        row += std::to_string(t + 1);
        row += ',';
        row += format_real(r.team_reward[t]);
        row += ',';
        row += format_real(cum[t]);
        row += ',';
        row += format_real(reg[t]);
        csv.line(row);
      }
    }
  }
  csv.close();
}

void write_allocations(const ExperimentResult& result, const fs::path& path) {
  CsvFile csv(path);
  csv.line(kAllocationsHeader);
  const auto thresholds = result.config.environment.thresholds();
  for (const PolicyRuns* p : sorted_policies(result)) {
    for (const RunRecord& r : p->runs) {
      const auto valid = valid_allocation_counts(r, thresholds);
      const auto wins = success_counts(r);
      for (std::size_t j = 0; j < valid.size(); ++j)
        csv.line(p->policy_name + "," + std::to_string(r.run_id) + "," + std::to_string(j) + "," +
                 std::to_string(valid[j]) + "," + std::to_string(wins[j]));
    }
  }
  csv.close();
}

void write_aggregates(const ExperimentResult& result, const fs::path& path) {
  CsvFile csv(path);
  csv.line(kAggregatesHeader);
  for (const PolicyRuns* p : sorted_policies(result)) {
    const std::pair<const char*, const AggregateSeries*> metrics[] = {
        {"cumulative_reward", &p->aggregates.cumulative_reward},
        {"regret", &p->aggregates.regret},
        {"windowed_reward", &p->aggregates.windowed_reward}};
    const std::size_t len = p->aggregates.cumulative_reward.mean.size();
    for (std::size_t t = 0; t < len; ++t)
      for (const auto& [name, series] : metrics)
        csv.line(p->policy_name + "," + std::to_string(t + 1) + "," + name + "," +
                 format_real(series->mean[t]) + "," + format_real(series->ci_halfwidth[t]));
  }
  csv.close();
}

}  // namespace

nlohmann::ordered_json build_meta(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  nlohmann::ordered_json arms = nlohmann::ordered_json::array();
  for (const ArmSpec& a : c.environment.arms())
    arms.push_back({{"success_prob", a.success_prob},
                    {"reward_magnitude", a.reward_magnitude},
                    {"threshold", a.threshold}});

  nlohmann::ordered_json config = {
      {"num_agents", c.environment.num_agents()},
      {"arms", arms},
      {"horizon", c.horizon},
      {"num_runs", c.num_runs},
      {"base_seed", c.base_seed},
      {"failure_threshold_m", c.failure_threshold_m},
      {"smoothing_window", c.smoothing_window},
      {"policies", c.policies},
      {"oracle_max_allocations", c.oracle_max_allocations},
      {"ucb_normalization", to_string(c.ucb_normalization)},
      {"coop_reward_basis", to_string(c.coop_reward_basis)},
      {"independent_tie_break", to_string(c.independent_tie_break)}};

  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  for (const auto& name : c.policies) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (int r = 0; r < c.num_runs; ++r)
      list.push_back(derive_run_seed(c.base_seed, name, static_cast<std::uint64_t>(r)));
    seeds[name] = list;
  }

  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.config_hash));

  return {{"software_version", kSoftwareVersion},
          {"config_hash", hash},
          {"config", config},
          {"mu_star", result.oracle.mu_star},
          {"oracle_allocation", result.oracle.allocation},
          {"base_seed", c.base_seed},
          {"seed_derivation", "splitmix64(splitmix64(splitmix64(base_seed) ^ fnv1a64(policy)) ^ run_index)"},
          {"seeds", seeds},
          {"ci_method", kCiMethod},
          {"ci_level", 0.95},
          {"windowed_reward", "trailing mean over the last smoothing_window rounds"}};
}

std::vector<fs::path> write_results(const ExperimentResult& result, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<fs::path> written = {out_dir / kTimeseriesFile, out_dir / kAllocationsFile,
                                   out_dir / kAggregatesFile, out_dir / kMetaFile};
  write_timeseries(result, written[0]);
  write_allocations(result, written[1]);
  write_aggregates(result, written[2]);

  std::ofstream meta(written[3], std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open '" + written[3].string() + "' for writing");
  meta << build_meta(result).dump(2) << '\n';
  meta.close();
  if (!meta) throw std::runtime_error("failed writing '" + written[3].string() + "'");
  return written;
}

}  // namespace coopbandit
