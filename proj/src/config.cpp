#include "coopbandit/config.hpp"

#include <yaml-cpp/yaml.h>

#include "coopbandit/format.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace coopbandit {

namespace {

const std::set<std::string, std::less<>> kTopLevelKeys = {
    "num_agents",        "horizon",          "num_runs",
    "base_seed",         "failure_threshold_m", "policies",
    "smoothing_window",  "arms",             "oracle_max_allocations",
    "ucb_normalization", "coop_reward_basis", "independent_tie_break"};

const std::set<std::string, std::less<>> kArmKeys = {"success_prob", "reward_magnitude",
                                                     "threshold"};

template <typename T>
T read_scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError("field '" + field + "': expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("field '" + field + "': cannot parse '" + node.Scalar() + "'");
  }
}

template <typename T>
T read_optional(const YAML::Node& root, const std::string& field, T fallback) {
  const YAML::Node node = root[field];
  if (!node) return fallback;
  return read_scalar<T>(node, field);
}

template <typename Enum, std::size_t N>
Enum read_enum(const YAML::Node& root, const std::string& field, Enum fallback,
               const std::pair<std::string_view, Enum> (&choices)[N]) {
  const YAML::Node node = root[field];
  if (!node) return fallback;
  const auto text = read_scalar<std::string>(node, field);
  for (const auto& [name, value] : choices)
    if (name == text) return value;
  std::string valid;
  for (const auto& [name, value] : choices) valid += (valid.empty() ? "" : ", ") + std::string(name);
  throw ConfigError("field '" + field + "': unknown value '" + text + "' (valid: " + valid + ")");
}

constexpr std::pair<std::string_view, UcbNormalization> kNormalizationNames[] = {
    {"running_max", UcbNormalization::kRunningMax}, {"none", UcbNormalization::kNone}};
constexpr std::pair<std::string_view, CoopRewardBasis> kBasisNames[] = {
    {"agent_share", CoopRewardBasis::kAgentShare}, {"team", CoopRewardBasis::kTeam}};
constexpr std::pair<std::string_view, TieBreak> kTieBreakNames[] = {
    {"random", TieBreak::kRandom}, {"lowest_index", TieBreak::kLowestIndex}};

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum v, const std::pair<std::string_view, Enum> (&choices)[N]) {
  for (const auto& [name, value] : choices)
    if (value == v) return name;
  return "?";
}

std::string registered_names_list() {
  std::string out;
  for (auto n : registered_policy_names()) out += (out.empty() ? "" : ", ") + std::string(n);
  return out;
}

std::vector<ArmSpec> read_arms(const YAML::Node& root) {
  const YAML::Node arms = root["arms"];
  if (!arms) throw ConfigError("missing required field 'arms'");
  if (!arms.IsSequence()) throw ConfigError("field 'arms': expected a list of arm tables");
  std::vector<ArmSpec> out;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const YAML::Node arm = arms[i];
    const std::string prefix = "arms[" + std::to_string(i) + "]";
    if (!arm.IsMap()) throw ConfigError("field '" + prefix + "': expected a table");
    for (const auto& kv : arm) {
      const auto key = kv.first.as<std::string>();
      if (!kArmKeys.contains(key)) throw ConfigError("unknown field '" + prefix + "." + key + "'");
    }
    for (const auto& key : kArmKeys)
      if (!arm[key]) throw ConfigError("missing required field '" + prefix + "." + key + "'");
    out.push_back({read_scalar<double>(arm["success_prob"], prefix + ".success_prob"),
                   read_scalar<double>(arm["reward_magnitude"], prefix + ".reward_magnitude"),
                   read_scalar<int>(arm["threshold"], prefix + ".threshold")});
  }
  return out;
}

EnvironmentSpec read_environment(const YAML::Node& root) {
  if (!root["num_agents"]) throw ConfigError("missing required field 'num_agents'");
  const int num_agents = read_scalar<int>(root["num_agents"], "num_agents");
  std::vector<ArmSpec> arms = read_arms(root);
  try {
    return EnvironmentSpec(std::move(arms), num_agents);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid environment: ") + e.what());
  }
}

std::vector<std::string> read_policies(const YAML::Node& root) {
  const YAML::Node node = root["policies"];
  if (!node) return {registered_policy_names().begin(), registered_policy_names().end()};
  if (!node.IsSequence()) throw ConfigError("field 'policies': expected a list of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(read_scalar<std::string>(node[i], "policies[" + std::to_string(i) + "]"));
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("override '" + std::string(key) + "': cannot parse '" + std::string(text) +
                      "' as an integer");
  return value;
}

}  // namespace

PolicyOptions ExperimentConfig::policy_options() const {
  return {failure_threshold_m, ucb_normalization, coop_reward_basis, independent_tie_break,
          oracle_max_allocations};
}

std::string_view to_string(UcbNormalization v) { return enum_name(v, kNormalizationNames); }
std::string_view to_string(CoopRewardBasis v) { return enum_name(v, kBasisNames); }
std::string_view to_string(TieBreak v) { return enum_name(v, kTieBreakNames); }

ExperimentConfig make_config(EnvironmentSpec environment) {
  ExperimentConfig c{.environment = std::move(environment)};
  c.policies.assign(registered_policy_names().begin(), registered_policy_names().end());
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (c.horizon < 1) throw ConfigError("field 'horizon': must be >= 1");
  if (c.num_runs < 1) throw ConfigError("field 'num_runs': must be >= 1");
  if (c.failure_threshold_m < 1) throw ConfigError("field 'failure_threshold_m': must be >= 1");
  if (c.smoothing_window < 1) throw ConfigError("field 'smoothing_window': must be >= 1");
  if (c.policies.empty()) throw ConfigError("field 'policies': list is empty");
  std::set<std::string, std::less<>> seen;
  for (const auto& p : c.policies) {
    if (!is_registered_policy(p))
      throw ConfigError("field 'policies': unknown policy '" + p +
                        "' (valid: " + registered_names_list() + ")");
    if (!seen.insert(p).second) throw ConfigError("field 'policies': duplicate policy '" + p + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  if (!root.IsMap()) throw ConfigError(std::string(source) + ": expected a mapping at top level");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kTopLevelKeys.contains(key)) throw ConfigError("unknown field '" + key + "'");
  }

  ExperimentConfig c{.environment = read_environment(root)};
  c.horizon = read_optional<long>(root, "horizon", kDefaultHorizon);
  c.num_runs = read_optional<int>(root, "num_runs", kDefaultNumRuns);
  c.base_seed = read_optional<std::uint64_t>(root, "base_seed", 0);
  c.failure_threshold_m = read_optional<int>(root, "failure_threshold_m", kDefaultFailureThreshold);
  c.smoothing_window = read_optional<int>(root, "smoothing_window", kDefaultSmoothingWindow);
  c.policies = read_policies(root);
  c.oracle_max_allocations =
      read_optional<std::uint64_t>(root, "oracle_max_allocations", kDefaultOracleMaxAllocations);
  c.ucb_normalization = read_enum(root, "ucb_normalization", c.ucb_normalization, kNormalizationNames);
  c.coop_reward_basis = read_enum(root, "coop_reward_basis", c.coop_reward_basis, kBasisNames);
  c.independent_tie_break =
      read_enum(root, "independent_tie_break", c.independent_tie_break, kTieBreakNames);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
  const auto key = assignment.substr(0, eq);
  const auto value = assignment.substr(eq + 1);
  if (key == "horizon")
    config.horizon = parse_int<long>(key, value);
  else if (key == "runs")
    config.num_runs = parse_int<int>(key, value);
  else if (key == "seed")
    config.base_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "m")
    config.failure_threshold_m = parse_int<int>(key, value);
  else
    throw ConfigError("override '" + std::string(key) +
                      "': unknown key (valid: horizon, runs, seed, m)");
  validate_config(config);
}

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "num_agents" << YAML::Value << c.environment.num_agents();
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "num_runs" << YAML::Value << c.num_runs;
  out << YAML::Key << "base_seed" << YAML::Value << c.base_seed;
  out << YAML::Key << "failure_threshold_m" << YAML::Value << c.failure_threshold_m;
  out << YAML::Key << "smoothing_window" << YAML::Value << c.smoothing_window;
  out << YAML::Key << "oracle_max_allocations" << YAML::Value << c.oracle_max_allocations;
  out << YAML::Key << "ucb_normalization" << YAML::Value << std::string(to_string(c.ucb_normalization));
  out << YAML::Key << "coop_reward_basis" << YAML::Value << std::string(to_string(c.coop_reward_basis));
  out << YAML::Key << "independent_tie_break" << YAML::Value
      << std::string(to_string(c.independent_tie_break));
  out << YAML::Key << "policies" << YAML::Value << YAML::Flow << c.policies;
  out << YAML::Key << "arms" << YAML::Value << YAML::BeginSeq;
  for (const ArmSpec& a : c.environment.arms()) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "success_prob" << YAML::Value << format_real(a.success_prob);
    out << YAML::Key << "reward_magnitude" << YAML::Value << format_real(a.reward_magnitude);
    out << YAML::Key << "threshold" << YAML::Value << a.threshold;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace coopbandit
