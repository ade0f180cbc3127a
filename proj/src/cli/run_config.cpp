#include "astardec/cli/run_config.hpp"

#include <fstream>

#include "astardec/heuristic/prm_http.hpp"
#include "astardec/policy/http_policy.hpp"
#include "astardec/policy/scripted_policy.hpp"
#include "astardec/toyenv/chain.hpp"

namespace astardec::cli {
namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

template <typename T>
void read_field(const nlohmann::json& section, const char* key, T& into, const std::string& where) {
  if (!section.contains(key) || section[key].is_null()) return;
  try {
    into = section[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config field '" + where + key + "' has the wrong type");
  }
}

std::string require_string(const nlohmann::json& section, const char* key, const std::string& where) {
  if (!section.contains(key) || !section[key].is_string() || section[key].get<std::string>().empty()) {
    throw ConfigError("config field '" + where + key + "' is required");
  }
  return section[key].get<std::string>();
}

net::EndpointConfig endpoint_from(const nlohmann::json& s, const std::string& where) {
  net::EndpointConfig e;
  e.base_url = require_string(s, "base_url", where);
  read_field(s, "api_key_env", e.api_key_env, where);
  read_field(s, "max_in_flight", e.max_in_flight, where);
  read_field(s, "max_attempts", e.retry.max_attempts, where);
  int backoff_ms = static_cast<int>(e.retry.initial_backoff.count());
  read_field(s, "initial_backoff_ms", backoff_ms, where);
  e.retry.initial_backoff = std::chrono::milliseconds(backoff_ms);
  int timeout_s = static_cast<int>(e.timeout.count());
  read_field(s, "timeout_s", timeout_s, where);
  e.timeout = std::chrono::seconds(timeout_s);
  if (e.max_in_flight < 1) throw ConfigError("config field '" + where + "max_in_flight' must be positive");
  if (e.retry.max_attempts < 1) throw ConfigError("config field '" + where + "max_attempts' must be positive");
  return e;
}

}  // namespace

void RunConfig::validate() const {
  if (dataset.empty()) throw ConfigError("config field 'dataset' is required");
  if (!std::filesystem::exists(dataset)) throw ConfigError("config field 'dataset': no such file " + dataset.string());
  if (output_dir.empty()) throw ConfigError("config field 'output_dir' is required");
  if (workers < 1) throw ConfigError("config field 'workers' must be at least 1");
  if (!policy.is_object() || !policy.contains("backend")) {
    throw ConfigError("config field 'policy.backend' is required");
  }
  const bool needs_reward = method == eval::Method::astar || method == eval::Method::best_of_n ||
                            method == eval::Method::particle_filtering;
  if (needs_reward && (!reward.is_object() || !reward.contains("backend"))) {
    throw ConfigError("config field 'reward.backend' is required for method " + std::string(eval::to_string(method)));
  }
  if (method == eval::Method::astar) {
    options.astar.controls.validate();
  } else if (options.baseline.n < 1) {
    throw ConfigError("config field 'baseline.n' must be at least 1");
  }
  if (options.astar.sampling.temperature < 0.0) throw ConfigError("config field 'sampling.temperature' must be >= 0");
  if (!(options.astar.sampling.top_p > 0.0 && options.astar.sampling.top_p <= 1.0)) {
    throw ConfigError("config field 'sampling.top_p' must be in (0, 1]");
  }
}

RunConfig run_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;

  std::string method = "astar";
  read_field(doc, "method", method, "");
  c.method = eval::method_from_string(method);

  std::string path;
  read_field(doc, "dataset", path, "");
  c.dataset = resolve(path, base_dir);
  std::string format = "native";
  read_field(doc, "dataset_format", format, "");
  c.dataset_format = eval::dataset_format_from_string(format);
  path.clear();
  read_field(doc, "output_dir", path, "");
  c.output_dir = resolve(path, base_dir);
  read_field(doc, "seed", c.seed, "");
  read_field(doc, "workers", c.workers, "");
  read_field(doc, "resume", c.resume, "");

  if (doc.contains("controls")) {
    const auto& s = doc["controls"];
    auto& ctl = c.options.astar.controls;
    read_field(s, "k", ctl.k, "controls.");
    read_field(s, "d_max", ctl.d_max, "controls.");
    read_field(s, "b_max", ctl.b_max, "controls.");
    read_field(s, "tau_h", ctl.tau_h, "controls.");
    read_field(s, "token_limit", ctl.token_limit, "controls.");
    std::uint64_t budget = 0;
    read_field(s, "global_token_budget", budget, "controls.");
    if (budget > 0) ctl.global_token_budget = budget;
    read_field(s, "scoring_workers", c.options.astar.scoring_workers, "controls.");
  }

  policy::SamplingParams sampling;
  if (doc.contains("sampling")) {
    const auto& s = doc["sampling"];
    read_field(s, "temperature", sampling.temperature, "sampling.");
    read_field(s, "top_p", sampling.top_p, "sampling.");
    read_field(s, "max_tokens_per_step", sampling.max_tokens_per_step, "sampling.");
    read_field(s, "stop", sampling.stop_markers, "sampling.");
  }
  c.options.astar.sampling = sampling;
  c.options.baseline.sampling = sampling;

  auto& b = c.options.baseline;
  b.token_limit = c.options.astar.controls.token_limit;
  b.global_token_budget = c.options.astar.controls.global_token_budget;
  if (doc.contains("baseline")) {
    const auto& s = doc["baseline"];
    read_field(s, "n", b.n, "baseline.");
    read_field(s, "max_steps", b.max_steps, "baseline.");
    read_field(s, "workers", b.workers, "baseline.");
  }

  if (doc.contains("policy")) c.policy = doc["policy"];
  if (doc.contains("reward")) c.reward = doc["reward"];
  apply_seed(c, c.seed);
  return c;
}

void apply_seed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.options.astar.sampling.seed = seed;
  config.options.baseline.sampling.seed = seed;
  config.options.baseline.seed = seed;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(doc, path.parent_path());
}

std::unique_ptr<policy::Policy> make_policy(const nlohmann::json& section, const std::filesystem::path& base_dir) {
  const std::string backend = require_string(section, "backend", "policy.");
  if (backend == "scripted") {
    const auto script = resolve(require_string(section, "script", "policy."), base_dir);
    return std::make_unique<policy::ScriptedPolicy>(policy::ScriptedPolicy::load(script));
  }
  if (backend == "http") {
    policy::HttpPolicyConfig cfg;
    cfg.endpoint = endpoint_from(section, "policy.");
    cfg.model = require_string(section, "model", "policy.");
    read_field(section, "completions_path", cfg.completions_path, "policy.");
    read_field(section, "independent_requests", cfg.independent_requests, "policy.");
    return std::make_unique<policy::HttpPolicy>(std::move(cfg));
  }
  if (backend == "chain") {
    double accuracy = 0.6;
    read_field(section, "step_accuracy", accuracy, "policy.");
    return std::make_unique<toyenv::ChainPolicy>(accuracy);
  }
  throw ConfigError("config field 'policy.backend': unknown backend '" + backend + "'");
}

std::unique_ptr<heuristic::RewardModel> make_reward(const nlohmann::json& section,
                                                    const std::filesystem::path& base_dir, std::uint64_t seed) {
  if (section.is_null()) return std::make_unique<heuristic::ConstantReward>(0.0);
  const std::string backend = require_string(section, "backend", "reward.");
  if (backend == "constant") {
    double value = 0.5;
    read_field(section, "value", value, "reward.");
    return std::make_unique<heuristic::ConstantReward>(value);
  }
  if (backend == "table") {
    const auto table = resolve(require_string(section, "path", "reward."), base_dir);
    return std::make_unique<heuristic::TableReward>(heuristic::TableReward::load(table.string()));
  }
  if (backend == "chain") {
    double noise = 0.2;
    read_field(section, "noise", noise, "reward.");
    std::uint64_t reward_seed = seed;
    read_field(section, "seed", reward_seed, "reward.");
    return std::make_unique<toyenv::ChainReward>(noise, reward_seed);
  }
  if (backend == "prm_http") {
    heuristic::PrmHttpConfig cfg;
    cfg.endpoint = endpoint_from(section, "reward.");
    read_field(section, "model", cfg.model, "reward.");
    read_field(section, "score_path", cfg.score_path, "reward.");
    return std::make_unique<heuristic::PrmHttpReward>(std::move(cfg));
  }
  throw ConfigError("config field 'reward.backend': unknown backend '" + backend + "'");
}

}  // namespace astardec::cli
