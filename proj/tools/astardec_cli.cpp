#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "astardec/cli/fixtures.hpp"
#include "astardec/cli/run_config.hpp"
#include "astardec/eval/benchmark.hpp"
#include "astardec/eval/frontier.hpp"
#include "astardec/net/http_client.hpp"
#include "astardec/search/trace.hpp"

namespace {

using namespace astardec;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBackend = 2;
constexpr int kExitViolation = 3;

struct RunFlags {
  std::string config;
  std::string method;
  std::string dataset;
  std::string dataset_format;
  std::string output;
  std::uint64_t seed = 0;
  int workers = 1;
  bool resume = false;
  int k = 0;
  int d_max = 0;
  int b_max = 0;
  double tau_h = 1.0;
  std::uint64_t token_limit = 0;
  std::uint64_t budget = 0;
  int n = 0;
  double temperature = 0.8;
};

int cmd_run(const RunFlags& f, CLI::App& app) {
  cli::RunConfig config;
  if (!f.config.empty()) {
    config = cli::load_run_config(f.config);
  } else {
    config = cli::run_config_from_json(nlohmann::json::object(), std::filesystem::current_path());
  }
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--method")) config.method = eval::method_from_string(f.method);
  if (given("--dataset")) config.dataset = f.dataset;
  if (given("--dataset-format")) config.dataset_format = eval::dataset_format_from_string(f.dataset_format);
  if (given("--output")) config.output_dir = f.output;
  if (given("--seed")) cli::apply_seed(config, f.seed);
  if (given("--workers")) config.workers = f.workers;
  if (given("--resume")) config.resume = f.resume;
  auto& ctl = config.options.astar.controls;
  if (given("--k")) ctl.k = f.k;
  if (given("--d-max")) ctl.d_max = f.d_max;
  if (given("--b-max")) ctl.b_max = f.b_max;
  if (given("--tau-h")) ctl.tau_h = f.tau_h;
  if (given("--token-limit")) {
    ctl.token_limit = f.token_limit;
    config.options.baseline.token_limit = f.token_limit;
  }
  if (given("--budget")) {
    ctl.global_token_budget = f.budget;
    config.options.baseline.global_token_budget = f.budget;
  }
  if (given("--n")) config.options.baseline.n = f.n;
  if (given("--temperature")) {
    config.options.astar.sampling.temperature = f.temperature;
    config.options.baseline.sampling.temperature = f.temperature;
  }
  config.validate();

  const auto dataset = eval::load_dataset(config.dataset, config.dataset_format);
  auto policy = cli::make_policy(config.policy, config.base_dir);
  auto reward = cli::make_reward(config.reward, config.base_dir, config.seed);

  eval::BenchmarkConfig bench{config.output_dir, config.workers, config.resume};
  const auto summary = eval::run_benchmark(dataset, config.method, config.options, *policy, *reward, bench);
  std::printf("%s: %zu/%zu correct (accuracy %.4f), %zu failed, mean tokens %.1f, mean PRM passes %.1f\n",
              std::string(eval::to_string(summary.method)).c_str(), summary.n_correct, summary.n_problems,
              summary.accuracy, summary.n_failed, summary.mean_tokens, summary.mean_prm_passes);
  std::printf("wrote %s\n", (config.output_dir / "summary.json").string().c_str());
  if (summary.n_failed == summary.n_problems) {
    spdlog::error("every problem failed with a backend error");
    return kExitBackend;
  }
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& output) {
  if (dirs.empty()) throw ConfigError("compare: no run directories given");
  std::vector<eval::BenchmarkSummary> summaries;
  for (const auto& d : dirs) {
    const auto path = std::filesystem::path(d) / "summary.json";
    if (!std::filesystem::exists(path)) throw ConfigError("compare: " + d + " has no summary.json");
    summaries.push_back(eval::load_summary(path));
  }
  const auto rows = eval::export_frontier(summaries);
  if (output.empty()) {
    eval::write_frontier_csv(std::cout, rows);
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + output);
    eval::write_frontier_csv(out, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), output.c_str());
  }
  return kExitOk;
}

int cmd_replay(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("replay: no such file " + path);
  const auto events = search::read_trace_file(path);
  if (events.empty()) {
    std::printf("no events\n");
    return kExitOk;
  }
  const auto report = search::verify_trace(events);
  for (const auto& v : report.violations) std::printf("line %zu: %s\n", v.line, v.message.c_str());
  std::printf("%zu events, %zu pushes, %zu pops, %zu violations\n", report.events, report.pushes, report.pops,
              report.violations.size());
  return report.ok() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-first decoding over reasoning steps, with baselines and an evaluation harness"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error")->capture_default_str();

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Evaluate one method over a dataset");
  run->add_option("--config,-c", rf.config, "JSON run configuration");
  run->add_option("--method", rf.method, "astar|best_of_n|self_consistency|particle_filtering|pass_at_1");
  run->add_option("--dataset", rf.dataset, "Line-delimited dataset");
  run->add_option("--dataset-format", rf.dataset_format, "native|math500|aime");
  run->add_option("--output,-o", rf.output, "Output directory");
  run->add_option("--seed", rf.seed);
  run->add_option("--workers", rf.workers, "Problems evaluated concurrently");
  run->add_flag("--resume", rf.resume, "Skip problems already in records.jsonl");
  run->add_option("--k", rf.k, "Candidates per expansion (default 16)");
  run->add_option("--d-max", rf.d_max, "Depth before rollout (default 40)");
  run->add_option("--b-max", rf.b_max, "States kept per depth (default 5)");
  run->add_option("--tau-h", rf.tau_h, "Discard states with h above this (default 1.0)");
  run->add_option("--token-limit", rf.token_limit, "Per-trajectory token cap (default 4096)");
  run->add_option("--budget", rf.budget, "Global generated-token budget per problem");
  run->add_option("--n", rf.n, "Samples or particles for baselines (default 64)");
  run->add_option("--temperature", rf.temperature, "Sampling temperature (default 0.8)");

  std::vector<std::string> compare_dirs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Merge run summaries into a frontier CSV");
  compare->add_option("runs", compare_dirs, "Run directories")->required();
  compare->add_option("--output,-o", compare_out, "CSV path (default stdout)");

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "Re-check search invariants over a trace file");
  replay->add_option("trace", trace_path, "Trace file (.jsonl)")->required();

  std::string fixtures_dir = "fixtures";
  std::uint64_t fixtures_seed = 0;
  auto* gen = app.add_subcommand("gen-fixtures", "Write example datasets, scripts and configs");
  gen->add_option("--output,-o", fixtures_dir)->capture_default_str();
  gen->add_option("--seed", fixtures_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*run) return cmd_run(rf, *run);
    if (*compare) return cmd_compare(compare_dirs, compare_out);
    if (*replay) return cmd_replay(trace_path);
    if (*gen) {
      cli::write_fixtures(fixtures_dir, fixtures_seed);
      std::printf("wrote fixtures to %s\n", fixtures_dir.c_str());
      return kExitOk;
    }
  } catch (const TraceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const EmptyDataset& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return kExitBackend;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
