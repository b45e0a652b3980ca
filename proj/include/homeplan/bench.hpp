#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homeplan/executor.hpp"
#include "homeplan/sim.hpp"

#include <json.hpp>

namespace homeplan::bench {

enum class Mode { PVariant, SVariant };
enum class BackendKind { Remote, Scripted, RetrievalEcho };

const char* to_string(Mode m);
const char* to_string(BackendKind b);
std::optional<Mode> mode_from_name(const std::string& name);
std::optional<BackendKind> backend_from_name(const std::string& name);

struct RunConfig {
  Mode mode = Mode::PVariant;
  BackendKind backend = BackendKind::Scripted;
  bool qa_enabled = false;
  int k = 3;
  exec::Budgets budgets;
  std::uint64_t seed = 0;
  std::string suite_path;
  std::string out_dir;  // empty: nothing written to disk
  std::string memory_path;
  std::string templates_manifest;
  std::string scenes_dir;
  std::string data_dir;  // api texts, affordances, whitelist, prior
  std::optional<std::vector<Domain>> memory_domains;  // degradation runs
  int render_width = 120;
  int render_height = 120;
  int embed_dim = 256;
  planner::RemoteBackendConfig remote;
};

struct EpisodeOutcome {
  std::string episode_id;
  exec::EpisodeStatus status = exec::EpisodeStatus::Running;
  sim::MetricsReport metrics;
  std::string log_jsonl;
  std::string log_path;  // set when out_dir is given
};

struct Aggregates {
  double sr = 0, gc = 0, plw_sr = 0, plw_gc = 0;
  double mean_steps = 0;
  std::optional<double> cm, im, energy_pct;  // tidy episodes only
  int episodes = 0;
};

struct SuiteReport {
  std::string suite_id;
  std::vector<EpisodeOutcome> episodes;
  Aggregates aggregates;
  nlohmann::json config_echo;
  std::string content_hash;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

SuiteReport run_suite(const RunConfig& config);

Aggregates aggregate(const std::vector<EpisodeOutcome>& episodes);

struct ReplayVerdict {
  bool ok = false;
  std::string message;
  int actions_checked = 0;
};

// Re-steps the logged episode against a fresh world and verifies every action
// outcome plus the final world hash.
ReplayVerdict replay(const std::string& log_path, const RunConfig& config);
ReplayVerdict replay_jsonl(const std::string& log_jsonl, const RunConfig& config);

struct CompareReport {
  SuiteReport p_run;
  SuiteReport s_run;
  std::optional<SuiteReport> wrong_domain_run;
  std::string to_table() const;
};

// P vs S on the same suite/seed, plus the wrong-domain-memory degradation run
// when wrong_domains is given.
CompareReport compare_modes(const RunConfig& base,
                            const std::optional<std::vector<Domain>>& wrong_domains);

void write_report(const SuiteReport& report, const std::string& out_dir);

}  // namespace homeplan::bench
