// Command-line harness: run episode suites, replay logs, compare variants.

#include <iostream>

#include "homeplan/bench.hpp"
#include "homeplan/text.hpp"

#include <CLI11.hpp>

using namespace homeplan;

namespace {

void add_run_options(CLI::App* cmd, bench::RunConfig* config, std::string* mode,
                     std::string* backend, std::string* domains) {
  cmd->add_option("--suite", config->suite_path, "Suite file (JSON)")->required();
  cmd->add_option("--mode", *mode, "Variant: P (prompt retrieval) or S (shared memory)");
  cmd->add_option("--backend", *backend, "Planner backend: scripted | retrieval-echo | remote");
  cmd->add_flag("--qa", config->qa_enabled, "Enable question asking");
  cmd->add_option("--k", config->k, "Retrieved in-context examples");
  cmd->add_option("--seed", config->seed, "Run seed");
  cmd->add_option("--out", config->out_dir, "Output directory for logs and reports");
  cmd->add_option("--memory", config->memory_path, "Example memory (JSONL)");
  cmd->add_option("--templates", config->templates_manifest, "Template manifest (JSON)");
  cmd->add_option("--scenes", config->scenes_dir, "Scene directory");
  cmd->add_option("--data", config->data_dir, "Data directory (affordances, APIs, prior)");
  cmd->add_option("--max-steps", config->budgets.max_steps, "Step budget per episode");
  cmd->add_option("--max-api-failures", config->budgets.max_api_failures,
                  "API failure budget per episode");
  cmd->add_option("--max-replans", config->budgets.max_replans, "Replan budget per episode");
  cmd->add_option("--render-size", config->render_width, "Square render resolution");
  cmd->add_option("--memory-domains", *domains,
                  "Restrict memory to comma-separated domains (degradation runs)");
  cmd->add_option("--remote-endpoint", config->remote.endpoint_host,
                  "Remote backend endpoint (scheme://host:port)");
  cmd->add_option("--remote-model", config->remote.model, "Remote backend model name");
}

bool finalize_config(bench::RunConfig* config, const std::string& mode,
                     const std::string& backend, const std::string& domains) {
  if (!mode.empty()) {
    auto m = bench::mode_from_name(mode);
    if (!m) {
      std::cerr << "unknown mode: " << mode << "\n";
      return false;
    }
    config->mode = *m;
  }
  if (!backend.empty()) {
    auto b = bench::backend_from_name(backend);
    if (!b) {
      std::cerr << "unknown backend: " << backend << "\n";
      return false;
    }
    config->backend = *b;
  }
  if (!domains.empty()) {
    std::vector<Domain> parsed;
    for (const auto& part : text::split(domains, ',')) {
      auto d = domain_from_name(text::trim(part));
      if (!d) {
        std::cerr << "unknown domain: " << part << "\n";
        return false;
      }
      parsed.push_back(*d);
    }
    config->memory_domains = parsed;
  }
  config->render_height = config->render_width;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"household plan-program agent benchmark"};
  app.require_subcommand(1);

  bench::RunConfig config;
  config.memory_path = "data/memory/examples.jsonl";
  config.templates_manifest = "data/templates/manifest.json";
  config.scenes_dir = "data/scenes";
  config.data_dir = "data";
  std::string mode_name, backend_name, domains_arg, wrong_domains_arg, log_path;

  CLI::App* run = app.add_subcommand("run", "Run a suite and write logs + report");
  add_run_options(run, &config, &mode_name, &backend_name, &domains_arg);

  CLI::App* compare = app.add_subcommand(
      "compare", "Run P and S variants side by side, plus a wrong-domain memory run");
  add_run_options(compare, &config, &mode_name, &backend_name, &domains_arg);
  compare->add_option("--wrong-domains", wrong_domains_arg,
                      "Domains for the degradation run (comma-separated)");

  CLI::App* replay = app.add_subcommand("replay", "Verify an episode log");
  replay->add_option("--log", log_path, "Episode log (JSONL)")->required();
  replay->add_option("--scenes", config.scenes_dir, "Scene directory");
  replay->add_option("--data", config.data_dir, "Data directory");
  replay->add_option("--memory", config.memory_path, "Example memory (JSONL)");
  replay->add_option("--templates", config.templates_manifest, "Template manifest (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!finalize_config(&config, mode_name, backend_name, domains_arg)) return 2;
      bench::SuiteReport report = bench::run_suite(config);
      std::cout << report.to_table();
      return 0;  // suite completed, independent of SR
    }
    if (compare->parsed()) {
      if (!finalize_config(&config, mode_name, backend_name, domains_arg)) return 2;
      std::optional<std::vector<Domain>> wrong;
      if (!wrong_domains_arg.empty()) {
        std::vector<Domain> parsed;
        for (const auto& part : text::split(wrong_domains_arg, ',')) {
          auto d = domain_from_name(text::trim(part));
          if (!d) {
            std::cerr << "unknown domain: " << part << "\n";
            return 2;
          }
          parsed.push_back(*d);
        }
        wrong = parsed;
      }
      bench::CompareReport report = bench::compare_modes(config, wrong);
      std::cout << report.to_table();
      return 0;
    }
    if (replay->parsed()) {
      bench::ReplayVerdict verdict = bench::replay(log_path, config);
      std::cout << (verdict.ok ? "OK" : "FAIL") << ": " << verdict.message << " ("
                << verdict.actions_checked << " actions)\n";
      return verdict.ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
