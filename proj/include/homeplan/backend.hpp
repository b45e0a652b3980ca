#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homeplan/plan_dsl.hpp"
#include "homeplan/prompt.hpp"

namespace homeplan::planner {

struct RetrievedExample {
  std::string id;
  std::string program_text;
};

struct PlannerRequest {
  prompt::AssembledPrompt prompt;
  double temperature = 0.0;
  int max_output_chars = 16384;
  std::string command;  // raw language input, before prompt assembly
  std::vector<RetrievedExample> retrieved;  // ranked, as placed in the prompt
};

struct PlannerResponse {
  std::string program_text;
  std::string backend_id;
  long long latency_ms = 0;
};

// Everything nondeterministic sits behind this interface.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual PlannerResponse generate(const PlannerRequest& request) = 0;
  virtual std::string id() const = 0;
};

// Canned programs matched by command fingerprint (substring of the raw
// command). For question/answer prompts, falls back to deterministic rules
// mirroring the QA listings, so suites run without a live model.
class ScriptedBackend final : public Backend {
 public:
  struct Entry {
    std::string match;    // substring of the command
    std::string program;  // response text
  };

  ScriptedBackend(std::vector<Entry> entries, const dsl::Whitelist* whitelist,
                  bool qa_rules = true);
  PlannerResponse generate(const PlannerRequest& request) override;
  std::string id() const override { return "scripted"; }

 private:
  std::string synthesize_question(const PlannerRequest& request) const;
  std::string synthesize_answer_script(const PlannerRequest& request) const;

  std::vector<Entry> entries_;
  const dsl::Whitelist* whitelist_;
  bool qa_rules_;
};

// Zero-LLM baseline: echoes the rank-1 retrieved example program verbatim.
class RetrievalEchoBackend final : public Backend {
 public:
  RetrievalEchoBackend() = default;
  PlannerResponse generate(const PlannerRequest& request) override;
  std::string id() const override { return "retrieval-echo"; }
};

struct RemoteBackendConfig {
  std::string endpoint_host;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "HOMEPLAN_API_KEY";
  int timeout_ms = 60000;
};

// Chat-completion wire contract. Network-gated; default test runs never use it.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteBackendConfig config);
  PlannerResponse generate(const PlannerRequest& request) override;
  std::string id() const override { return "remote"; }

 private:
  RemoteBackendConfig config_;
};

// Parses an oracle answer sentence ("The X is to your left on the countertop.")
// into a QA action script; shared by ScriptedBackend and tests.
std::string answer_sentence_to_script(const std::string& answer, const std::string& category,
                                      const dsl::Whitelist& whitelist);

}  // namespace homeplan::planner
