#include "homeplan/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "homeplan/text.hpp"

#include <httplib.h>
#include <json.hpp>

namespace homeplan::planner {

// -------------------------------------------------------- ScriptedBackend --

ScriptedBackend::ScriptedBackend(std::vector<Entry> entries, const dsl::Whitelist* whitelist,
                                 bool qa_rules)
    : entries_(std::move(entries)), whitelist_(whitelist), qa_rules_(qa_rules) {}

PlannerResponse ScriptedBackend::generate(const PlannerRequest& request) {
  PlannerResponse resp;
  resp.backend_id = id();
  for (const auto& entry : entries_) {
    if (text::contains(request.command, entry.match) ||
        text::contains(request.prompt.text, entry.match)) {
      resp.program_text = entry.program;
      if (static_cast<int>(resp.program_text.size()) > request.max_output_chars) {
        throw BackendError("scripted response exceeds max_output_chars");
      }
      return resp;
    }
  }
  if (qa_rules_ && whitelist_) {
    if (request.prompt.kind == prompt::PromptKind::Question) {
      resp.program_text = synthesize_question(request);
      return resp;
    }
    if (request.prompt.kind == prompt::PromptKind::Answer) {
      resp.program_text = synthesize_answer_script(request);
      return resp;
    }
  }
  throw BackendError("no scripted entry matches command: " + request.command);
}

namespace {

// Pulls the first whitelisted category mentioned in a context sentence like
// "The agent does not know where the ButterKnife is."
std::optional<std::string> find_category(const std::string& sentence,
                                         const dsl::Whitelist& whitelist) {
  for (const auto& cat : whitelist.categories()) {
    if (text::contains(sentence, cat)) return cat;
  }
  return std::nullopt;
}

std::string last_labeled_line(const std::string& body, const std::string& label) {
  std::istringstream in(body);
  std::string line, found;
  while (std::getline(in, line)) {
    std::string t = text::trim(line);
    if (text::starts_with(t, label)) found = text::trim(t.substr(label.size()));
  }
  return found;
}

}  // namespace

std::string ScriptedBackend::synthesize_question(const PlannerRequest& request) const {
  std::string context = last_labeled_line(request.prompt.text, "Context:");
  if (context.empty()) context = request.command;
  auto cat = find_category(context, *whitelist_);
  if (!cat) throw BackendError("cannot infer question target from context: " + context);
  return "askForLocation('" + *cat + "')\n";
}

std::string ScriptedBackend::synthesize_answer_script(const PlannerRequest& request) const {
  std::string context = last_labeled_line(request.prompt.text, "Context:");
  std::string answer = last_labeled_line(request.prompt.text, "Answer Returned:");
  if (answer.empty()) throw BackendError("answer prompt carries no answer line");
  auto cat = find_category(context, *whitelist_);
  if (!cat) cat = find_category(answer, *whitelist_);
  if (!cat) throw BackendError("cannot infer object from answer prompt");
  return answer_sentence_to_script(answer, *cat, *whitelist_);
}

std::string answer_sentence_to_script(const std::string& answer, const std::string& category,
                                      const dsl::Whitelist& whitelist) {
  std::string low = text::to_lower(answer);
  std::ostringstream script;
  if (text::contains(low, "front left")) {
    script << "turn('left')\n" << "move('forward')\n";
  } else if (text::contains(low, "front right")) {
    script << "turn('right')\n" << "move('forward')\n";
  } else if (text::contains(low, "to your left")) {
    script << "turn('left')\n";
  } else if (text::contains(low, "to your right")) {
    script << "turn('right')\n";
  } else if (text::contains(low, "behind")) {
    script << "turn('right')\n" << "turn('right')\n";
  } else if (text::contains(low, "in front")) {
    script << "move('forward')\n";
  }

  // Landmark receptacle: the prose after the last " on the " / " in the ".
  std::string landmark_phrase;
  for (const std::string& prep : {std::string(" on the "), std::string(" in the ")}) {
    size_t pos = low.rfind(prep);
    if (pos != std::string::npos) {
      std::string tail = low.substr(pos + prep.size());
      size_t end = tail.find_first_of(".,;\n");
      tail = text::trim(end == std::string::npos ? tail : tail.substr(0, end));
      if (!tail.empty()) landmark_phrase = tail;
    }
  }
  if (!landmark_phrase.empty()) {
    if (auto lm = whitelist.category_from_display(landmark_phrase)) {
      script << "search_near_other_object('" << category << "', '" << *lm << "')\n";
    }
  }
  return script.str();
}

// --------------------------------------------------- RetrievalEchoBackend --

PlannerResponse RetrievalEchoBackend::generate(const PlannerRequest& request) {
  if (request.retrieved.empty()) {
    throw BackendError("retrieval-echo backend has no retrieved example to echo");
  }
  PlannerResponse resp;
  resp.backend_id = id();
  resp.program_text = request.retrieved.front().program_text;
  return resp;
}

// ---------------------------------------------------------- RemoteBackend --

RemoteBackend::RemoteBackend(RemoteBackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint_host.empty()) throw ConfigError("remote backend needs an endpoint");
}

PlannerResponse RemoteBackend::generate(const PlannerRequest& request) {
  auto start = std::chrono::steady_clock::now();
  nlohmann::json body{
      {"model", config_.model},
      {"temperature", request.temperature},
      {"messages", nlohmann::json::array({nlohmann::json{
                       {"role", "user"}, {"content", request.prompt.text}}})},
  };
  httplib::Client client(config_.endpoint_host);
  client.set_connection_timeout(0, config_.timeout_ms * 1000);
  client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str())) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) throw BackendError("planner request failed: no response");
  if (res->status != 200) {
    throw BackendError("planner request failed: status " + std::to_string(res->status));
  }
  PlannerResponse resp;
  resp.backend_id = id();
  try {
    auto parsed = nlohmann::json::parse(res->body);
    resp.program_text =
        parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed planner response: ") + e.what());
  }
  if (static_cast<int>(resp.program_text.size()) > request.max_output_chars) {
    throw BackendError("planner response exceeds max_output_chars");
  }
  resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return resp;
}

}  // namespace homeplan::planner
