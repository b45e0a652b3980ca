#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "homeplan/backend.hpp"
#include "homeplan/memory_store.hpp"
#include "homeplan/plan_dsl.hpp"
#include "homeplan/prompt.hpp"
#include "homeplan/sim.hpp"
#include "homeplan/spatial.hpp"

#include <json.hpp>

namespace homeplan::exec {

enum class EpisodeStatus { Running, Success, FailureBudget, FailurePlan };
const char* to_string(EpisodeStatus s);

struct Budgets {
  int max_steps = 1000;
  int max_api_failures = 30;
  int max_replans = 3;  // program generations after the first
  int max_questions = 8;
};

struct FailureFeedback {
  std::string failed_action;
  std::string reason;
  std::optional<std::string> suggested_search;

  std::string to_sentence() const;
};

struct EpisodeState {
  long long held = -1;
  int steps_taken = 0;
  int api_failures = 0;
  int replans_used = 0;
  int qa_budget_used = 0;
  EpisodeStatus status = EpisodeStatus::Running;
};

struct ExecutionConfig {
  Budgets budgets;
  bool insert_preconditions = true;
  bool qa_enabled = false;
  double landmark_radius = 1.0;
  int render_width = 120;
  int render_height = 120;
  double render_fov_deg = 90.0;
  std::uint64_t seed = 0;
  spatial::IntegrationConfig integration;
  spatial::ExplorationConfig exploration;
};

// Ordered, replayable event stream for one episode.
class EpisodeLogger {
 public:
  void log(nlohmann::json event) { events_.push_back(std::move(event)); }
  const std::vector<nlohmann::json>& events() const { return events_; }
  std::string to_jsonl() const;
  void write(const std::string& path) const;

 private:
  std::vector<nlohmann::json> events_;
};

enum class ResolveOutcome { Resolved, NeedsSearch, Ambiguous };

struct ResolveResult {
  ResolveOutcome outcome = ResolveOutcome::NeedsSearch;
  std::string memory_id;     // valid when Resolved
  long long instance = -1;   // world instance behind the memory entry
};

struct EpisodeResult {
  EpisodeState state;
  sim::EpisodeStats stats;
  std::vector<std::string> program_attempts;
  std::string failure_reason;
  bool plan_completed = false;
};

// How prompts are built and programs generated for this run.
struct AgentContext {
  planner::Backend* backend = nullptr;
  const ExampleStore* examples = nullptr;
  const TemplateStore* templates = nullptr;           // P-variant routing
  const PromptTemplateRecord* shared_template = nullptr;  // S-variant prompt
  RetrievalConfig retrieval;
  bool shared_memory_mode = false;  // S-variant when true

  std::string plan_api_text;
  std::string question_api_text;
  std::string search_api_text;
  std::string question_template;
  std::string answer_template;
  std::string object_classes;
};

// Runs plan programs against one world: macro expansion with precondition
// checks, object search, question asking, and failure-driven replanning.
class Executor {
 public:
  Executor(sim::World& world, AgentContext context, ExecutionConfig config,
           EpisodeLogger* logger);

  // Full pipeline: prompt -> backend -> parse/validate -> execute, replanning
  // on failure until budgets run out.
  EpisodeResult run_command(const std::string& command);

  // Executes an already-validated program (no backend involved).
  EpisodeResult execute_program(const dsl::PlanProgram& program);

  ResolveResult resolve_object(const dsl::ObjectBinding& binding) const;
  std::optional<std::string> search_for_object(const std::string& category,
                                               const std::optional<std::string>& landmark,
                                               int depth = 0);

  const spatial::OccupancyMap& map() const { return map_; }
  const spatial::ObjectMemory& object_memory() const { return memory_; }
  const EpisodeState& episode_state() const { return state_; }

  // Rotates in place to seed the map; called by run_command, public for tests.
  void initial_scan();

 private:
  struct BudgetStop {};
  struct MacroFailure {
    FailureFeedback feedback;
  };
  struct Target {
    std::string memory_id;
    long long instance = -1;
  };

  sim::StepResult step(const sim::PrimitiveAction& action, bool may_fail = false);
  void observe();
  void require_budget() const;

  planner::PlannerRequest build_request(const std::string& command,
                                        const std::optional<FailureFeedback>& feedback);
  void execute_statement(const dsl::Statement& stmt, const dsl::PlanProgram& program,
                         std::map<std::string, Target>& resolved);
  Target& ensure_resolved(const dsl::ObjectBinding& binding,
                          std::map<std::string, Target>& resolved);

  // Macros over primitives. All may throw MacroFailure or BudgetStop.
  void macro_go_to(Target& t);
  void macro_pickup(Target& t);
  void macro_place(Target& receiver, Target& target);
  void macro_put_down(Target& t);
  void macro_open(Target& t);
  void macro_close(Target& t);
  void macro_toggle(Target& t, bool on);
  void macro_slice(Target& t);
  void macro_pour(Target& t);
  void macro_clean(Target& t);

  bool navigate_near(const spatial::Vec3& target, double max_range);
  void face_point(const spatial::Vec3& target);
  void rotate_to_yaw(double desired_yaw);
  void set_pitch_toward(const spatial::Vec3& target);
  void sweep();
  bool frontier_explore_once();

  bool ask_question(const std::string& category, bool ambiguous);
  void run_qa_script(const dsl::QaScript& script);

  bool state_of(long long instance, const std::string& key) const;
  std::string instance_name(long long instance) const;
  void note_moved(const std::string& memory_id, const spatial::Vec3& new_centroid);

  sim::World& world_;
  AgentContext ctx_;
  ExecutionConfig cfg_;
  EpisodeLogger* logger_;
  spatial::OccupancyMap map_;
  spatial::ObjectMemory memory_;
  spatial::CameraModel camera_;
  EpisodeState state_;
  std::mt19937_64 rng_;
  std::string held_memory_id_;
};

}  // namespace homeplan::exec
