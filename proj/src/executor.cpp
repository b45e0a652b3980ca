#include "homeplan/executor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homeplan/text.hpp"

namespace homeplan::exec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "RUNNING";
    case EpisodeStatus::Success: return "SUCCESS";
    case EpisodeStatus::FailureBudget: return "FAILURE_BUDGET";
    case EpisodeStatus::FailurePlan: return "FAILURE_PLAN";
  }
  return "?";
}

std::string FailureFeedback::to_sentence() const {
  std::string s = "The previous plan failed";
  if (!failed_action.empty()) s += " at " + failed_action;
  if (!reason.empty()) s += " because " + reason;
  s += ".";
  if (suggested_search) s += " Try searching near the " + *suggested_search + ".";
  return s;
}

std::string EpisodeLogger::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.dump();
    out += "\n";
  }
  return out;
}

void EpisodeLogger::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write episode log: " + path);
  out << to_jsonl();
}

// ----------------------------------------------------------------- setup ---

Executor::Executor(sim::World& world, AgentContext context, ExecutionConfig config,
                   EpisodeLogger* logger)
    : world_(world),
      ctx_(std::move(context)),
      cfg_(config),
      logger_(logger),
      map_(world.rows(), world.cols(), world.cell_size()),
      camera_(spatial::CameraModel::from_fov(config.render_width, config.render_height,
                                             config.render_fov_deg)),
      rng_(config.seed) {}

void Executor::require_budget() const {
  if (world_.steps_taken() >= cfg_.budgets.max_steps ||
      world_.api_failures() >= cfg_.budgets.max_api_failures) {
    throw BudgetStop{};
  }
}

void Executor::observe() {
  spatial::Frame frame = world_.render(camera_);
  spatial::integrate_frame(map_, memory_, frame, cfg_.integration);
  // The agent knows its own footprint is free.
  spatial::GridCell here = world_.agent().cell;
  if (map_.at(here) != spatial::CellState::Obstacle) {
    map_.add_free_hit(here);
    map_.add_observation(here);
  }
}

sim::StepResult Executor::step(const sim::PrimitiveAction& action, bool may_fail) {
  require_budget();
  sim::StepResult r = world_.step(action);
  state_.steps_taken = world_.steps_taken();
  state_.api_failures = world_.api_failures();
  if (logger_) {
    nlohmann::json e{{"event", "action"}, {"k", sim::to_string(action.kind)}, {"ok", r.ok}};
    if (action.target >= 0) e["target"] = instance_name(action.target);
    if (!r.ok) e["reason"] = r.reason;
    logger_->log(std::move(e));
  }
  observe();
  if (!r.ok && !may_fail && sim::is_interaction(action.kind)) {
    require_budget();
  }
  return r;
}

std::string Executor::instance_name(long long instance) const {
  const sim::WorldObject* o = world_.object(instance);
  return o ? o->name : std::to_string(instance);
}

bool Executor::state_of(long long instance, const std::string& key) const {
  auto states = world_.object_state_map(instance);
  auto it = states.find(key);
  return it != states.end() && it->second;
}

void Executor::initial_scan() {
  observe();
  for (int i = 0; i < 4; ++i) step({sim::PrimitiveKind::TurnLeft});
  // Second pass looking down: at pitch 0 the floor nearer than the camera
  // height is below the field of view.
  step({sim::PrimitiveKind::LookDown}, /*may_fail=*/true);
  for (int i = 0; i < 4; ++i) step({sim::PrimitiveKind::TurnLeft});
  step({sim::PrimitiveKind::LookUp}, /*may_fail=*/true);
}

// ------------------------------------------------------------ resolution ---

ResolveResult Executor::resolve_object(const dsl::ObjectBinding& binding) const {
  std::vector<const spatial::ObjectMemoryEntry*> candidates;
  for (const auto* e : memory_.entries_of(binding.category)) {
    bool pass = true;
    for (const auto& attr : binding.attributes) {
      auto it = e->attributes.find(attr);
      // Desired end-state attributes exclude only known-false entries.
      if (it != e->attributes.end() && it->second == spatial::TriBool::False) pass = false;
    }
    if (pass) candidates.push_back(e);
  }
  if (binding.landmark) {
    auto landmarks = memory_.entries_of(*binding.landmark);
    if (!landmarks.empty()) {
      std::vector<const spatial::ObjectMemoryEntry*> near;
      for (const auto* c : candidates) {
        for (const auto* lm : landmarks) {
          if ((c->centroid - lm->centroid).norm() <= cfg_.landmark_radius) {
            near.push_back(c);
            break;
          }
        }
      }
      if (near.empty()) return {ResolveOutcome::NeedsSearch, "", -1};
      const spatial::ObjectMemoryEntry* best = nullptr;
      double best_d = 0;
      for (const auto* c : near) {
        double d = 1e18;
        for (const auto* lm : landmarks) d = std::min(d, (c->centroid - lm->centroid).norm());
        if (!best || d < best_d || (d == best_d && c->memory_id < best->memory_id)) {
          best = c;
          best_d = d;
        }
      }
      return {ResolveOutcome::Resolved, best->memory_id, best->instance_id};
    }
  }
  if (candidates.empty()) return {ResolveOutcome::NeedsSearch, "", -1};
  if (candidates.size() == 1) {
    return {ResolveOutcome::Resolved, candidates[0]->memory_id, candidates[0]->instance_id};
  }
  return {ResolveOutcome::Ambiguous, "", -1};
}

// ------------------------------------------------------------- navigation --

void Executor::rotate_to_yaw(double desired_yaw) {
  int cur = static_cast<int>(world_.agent().yaw_deg) % 360;
  int want = (static_cast<int>(std::lround(desired_yaw / 90.0)) * 90 % 360 + 360) % 360;
  int diff = ((want - cur) % 360 + 360) % 360;
  if (diff == 90) {
    step({sim::PrimitiveKind::TurnRight});
  } else if (diff == 270) {
    step({sim::PrimitiveKind::TurnLeft});
  } else if (diff == 180) {
    step({sim::PrimitiveKind::TurnRight});
    step({sim::PrimitiveKind::TurnRight});
  }
}

void Executor::face_point(const spatial::Vec3& target) {
  spatial::Vec3 here = map_.cell_center(world_.agent().cell);
  double dx = target.x - here.x, dz = target.z - here.z;
  if (std::abs(dx) < 1e-9 && std::abs(dz) < 1e-9) return;
  rotate_to_yaw(std::atan2(dx, dz) * 180.0 / kPi);
}

void Executor::set_pitch_toward(const spatial::Vec3& target) {
  spatial::Vec3 cam = world_.camera_pose().position;
  double horiz = std::max(0.25, cam.horizontal_distance(target));
  double want = std::atan2(target.y - cam.y, horiz) * 180.0 / kPi;
  double snapped = std::clamp(std::round(want / 30.0) * 30.0, -60.0, 60.0);
  int guard = 0;
  while (world_.agent().pitch_deg < snapped - 1 && guard++ < 5) {
    step({sim::PrimitiveKind::LookUp});
  }
  while (world_.agent().pitch_deg > snapped + 1 && guard++ < 10) {
    step({sim::PrimitiveKind::LookDown});
  }
}

bool Executor::navigate_near(const spatial::Vec3& target, double max_range) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    spatial::GridCell agent = world_.agent().cell;
    spatial::Vec3 here = map_.cell_center(agent);
    if (here.horizontal_distance(target) <= max_range) {
      face_point(target);
      return true;
    }
    // Candidate goals: free cells within range of the target, nearest first.
    auto target_cell = map_.world_to_cell(target);
    std::vector<std::pair<double, spatial::GridCell>> goals;
    int radius_cells = static_cast<int>(std::ceil(max_range / map_.resolution())) + 1;
    spatial::GridCell around = target_cell ? *target_cell : agent;
    for (int r = around.row - radius_cells; r <= around.row + radius_cells; ++r) {
      for (int c = around.col - radius_cells; c <= around.col + radius_cells; ++c) {
        spatial::GridCell cell{r, c};
        if (!map_.in_bounds(cell) || map_.at(cell) != spatial::CellState::Free) continue;
        double d = map_.cell_center(cell).horizontal_distance(target);
        if (d <= max_range * 0.95) goals.emplace_back(d, cell);
      }
    }
    std::sort(goals.begin(), goals.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    spatial::PathResult path;
    for (const auto& [d, goal] : goals) {
      path = spatial::plan_path(map_, agent, goal);
      if (path.reachable) break;
    }
    if (!path.reachable) {
      // No known free cell in range yet; make progress toward the target and
      // let the observations gathered en route fill the map in.
      double cur_d = here.horizontal_distance(target);
      std::vector<std::pair<double, spatial::GridCell>> progress;
      for (int r = 0; r < map_.rows(); ++r) {
        for (int c = 0; c < map_.cols(); ++c) {
          spatial::GridCell cell{r, c};
          if (map_.at(cell) != spatial::CellState::Free) continue;
          double d = map_.cell_center(cell).horizontal_distance(target);
          if (d < cur_d - map_.resolution()) progress.emplace_back(d, cell);
        }
      }
      std::sort(progress.begin(), progress.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
      for (const auto& [d, goal] : progress) {
        path = spatial::plan_path(map_, agent, goal);
        if (path.reachable) break;
      }
      if (!path.reachable) return false;
    }

    bool blocked = false;
    for (size_t i = 1; i < path.cells.size(); ++i) {
      spatial::GridCell next = path.cells[i];
      spatial::Vec3 center = map_.cell_center(next);
      face_point(center);
      sim::StepResult r = step({sim::PrimitiveKind::Forward}, /*may_fail=*/true);
      if (!r.ok) {
        // The map was wrong here; record the obstacle and replan.
        map_.add_obstacle_hit(next);
        map_.add_observation(next);
        blocked = true;
        break;
      }
    }
    if (!blocked) {
      face_point(target);
      return true;
    }
  }
  return false;
}

void Executor::sweep() {
  for (int i = 0; i < 4; ++i) step({sim::PrimitiveKind::TurnLeft});
  step({sim::PrimitiveKind::LookDown}, /*may_fail=*/true);
  for (int i = 0; i < 4; ++i) step({sim::PrimitiveKind::TurnLeft});
  step({sim::PrimitiveKind::LookUp}, /*may_fail=*/true);
}

bool Executor::frontier_explore_once() {
  auto goal = spatial::sample_exploration_goal(map_, world_.agent().cell, rng_, cfg_.exploration);
  if (!goal) return false;
  spatial::Vec3 target = map_.cell_center(*goal);
  if (!navigate_near(target, map_.resolution() * 2.5)) {
    // Unreachable after all; stop treating it as frontier.
    map_.add_observation(*goal);
    return true;
  }
  sweep();
  return true;
}

std::optional<std::string> Executor::search_for_object(
    const std::string& category, const std::optional<std::string>& landmark, int depth) {
  auto found = [&]() -> std::optional<std::string> {
    auto entries = memory_.entries_of(category);
    if (entries.empty()) return std::nullopt;
    // A landmark constraint carries over to what counts as "found".
    if (landmark) {
      auto landmarks = memory_.entries_of(*landmark);
      if (!landmarks.empty()) {
        const spatial::ObjectMemoryEntry* best = nullptr;
        double best_d = cfg_.landmark_radius;
        for (const auto* e : entries) {
          for (const auto* lm : landmarks) {
            double d = (e->centroid - lm->centroid).norm();
            if (d <= best_d) {
              best = e;
              best_d = d;
            }
          }
        }
        if (best) return best->memory_id;
        return std::nullopt;
      }
    }
    const spatial::ObjectMemoryEntry* best = nullptr;
    spatial::Vec3 here = map_.cell_center(world_.agent().cell);
    for (const auto* e : entries) {
      if (!best || (e->centroid - here).norm() < (best->centroid - here).norm()) best = e;
    }
    return best->memory_id;
  };
  if (auto id = found()) return id;

  if (landmark) {
    // Make sure the landmark itself is known, then sweep next to it.
    if (memory_.entries_of(*landmark).empty() && depth == 0) {
      search_for_object(*landmark, std::nullopt, depth + 1);
    }
    auto landmarks = memory_.entries_of(*landmark);
    if (!landmarks.empty()) {
      const spatial::ObjectMemoryEntry* lm = landmarks.front();
      navigate_near(lm->centroid, world_.config().interact_range * 0.9);
      // Closed containers hide their contents; open before sweeping.
      if (lm->instance_id >= 0) {
        const sim::WorldObject* obj = world_.object(lm->instance_id);
        if (obj &&
            world_.affordances().allows(obj->category, dsl::Capability::Openable) &&
            !state_of(lm->instance_id, "open")) {
          step({sim::PrimitiveKind::Open, lm->instance_id}, /*may_fail=*/true);
        }
      }
      set_pitch_toward(lm->centroid);
      sweep();
      if (auto id = found()) return id;
    }
  }
  while (frontier_explore_once()) {
    if (auto id = found()) return id;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------- QA ----

bool Executor::ask_question(const std::string& category, bool ambiguous) {
  if (!cfg_.qa_enabled || !ctx_.backend) return false;
  if (state_.qa_budget_used >= cfg_.budgets.max_questions) return false;
  ++state_.qa_budget_used;

  std::string context_sentence =
      ambiguous ? "The agent has seen multiple instances of the " + category + "."
                : "The agent does not know where the " + category + " is.";
  try {
    prompt::AssembledPrompt qp = prompt::assemble_question_prompt(
        "Context: " + context_sentence, ctx_.question_api_text, ctx_.question_template,
        ctx_.object_classes);
    planner::PlannerRequest qreq;
    qreq.prompt = qp;
    qreq.command = context_sentence;
    planner::PlannerResponse qresp = ctx_.backend->generate(qreq);
    dsl::QaScript qscript = dsl::parse_qa_script(qresp.program_text, world_.whitelist());

    const dsl::QaCall* ask = nullptr;
    for (const auto& call : qscript.calls) {
      if (call.kind == dsl::QaCallKind::AskForLocation ||
          call.kind == dsl::QaCallKind::AskForAppearance ||
          call.kind == dsl::QaCallKind::AskForDirection) {
        ask = &call;
        break;
      }
    }
    if (!ask) return false;

    sim::Question question;
    question.category = ask->category;
    question.kind = ask->kind == dsl::QaCallKind::AskForLocation
                        ? sim::Question::Kind::Location
                        : ask->kind == dsl::QaCallKind::AskForAppearance
                              ? sim::Question::Kind::Appearance
                              : sim::Question::Kind::Direction;
    std::string question_text =
        std::string(ask->kind == dsl::QaCallKind::AskForLocation     ? "askForLocation"
                    : ask->kind == dsl::QaCallKind::AskForAppearance ? "askForAppearance"
                                                                     : "askForDirection") +
        "('" + ask->category + "')";
    std::string answer = world_.oracle_answer(question);
    if (logger_) {
      logger_->log({{"event", "question"}, {"question", question_text}, {"answer", answer}});
    }
    if (answer == "I cannot answer that.") return false;

    prompt::AssembledPrompt ap = prompt::assemble_answer_prompt(
        "Context: " + context_sentence, "Question Asked: " + question_text,
        "Answer Returned: " + answer, ctx_.search_api_text, ctx_.answer_template,
        ctx_.object_classes);
    planner::PlannerRequest areq;
    areq.prompt = ap;
    areq.command = context_sentence;
    planner::PlannerResponse aresp = ctx_.backend->generate(areq);
    run_qa_script(dsl::parse_qa_script(aresp.program_text, world_.whitelist()));
    return true;
  } catch (const BackendError&) {
    return false;
  } catch (const dsl::ParseError&) {
    return false;
  }
}

void Executor::run_qa_script(const dsl::QaScript& script) {
  for (const auto& call : script.calls) {
    switch (call.kind) {
      case dsl::QaCallKind::Turn:
        if (call.direction == dsl::MoveDirection::Left) {
          step({sim::PrimitiveKind::TurnLeft});
        } else if (call.direction == dsl::MoveDirection::Right) {
          step({sim::PrimitiveKind::TurnRight});
        }
        break;
      case dsl::QaCallKind::Move: {
        sim::PrimitiveKind k = sim::PrimitiveKind::Forward;
        if (call.direction == dsl::MoveDirection::Backward) k = sim::PrimitiveKind::Backward;
        if (call.direction == dsl::MoveDirection::Left) k = sim::PrimitiveKind::StrafeLeft;
        if (call.direction == dsl::MoveDirection::Right) k = sim::PrimitiveKind::StrafeRight;
        step({k}, /*may_fail=*/true);
        break;
      }
      case dsl::QaCallKind::SearchNearOtherObject:
        search_for_object(call.category, call.landmark_category);
        break;
      default:
        break;  // ask* calls are not executable here
    }
  }
}

// ---------------------------------------------------------------- macros ---

Executor::Target& Executor::ensure_resolved(const dsl::ObjectBinding& binding,
                                            std::map<std::string, Target>& resolved) {
  auto it = resolved.find(binding.var_name);
  if (it != resolved.end() && memory_.find(it->second.memory_id)) return it->second;

  ResolveResult res = resolve_object(binding);
  if (res.outcome == ResolveOutcome::NeedsSearch) {
    if (ask_question(binding.category, /*ambiguous=*/false)) res = resolve_object(binding);
    if (res.outcome == ResolveOutcome::NeedsSearch) {
      if (auto id = search_for_object(binding.category, binding.landmark)) {
        const spatial::ObjectMemoryEntry* e = memory_.find(*id);
        res = {ResolveOutcome::Resolved, *id, e->instance_id};
      }
    }
    if (res.outcome == ResolveOutcome::NeedsSearch) {
      throw MacroFailure{{"go_to(" + binding.category + ")",
                          "the " + binding.category + " could not be found", binding.landmark}};
    }
  }
  if (res.outcome == ResolveOutcome::Ambiguous) {
    if (ask_question(binding.category, /*ambiguous=*/true)) {
      ResolveResult retry = resolve_object(binding);
      if (retry.outcome == ResolveOutcome::Resolved) res = retry;
    }
    if (res.outcome == ResolveOutcome::Ambiguous) {
      // Deterministic fallback: nearest instance.
      const spatial::ObjectMemoryEntry* e =
          memory_.nearest(binding.category, map_.cell_center(world_.agent().cell));
      res = {ResolveOutcome::Resolved, e->memory_id, e->instance_id};
    }
  }
  Target t{res.memory_id, res.instance};
  auto [pos, _] = resolved.insert_or_assign(binding.var_name, t);
  return pos->second;
}

void Executor::note_moved(const std::string& memory_id, const spatial::Vec3& new_centroid) {
  if (auto* e = memory_.find_mutable(memory_id)) e->centroid = new_centroid;
}

void Executor::macro_go_to(Target& t) {
  const spatial::ObjectMemoryEntry* e = memory_.find(t.memory_id);
  if (!e) throw MacroFailure{{"go_to", "target vanished from memory", std::nullopt}};
  if (!navigate_near(e->centroid, world_.config().interact_range * 0.9)) {
    throw MacroFailure{{"go_to(" + e->category + ")", "path blocked", std::nullopt}};
  }
  set_pitch_toward(e->centroid);
}

void Executor::macro_pickup(Target& t) {
  const spatial::ObjectMemoryEntry* e = memory_.find(t.memory_id);
  if (!e) throw MacroFailure{{"pickup", "target vanished from memory", std::nullopt}};
  if (world_.agent().held == t.instance) return;
  if (cfg_.insert_preconditions && world_.agent().held != -1) {
    Target held{held_memory_id_, world_.agent().held};
    macro_put_down(held);
  }
  macro_go_to(t);
  if (cfg_.insert_preconditions && t.instance >= 0) {
    // Contained in a closed receptacle: open it first.
    const sim::WorldObject* obj = world_.object(t.instance);
    if (obj && obj->parent != -1) {
      const sim::WorldObject* parent = world_.object(obj->parent);
      if (parent &&
          world_.affordances().allows(parent->category, dsl::Capability::Openable) &&
          !state_of(parent->id, "open")) {
        step({sim::PrimitiveKind::Open, parent->id});
      }
    }
  }
  sim::StepResult r = step({sim::PrimitiveKind::Pickup, t.instance}, /*may_fail=*/true);
  if (!r.ok) {
    throw MacroFailure{{"pickup(" + e->category + ")", r.reason, std::nullopt}};
  }
  held_memory_id_ = t.memory_id;
  state_.held = t.instance;
  memory_.set_attribute(t.memory_id, "holding", true);
}

void Executor::macro_place(Target& receiver, Target& target) {
  if (world_.agent().held != receiver.instance) {
    macro_pickup(receiver);
  }
  const spatial::ObjectMemoryEntry* te = memory_.find(target.memory_id);
  if (!te) throw MacroFailure{{"place", "receptacle vanished from memory", std::nullopt}};
  macro_go_to(target);
  if (cfg_.insert_preconditions && target.instance >= 0 &&
      world_.affordances().allows(world_.object(target.instance)->category,
                                  dsl::Capability::Openable) &&
      !state_of(target.instance, "open")) {
    step({sim::PrimitiveKind::Open, target.instance});
  }
  sim::StepResult r = step({sim::PrimitiveKind::Place, target.instance}, /*may_fail=*/true);
  if (!r.ok) {
    throw MacroFailure{{"place(" + te->category + ")", r.reason, std::nullopt}};
  }
  state_.held = -1;
  memory_.set_attribute(receiver.memory_id, "holding", false);
  note_moved(receiver.memory_id, te->centroid);
  held_memory_id_.clear();
}

void Executor::macro_put_down(Target& t) {
  (void)t;
  if (world_.agent().held == -1) return;
  // Nearest known receptacle.
  spatial::Vec3 here = map_.cell_center(world_.agent().cell);
  const spatial::ObjectMemoryEntry* best = nullptr;
  for (const auto& e : memory_.entries()) {
    if (!world_.affordances().allows(e.category, dsl::Capability::Receptacle)) continue;
    if (e.instance_id == world_.agent().held) continue;
    if (!best || (e.centroid - here).norm() < (best->centroid - here).norm()) best = &e;
  }
  if (!best) {
    throw MacroFailure{{"put_down", "no known receptacle to put the object on", std::nullopt}};
  }
  if (!navigate_near(best->centroid, world_.config().interact_range * 0.9)) {
    throw MacroFailure{{"put_down", "path blocked", std::nullopt}};
  }
  if (cfg_.insert_preconditions && best->instance_id >= 0 &&
      world_.affordances().allows(world_.object(best->instance_id)->category,
                                  dsl::Capability::Openable) &&
      !state_of(best->instance_id, "open")) {
    step({sim::PrimitiveKind::Open, best->instance_id});
  }
  sim::StepResult r = step({sim::PrimitiveKind::Place, best->instance_id}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"put_down", r.reason, std::nullopt}};
  if (!held_memory_id_.empty()) {
    memory_.set_attribute(held_memory_id_, "holding", false);
    note_moved(held_memory_id_, best->centroid);
  }
  state_.held = -1;
  held_memory_id_.clear();
}

void Executor::macro_open(Target& t) {
  macro_go_to(t);
  if (cfg_.insert_preconditions && t.instance >= 0 && state_of(t.instance, "open")) return;
  sim::StepResult r = step({sim::PrimitiveKind::Open, t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"open", r.reason, std::nullopt}};
}

void Executor::macro_close(Target& t) {
  macro_go_to(t);
  if (cfg_.insert_preconditions && t.instance >= 0 && !state_of(t.instance, "open")) return;
  sim::StepResult r = step({sim::PrimitiveKind::Close, t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"close", r.reason, std::nullopt}};
}

void Executor::macro_toggle(Target& t, bool on) {
  macro_go_to(t);
  if (t.instance >= 0 && cfg_.insert_preconditions) {
    if (state_of(t.instance, "on") == on) return;
    // A toggleable with an open door (microwave) must be closed first.
    if (on &&
        world_.affordances().allows(world_.object(t.instance)->category,
                                    dsl::Capability::Openable) &&
        state_of(t.instance, "open")) {
      step({sim::PrimitiveKind::Close, t.instance});
    }
  }
  sim::StepResult r = step({on ? sim::PrimitiveKind::ToggleOn : sim::PrimitiveKind::ToggleOff,
                            t.instance},
                           /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{on ? "toggle_on" : "toggle_off", r.reason, std::nullopt}};
}

void Executor::macro_slice(Target& t) {
  if (cfg_.insert_preconditions) {
    long long held = world_.agent().held;
    bool has_knife = false;
    if (held != -1) {
      const std::string& cat = world_.object(held)->category;
      has_knife = cat == "Knife" || cat == "ButterKnife";
    }
    if (!has_knife) {
      if (held != -1) {
        Target h{held_memory_id_, held};
        macro_put_down(h);
      }
      std::optional<std::string> knife = search_for_object("Knife", std::nullopt);
      if (!knife) knife = search_for_object("ButterKnife", std::nullopt);
      if (!knife) {
        throw MacroFailure{{"slice", "no knife available", std::nullopt}};
      }
      const spatial::ObjectMemoryEntry* ke = memory_.find(*knife);
      Target kt{ke->memory_id, ke->instance_id};
      macro_pickup(kt);
    }
  }
  macro_go_to(t);
  sim::StepResult r = step({sim::PrimitiveKind::Slice, t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"slice", r.reason, std::nullopt}};
}

void Executor::macro_pour(Target& t) {
  macro_go_to(t);
  sim::StepResult r = step({sim::PrimitiveKind::Pour, t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"pour", r.reason, std::nullopt}};
}

void Executor::macro_clean(Target& t) {
  if (world_.agent().held != t.instance) macro_pickup(t);
  std::optional<std::string> basin = search_for_object("SinkBasin", std::nullopt);
  if (!basin) basin = search_for_object("Sink", std::nullopt);
  if (!basin) throw MacroFailure{{"clean", "no sink available", std::nullopt}};
  const spatial::ObjectMemoryEntry* be = memory_.find(*basin);
  Target basin_t{be->memory_id, be->instance_id};
  macro_go_to(basin_t);
  sim::StepResult r = step({sim::PrimitiveKind::Place, basin_t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"clean", r.reason, std::nullopt}};
  state_.held = -1;

  std::optional<std::string> faucet = search_for_object("Faucet", std::nullopt);
  if (!faucet) throw MacroFailure{{"clean", "no faucet available", std::nullopt}};
  const spatial::ObjectMemoryEntry* fe = memory_.find(*faucet);
  if (!navigate_near(fe->centroid, world_.config().interact_range * 0.9)) {
    throw MacroFailure{{"clean", "path blocked", std::nullopt}};
  }
  r = step({sim::PrimitiveKind::ToggleOn, fe->instance_id}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"clean", r.reason, std::nullopt}};
  r = step({sim::PrimitiveKind::ToggleOff, fe->instance_id}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"clean", r.reason, std::nullopt}};

  r = step({sim::PrimitiveKind::Pickup, t.instance}, /*may_fail=*/true);
  if (!r.ok) throw MacroFailure{{"clean", r.reason, std::nullopt}};
  state_.held = t.instance;
  held_memory_id_ = t.memory_id;
  memory_.set_attribute(t.memory_id, "clean", true);
  memory_.set_attribute(t.memory_id, "dirty", false);
  memory_.set_attribute(t.memory_id, "holding", true);
}

// ------------------------------------------------------------- execution ---

void Executor::execute_statement(const dsl::Statement& stmt, const dsl::PlanProgram& program,
                                 std::map<std::string, Target>& resolved) {
  const dsl::ObjectBinding* binding = program.find_binding(stmt.receiver);
  if (!binding) {
    throw MacroFailure{{"statement", "unbound receiver " + stmt.receiver, std::nullopt}};
  }
  Target& t = ensure_resolved(*binding, resolved);
  switch (stmt.method) {
    case dsl::Method::GoTo:
      macro_go_to(t);
      break;
    case dsl::Method::Pickup:
      macro_pickup(t);
      break;
    case dsl::Method::Place: {
      const dsl::ObjectBinding* target_binding = program.find_binding(*stmt.arg);
      Target& target = ensure_resolved(*target_binding, resolved);
      macro_place(t, target);
      break;
    }
    case dsl::Method::PutDown:
      macro_put_down(t);
      break;
    case dsl::Method::Open:
      macro_open(t);
      break;
    case dsl::Method::Close:
      macro_close(t);
      break;
    case dsl::Method::ToggleOn:
      macro_toggle(t, true);
      break;
    case dsl::Method::ToggleOff:
      macro_toggle(t, false);
      break;
    case dsl::Method::Slice:
      macro_slice(t);
      break;
    case dsl::Method::Pour:
      macro_pour(t);
      break;
    case dsl::Method::Clean:
      macro_clean(t);
      break;
  }
}

EpisodeResult Executor::execute_program(const dsl::PlanProgram& program) {
  EpisodeResult result;
  try {
    std::map<std::string, Target> resolved;
    for (const auto& stmt : program.statements) {
      execute_statement(stmt, program, resolved);
    }
    result.plan_completed = true;
    state_.status = EpisodeStatus::Success;
  } catch (const MacroFailure& f) {
    result.failure_reason = f.feedback.to_sentence();
    state_.status = EpisodeStatus::FailurePlan;
  } catch (const BudgetStop&) {
    result.failure_reason = "budget exhausted";
    state_.status = EpisodeStatus::FailureBudget;
  }
  result.state = state_;
  result.stats = {world_.steps_taken(), world_.navigation_steps(), world_.api_failures(),
                  state_.replans_used, state_.qa_budget_used, result.plan_completed};
  return result;
}

planner::PlannerRequest Executor::build_request(
    const std::string& command, const std::optional<FailureFeedback>& feedback) {
  std::string effective = command;
  if (feedback) effective += " " + feedback->to_sentence();

  const PromptTemplateRecord* tmpl = nullptr;
  std::vector<const ExampleRecord*> examples;
  RetrievalConfig cfg = ctx_.retrieval;
  if (!ctx_.shared_memory_mode && ctx_.templates) {
    cfg.mode = RetrievalMode::PromptRetrieval;
    PromptRetrievalResult res = ctx_.templates->retrieve_prompt(effective, *ctx_.examples, cfg);
    tmpl = res.prompt_template;
    examples = std::move(res.examples);
  } else {
    cfg.mode = RetrievalMode::SharedMemory;
    tmpl = ctx_.shared_template;
    if (!tmpl) throw ConfigError("shared-memory mode needs a shared template");
    examples = ctx_.examples->retrieve_top_k(effective, cfg);
  }
  planner::PlannerRequest request;
  request.prompt = prompt::assemble_plan_prompt(*tmpl, examples, ctx_.plan_api_text,
                                                ctx_.object_classes, effective);
  request.command = effective;
  for (const auto* e : examples) request.retrieved.push_back({e->id, e->program_text});
  return request;
}

EpisodeResult Executor::run_command(const std::string& command) {
  if (logger_) {
    logger_->log({{"event", "begin"},
                  {"scene", world_.scene_name()},
                  {"seed", cfg_.seed},
                  {"command", command}});
  }
  EpisodeResult result;
  try {
    initial_scan();
  } catch (const BudgetStop&) {
    state_.status = EpisodeStatus::FailureBudget;
  }

  std::optional<FailureFeedback> feedback;
  int attempt = 0;
  while (state_.status == EpisodeStatus::Running) {
    if (attempt > cfg_.budgets.max_replans) {
      state_.status = EpisodeStatus::FailurePlan;
      result.failure_reason = feedback ? feedback->to_sentence() : "no plan attempts left";
      break;
    }
    if (attempt > 0) state_.replans_used = attempt;
    ++attempt;

    dsl::PlanProgram program;
    try {
      planner::PlannerRequest request = build_request(command, feedback);
      planner::PlannerResponse response = ctx_.backend->generate(request);
      if (logger_) {
        logger_->log({{"event", "plan"},
                      {"attempt", attempt},
                      {"backend", response.backend_id},
                      {"program", response.program_text}});
      }
      result.program_attempts.push_back(response.program_text);
      program = dsl::parse_plan(response.program_text, world_.whitelist());
      auto violations = dsl::validate_plan(program, world_.affordances());
      if (dsl::has_errors(violations)) {
        feedback = FailureFeedback{"plan validation", dsl::describe(violations), std::nullopt};
        if (logger_) logger_->log({{"event", "feedback"}, {"text", feedback->to_sentence()}});
        continue;
      }
    } catch (const BackendError& e) {
      feedback = FailureFeedback{"plan generation", e.what(), std::nullopt};
      if (logger_) logger_->log({{"event", "feedback"}, {"text", feedback->to_sentence()}});
      continue;
    } catch (const dsl::ParseError& e) {
      feedback = FailureFeedback{"plan parsing", e.what(), std::nullopt};
      if (logger_) logger_->log({{"event", "feedback"}, {"text", feedback->to_sentence()}});
      continue;
    }

    try {
      std::map<std::string, Target> resolved;
      for (const auto& stmt : program.statements) {
        execute_statement(stmt, program, resolved);
      }
      result.plan_completed = true;
      state_.status = EpisodeStatus::Success;
    } catch (const MacroFailure& f) {
      feedback = f.feedback;
      if (logger_) logger_->log({{"event", "feedback"}, {"text", feedback->to_sentence()}});
    } catch (const BudgetStop&) {
      state_.status = EpisodeStatus::FailureBudget;
      result.failure_reason = "budget exhausted";
    }
  }

  if (state_.status == EpisodeStatus::FailurePlan && feedback) {
    result.failure_reason = feedback->to_sentence();
  }
  result.state = state_;
  result.stats = {world_.steps_taken(), world_.navigation_steps(), world_.api_failures(),
                  state_.replans_used, state_.qa_budget_used, result.plan_completed};
  if (logger_) {
    logger_->log({{"event", "end"},
                  {"status", to_string(state_.status)},
                  {"world_hash", text::hex64(world_.state_hash())},
                  {"steps", result.stats.steps},
                  {"api_failures", result.stats.api_failures},
                  {"replans", result.stats.replans},
                  {"questions", result.stats.questions}});
  }
  return result;
}

}  // namespace homeplan::exec
