#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homeplan/memory_store.hpp"
#include "homeplan/plan_dsl.hpp"
#include "homeplan/spatial.hpp"

namespace homeplan::sim {

using spatial::GridCell;
using spatial::Vec3;

enum class PrimitiveKind {
  Forward,
  Backward,
  TurnLeft,
  TurnRight,
  LookUp,
  LookDown,
  StrafeLeft,
  StrafeRight,
  Pickup,
  Place,
  Open,
  Close,
  ToggleOn,
  ToggleOff,
  Slice,
  Pour,
};

const char* to_string(PrimitiveKind k);
std::optional<PrimitiveKind> primitive_from_name(const std::string& name);
bool is_navigation(PrimitiveKind k);
bool is_interaction(PrimitiveKind k);

struct PrimitiveAction {
  PrimitiveKind kind = PrimitiveKind::Forward;
  long long target = -1;  // object id for interaction actions
};

struct StepResult {
  bool ok = true;
  std::string reason;  // failure cause, empty on success
};

struct ObjectState {
  bool open = false;
  bool on = false;
  bool sliced = false;
  bool clean = false;
  bool cooked = false;
  bool filled = false;
  bool dirty = false;
  bool toasted = false;

  bool operator==(const ObjectState&) const = default;
};

struct WorldObject {
  long long id = -1;
  std::string name;  // scene-file name, stable across runs
  std::string category;
  GridCell cell;
  double base_y = 0.0;
  double height = 0.3;
  double half_extent = 0.1;
  long long parent = -1;  // containing receptacle, -1 = none
  double off_x = 0.0, off_z = 0.0;  // sub-cell slot, so siblings do not overlap
  ObjectState state;
};

struct AgentState {
  GridCell cell;
  double yaw_deg = 0;
  double pitch_deg = 0;
  long long held = -1;
};

struct Question {
  enum class Kind { Location, Appearance, Direction } kind = Kind::Location;
  std::string category;
};

struct SimConfig {
  double camera_height = 0.9015;
  double interact_range = 1.5;
  double max_render_range = 10.0;
  double wall_height = 2.4;
};

// Deterministic blocky household world: grid rooms, box objects, ground-truth
// depth/segmentation rendering, and a question oracle.
class World {
 public:
  static World load_scene_file(const std::string& path, const dsl::Affordances& affordances,
                               const dsl::Whitelist& whitelist);
  static World load_scene_json(const std::string& json_text, const dsl::Affordances& affordances,
                               const dsl::Whitelist& whitelist);

  StepResult step(const PrimitiveAction& action);
  spatial::Frame render(const spatial::CameraModel& cam) const;
  spatial::Pose camera_pose() const;

  std::string oracle_answer(const Question& q) const;

  const std::string& scene_name() const { return scene_name_; }
  const AgentState& agent() const { return agent_; }
  const std::vector<WorldObject>& objects() const { return objects_; }
  const WorldObject* object(long long id) const;
  const WorldObject* object_by_name(const std::string& name) const;
  std::vector<const WorldObject*> objects_of_category(const std::string& category) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_size() const { return cell_size_; }
  const SimConfig& config() const { return config_; }
  bool wall(GridCell c) const;
  bool traversable(GridCell c) const;

  int steps_taken() const { return steps_taken_; }
  int api_failures() const { return api_failures_; }
  int navigation_steps() const { return navigation_steps_; }

  // Visible = not inside a closed container and not held.
  bool visible(long long id) const;
  bool in_interact_range(long long id) const;
  std::map<std::string, bool> object_state_map(long long id) const;

  // Scene mutation before an episode starts (hidden-object suites, messy
  // rooms). Not counted as agent actions.
  void move_object_into(long long id, long long receptacle);
  void move_object_to_cell(long long id, GridCell cell);

  std::uint64_t state_hash() const;

  const dsl::Affordances& affordances() const { return *affordances_; }
  const dsl::Whitelist& whitelist() const { return *whitelist_; }

 private:
  bool object_blocks(const WorldObject& o) const;
  void refresh_held_pose();
  StepResult fail_interaction(const std::string& reason);
  const WorldObject* enclosing_closed_container(const WorldObject& o) const;
  void apply_toggle_effects(WorldObject& target);
  std::vector<long long> contents_of(long long id) const;
  double surface_top(const WorldObject& receptacle) const;
  bool inside_kind(const WorldObject& receptacle) const;

  std::string scene_name_;
  int rows_ = 0, cols_ = 0;
  double cell_size_ = 0.25;
  std::vector<char> walls_;  // row-major, 1 = wall
  std::vector<WorldObject> objects_;
  AgentState agent_;
  SimConfig config_;
  int steps_taken_ = 0;
  int api_failures_ = 0;
  int navigation_steps_ = 0;
  const dsl::Affordances* affordances_ = nullptr;
  const dsl::Whitelist* whitelist_ = nullptr;
};

// ------------------------------------------------------------- evaluation --

struct GoalCondition {
  enum class Kind { State, Containment } kind = Kind::State;
  std::string object;      // object name or category
  std::string attribute;   // State: attribute name
  bool expected = true;
  std::string receptacle;  // Containment: receptacle name or category

  // True when some matching object satisfies the predicate.
  bool holds(const World& world) const;
};

struct TaskSpec {
  std::string task_id;
  Domain domain = Domain::Teach;
  std::vector<GoalCondition> goal_conditions;
  int expert_path_length = 1;
};

struct EpisodeStats {
  int steps = 0;
  int navigation_steps = 0;
  int api_failures = 0;
  int replans = 0;
  int questions = 0;
  bool plan_completed = false;
};

struct MetricsReport {
  std::string episode_id;
  double sr = 0.0;
  double gc = 0.0;
  double plw_sr = 0.0;
  double plw_gc = 0.0;
  int steps = 0;
  int navigation_steps = 0;
  int api_failures = 0;
  int replans = 0;
  int questions = 0;
  // Tidy episodes only:
  std::optional<double> cm, im, energy_pct;
};

// SR/GC plus path-length weighting by expert/agent (capped at 1).
MetricsReport evaluate(const World& world, const TaskSpec& task, const EpisodeStats& stats);

// -------------------------------------------------------------- Tidy task --

class PlacementPrior {
 public:
  // CSV matrix: header row of object categories, one row per receptacle.
  static PlacementPrior load(const std::string& path);
  static PlacementPrior from_table(std::map<std::string, std::map<std::string, double>> t);
  double prob(const std::string& receptacle_category, const std::string& object_category) const;
  const std::map<std::string, std::map<std::string, double>>& table() const { return table_; }

 private:
  std::map<std::string, std::map<std::string, double>> table_;
};

struct MessyConfig {
  struct Displaced {
    long long object = -1;
    std::string object_name;
    long long original_parent = -1;
    GridCell original_cell;
    long long messy_parent = -1;
    GridCell messy_cell;
  };
  std::vector<Displaced> displaced;
};

// Moves n pickupable objects to their lowest-prior receptacles. Deterministic
// for a fixed seed; mutates the world and returns the record of what moved.
MessyConfig generate_messy(World& world, const PlacementPrior& prior, std::uint64_t seed,
                           int n_displaced);

struct TidyMetrics {
  double cm = 0;          // displaced objects the agent moved
  double im = 0;          // in-place objects the agent moved
  double energy_pct = 0;  // (P_cleanup - P_original) / (P_dirty - P_original) * 100
  int steps = 0;
};

TidyMetrics evaluate_tidy(const World& before, const World& after, const MessyConfig& messy,
                          const PlacementPrior& prior, const EpisodeStats& stats);

}  // namespace homeplan::sim
