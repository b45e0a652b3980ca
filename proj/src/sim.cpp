#include "homeplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "homeplan/text.hpp"

#include <json.hpp>

namespace homeplan::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Geometry {
  double height;
  bool full_cell;
};

// Blocky box sizes per category; anything missing falls back by pickupability.
const std::map<std::string, Geometry>& geometry_table() {
  static const std::map<std::string, Geometry> kTable = {
      {"CounterTop", {0.95, true}},  {"DiningTable", {0.75, true}},
      {"Desk", {0.75, true}},        {"SideTable", {0.60, true}},
      {"Dresser", {1.00, true}},     {"Shelf", {1.60, true}},
      {"Cabinet", {0.90, true}},     {"Drawer", {0.70, true}},
      {"Bed", {0.55, true}},         {"Sofa", {0.80, true}},
      {"ArmChair", {0.80, true}},    {"Fridge", {1.80, true}},
      {"Microwave", {0.80, true}},   {"Stove", {0.90, true}},
      {"Sink", {0.90, true}},        {"SinkBasin", {0.90, true}},
      {"Faucet", {1.10, false}},     {"GarbageCan", {0.60, true}},
      {"Toilet", {0.70, true}},      {"Bathtub", {0.55, true}},
      {"Television", {1.00, true}},  {"CoffeeMachine", {0.90, true}},
      {"Toaster", {0.80, true}},     {"Box", {0.40, true}},
      {"Kettle", {0.25, false}},     {"Laptop", {0.20, false}},
      {"Pot", {0.20, false}},        {"Towel", {0.20, false}},
      {"SprayBottle", {0.25, false}},
  };
  return kTable;
}

// Receptacles whose contents sit inside ("in the garbage can") rather than on
// top; openable categories are always "in".
bool always_inside(const std::string& category) {
  static const std::set<std::string> kInside = {"GarbageCan", "SinkBasin", "Sink", "Box",
                                                "Bathtub"};
  return kInside.count(category) > 0;
}

bool is_knife(const std::string& category) {
  return category == "Knife" || category == "ButterKnife";
}

int yaw_to_dr(int yaw) { return yaw == 0 ? 1 : yaw == 180 ? -1 : 0; }
int yaw_to_dc(int yaw) { return yaw == 90 ? 1 : yaw == 270 ? -1 : 0; }

}  // namespace

const char* to_string(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Forward: return "Forward";
    case PrimitiveKind::Backward: return "Backward";
    case PrimitiveKind::TurnLeft: return "TurnLeft";
    case PrimitiveKind::TurnRight: return "TurnRight";
    case PrimitiveKind::LookUp: return "LookUp";
    case PrimitiveKind::LookDown: return "LookDown";
    case PrimitiveKind::StrafeLeft: return "StrafeLeft";
    case PrimitiveKind::StrafeRight: return "StrafeRight";
    case PrimitiveKind::Pickup: return "Pickup";
    case PrimitiveKind::Place: return "Place";
    case PrimitiveKind::Open: return "Open";
    case PrimitiveKind::Close: return "Close";
    case PrimitiveKind::ToggleOn: return "ToggleOn";
    case PrimitiveKind::ToggleOff: return "ToggleOff";
    case PrimitiveKind::Slice: return "Slice";
    case PrimitiveKind::Pour: return "Pour";
  }
  return "?";
}

std::optional<PrimitiveKind> primitive_from_name(const std::string& name) {
  static const std::map<std::string, PrimitiveKind> kMap = []() {
    std::map<std::string, PrimitiveKind> m;
    for (int i = 0; i <= static_cast<int>(PrimitiveKind::Pour); ++i) {
      auto k = static_cast<PrimitiveKind>(i);
      m[to_string(k)] = k;
    }
    return m;
  }();
  auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

bool is_navigation(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Forward:
    case PrimitiveKind::Backward:
    case PrimitiveKind::TurnLeft:
    case PrimitiveKind::TurnRight:
    case PrimitiveKind::LookUp:
    case PrimitiveKind::LookDown:
    case PrimitiveKind::StrafeLeft:
    case PrimitiveKind::StrafeRight:
      return true;
    default:
      return false;
  }
}

bool is_interaction(PrimitiveKind k) { return !is_navigation(k); }

// ------------------------------------------------------------ scene load ---

World World::load_scene_file(const std::string& path, const dsl::Affordances& affordances,
                             const dsl::Whitelist& whitelist) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene_json(buf.str(), affordances, whitelist);
}

World World::load_scene_json(const std::string& json_text, const dsl::Affordances& affordances,
                             const dsl::Whitelist& whitelist) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad scene json: ") + e.what());
  }
  World w;
  w.affordances_ = &affordances;
  w.whitelist_ = &whitelist;
  w.scene_name_ = doc.value("name", "scene");
  w.cell_size_ = doc.value("cell_size", 0.25);
  if (doc.contains("camera_height")) w.config_.camera_height = doc["camera_height"];

  const auto& grid = doc.at("grid");
  w.rows_ = static_cast<int>(grid.size());
  if (w.rows_ == 0) throw ConfigError("scene grid is empty");
  w.cols_ = static_cast<int>(grid[0].get<std::string>().size());
  w.walls_.assign(static_cast<size_t>(w.rows_) * w.cols_, 0);
  for (int r = 0; r < w.rows_; ++r) {
    std::string row = grid[r].get<std::string>();
    if (static_cast<int>(row.size()) != w.cols_) {
      throw ConfigError("scene grid rows have uneven lengths");
    }
    for (int c = 0; c < w.cols_; ++c) {
      if (row[c] == '#') w.walls_[static_cast<size_t>(r) * w.cols_ + c] = 1;
    }
  }

  // First pass: create objects; second pass: containment.
  std::map<std::string, long long> by_name;
  for (const auto& entry : doc.at("objects")) {
    WorldObject o;
    o.id = static_cast<long long>(w.objects_.size());
    o.name = entry.at("name").get<std::string>();
    o.category = entry.at("category").get<std::string>();
    if (!whitelist.contains(o.category)) {
      throw ConfigError("scene object " + o.name + " has unknown category " + o.category);
    }
    if (!affordances.has_entry(o.category)) {
      throw ConfigError("scene object " + o.name + " has no affordance entry");
    }
    auto geo = geometry_table().find(o.category);
    bool pickup = affordances.allows(o.category, dsl::Capability::Pickupable);
    if (geo != geometry_table().end()) {
      o.height = geo->second.height;
      o.half_extent = geo->second.full_cell ? w.cell_size_ / 2.0
                                            : std::min(0.09, w.cell_size_ * 0.36);
    } else {
      o.height = pickup ? 0.15 : 0.9;
      o.half_extent = pickup ? std::min(0.09, w.cell_size_ * 0.36) : w.cell_size_ / 2.0;
    }
    if (entry.contains("cell")) {
      o.cell = {entry["cell"][0].get<int>(), entry["cell"][1].get<int>()};
      if (o.cell.row < 0 || o.cell.row >= w.rows_ || o.cell.col < 0 || o.cell.col >= w.cols_) {
        throw ConfigError("scene object " + o.name + " out of bounds");
      }
    }
    if (entry.contains("state")) {
      for (auto& [k, v] : entry["state"].items()) {
        bool b = v.get<bool>();
        if (k == "open") o.state.open = b;
        else if (k == "on") o.state.on = b;
        else if (k == "sliced") o.state.sliced = b;
        else if (k == "clean") o.state.clean = b;
        else if (k == "cooked") o.state.cooked = b;
        else if (k == "filled") o.state.filled = b;
        else if (k == "dirty") o.state.dirty = b;
        else if (k == "toasted") o.state.toasted = b;
        else throw ConfigError("unknown state key " + k + " on " + o.name);
      }
    }
    if (o.state.open && !affordances.allows(o.category, dsl::Capability::Openable)) {
      throw ConfigError(o.name + " starts open but is not openable");
    }
    if (by_name.count(o.name)) throw ConfigError("duplicate object name " + o.name);
    by_name[o.name] = o.id;
    w.objects_.push_back(std::move(o));
  }
  size_t i = 0;
  for (const auto& entry : doc.at("objects")) {
    WorldObject& o = w.objects_[i++];
    std::string parent_name;
    if (entry.contains("on")) parent_name = entry["on"].get<std::string>();
    if (entry.contains("in")) parent_name = entry["in"].get<std::string>();
    if (!parent_name.empty()) {
      auto it = by_name.find(parent_name);
      if (it == by_name.end()) {
        throw ConfigError(o.name + " references unknown receptacle " + parent_name);
      }
      w.move_object_into(o.id, it->second);
    } else if (!entry.contains("cell")) {
      throw ConfigError(o.name + " needs either a cell or a receptacle");
    }
  }

  const auto& agent = doc.at("agent");
  w.agent_.cell = {agent.at("cell")[0].get<int>(), agent.at("cell")[1].get<int>()};
  w.agent_.yaw_deg = agent.value("yaw", 0);
  w.agent_.pitch_deg = agent.value("pitch", 0);
  if (!w.traversable(w.agent_.cell)) throw ConfigError("agent starting cell is blocked");
  return w;
}

// -------------------------------------------------------------- accessors --

const WorldObject* World::object(long long id) const {
  if (id < 0 || id >= static_cast<long long>(objects_.size())) return nullptr;
  return &objects_[static_cast<size_t>(id)];
}

const WorldObject* World::object_by_name(const std::string& name) const {
  for (const auto& o : objects_) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

std::vector<const WorldObject*> World::objects_of_category(const std::string& category) const {
  std::vector<const WorldObject*> out;
  for (const auto& o : objects_) {
    if (o.category == category) out.push_back(&o);
  }
  return out;
}

bool World::wall(GridCell c) const {
  if (c.row < 0 || c.row >= rows_ || c.col < 0 || c.col >= cols_) return true;
  return walls_[static_cast<size_t>(c.row) * cols_ + c.col] != 0;
}

bool World::object_blocks(const WorldObject& o) const {
  return o.parent == -1 && o.id != agent_.held;
}

bool World::traversable(GridCell c) const {
  if (wall(c)) return false;
  for (const auto& o : objects_) {
    if (object_blocks(o) && o.cell == c) return false;
  }
  return true;
}

const WorldObject* World::enclosing_closed_container(const WorldObject& o) const {
  long long p = o.parent;
  while (p != -1) {
    const WorldObject* parent = object(p);
    if (!parent) break;
    if (affordances_->allows(parent->category, dsl::Capability::Openable) &&
        !parent->state.open) {
      return parent;
    }
    p = parent->parent;
  }
  return nullptr;
}

bool World::visible(long long id) const {
  const WorldObject* o = object(id);
  if (!o) return false;
  if (id == agent_.held) return false;
  return enclosing_closed_container(*o) == nullptr;
}

bool World::in_interact_range(long long id) const {
  const WorldObject* o = object(id);
  if (!o) return false;
  Vec3 a{(agent_.cell.col + 0.5) * cell_size_, 0, (agent_.cell.row + 0.5) * cell_size_};
  Vec3 p{(o->cell.col + 0.5) * cell_size_, 0, (o->cell.row + 0.5) * cell_size_};
  if (a.horizontal_distance(p) > config_.interact_range) return false;
  // Walls block reach; furniture does not.
  int r0 = agent_.cell.row, c0 = agent_.cell.col, r1 = o->cell.row, c1 = o->cell.col;
  int steps = std::max(std::abs(r1 - r0), std::abs(c1 - c0));
  for (int s = 1; s < steps; ++s) {
    GridCell mid{r0 + (r1 - r0) * s / steps, c0 + (c1 - c0) * s / steps};
    if (wall(mid)) return false;
  }
  return true;
}

std::map<std::string, bool> World::object_state_map(long long id) const {
  const WorldObject* o = object(id);
  if (!o) throw InputError("no such object id " + std::to_string(id));
  return {{"open", o->state.open},     {"on", o->state.on},
          {"sliced", o->state.sliced}, {"clean", o->state.clean},
          {"cooked", o->state.cooked}, {"filled", o->state.filled},
          {"dirty", o->state.dirty},   {"toasted", o->state.toasted}};
}

double World::surface_top(const WorldObject& receptacle) const {
  return receptacle.base_y + receptacle.height;
}

bool World::inside_kind(const WorldObject& receptacle) const {
  return affordances_->allows(receptacle.category, dsl::Capability::Openable) ||
         always_inside(receptacle.category);
}

std::vector<long long> World::contents_of(long long id) const {
  std::vector<long long> out;
  for (const auto& o : objects_) {
    if (o.parent == id) out.push_back(o.id);
  }
  return out;
}

void World::move_object_into(long long id, long long receptacle) {
  WorldObject& o = objects_.at(static_cast<size_t>(id));
  const WorldObject& r = objects_.at(static_cast<size_t>(receptacle));
  if (id == receptacle) throw InputError("object cannot contain itself");
  int siblings = 0;
  for (const auto& other : objects_) {
    if (other.parent == receptacle && other.id != id) ++siblings;
  }
  o.parent = receptacle;
  o.cell = r.cell;
  o.base_y = inside_kind(r) ? std::min(0.2, r.height * 0.3) : surface_top(r);
  // Distinct sub-cell slots keep sibling boxes from hiding one another.
  static const double kOff[5][2] = {
      {0, 0}, {-0.035, -0.035}, {0.035, -0.035}, {-0.035, 0.035}, {0.035, 0.035}};
  o.off_x = kOff[siblings % 5][0];
  o.off_z = kOff[siblings % 5][1];
}

void World::move_object_to_cell(long long id, GridCell cell) {
  WorldObject& o = objects_.at(static_cast<size_t>(id));
  o.parent = -1;
  o.cell = cell;
  o.base_y = 0.0;
  o.off_x = 0.0;
  o.off_z = 0.0;
}

void World::refresh_held_pose() {
  if (agent_.held == -1) return;
  WorldObject& o = objects_.at(static_cast<size_t>(agent_.held));
  o.cell = agent_.cell;
  o.base_y = 0.5;
}

// ------------------------------------------------------------------ step ---

StepResult World::fail_interaction(const std::string& reason) {
  ++api_failures_;
  return {false, reason};
}

void World::apply_toggle_effects(WorldObject& target) {
  if (target.category == "Microwave") {
    for (long long id : contents_of(target.id)) {
      objects_[static_cast<size_t>(id)].state.cooked = true;
    }
  } else if (target.category == "Faucet") {
    // Rinse everything sitting in a basin next to the faucet.
    for (const auto& basin : objects_) {
      if (basin.category != "SinkBasin" && basin.category != "Sink") continue;
      double d = std::hypot((basin.cell.row - target.cell.row) * cell_size_,
                            (basin.cell.col - target.cell.col) * cell_size_);
      if (d > 2.0 * cell_size_ + 1e-9) continue;
      for (long long id : contents_of(basin.id)) {
        WorldObject& o = objects_[static_cast<size_t>(id)];
        o.state.clean = true;
        o.state.dirty = false;
        if (affordances_->allows(o.category, dsl::Capability::Fillable)) o.state.filled = true;
      }
    }
  } else if (target.category == "CoffeeMachine") {
    for (long long id : contents_of(target.id)) {
      WorldObject& o = objects_[static_cast<size_t>(id)];
      o.state.filled = true;
      o.state.cooked = true;
    }
  } else if (target.category == "Toaster") {
    for (long long id : contents_of(target.id)) {
      objects_[static_cast<size_t>(id)].state.toasted = true;
    }
  } else if (target.category == "Stove") {
    for (long long id : contents_of(target.id)) {
      objects_[static_cast<size_t>(id)].state.cooked = true;
    }
  }
}

StepResult World::step(const PrimitiveAction& action) {
  ++steps_taken_;
  switch (action.kind) {
    case PrimitiveKind::Forward:
    case PrimitiveKind::Backward:
    case PrimitiveKind::StrafeLeft:
    case PrimitiveKind::StrafeRight: {
      int yaw = static_cast<int>(agent_.yaw_deg);
      int dr = 0, dc = 0;
      if (action.kind == PrimitiveKind::Forward) {
        dr = yaw_to_dr(yaw);
        dc = yaw_to_dc(yaw);
      } else if (action.kind == PrimitiveKind::Backward) {
        dr = -yaw_to_dr(yaw);
        dc = -yaw_to_dc(yaw);
      } else {
        int right = (yaw + 90) % 360;
        dr = yaw_to_dr(right);
        dc = yaw_to_dc(right);
        if (action.kind == PrimitiveKind::StrafeLeft) {
          dr = -dr;
          dc = -dc;
        }
      }
      GridCell dest{agent_.cell.row + dr, agent_.cell.col + dc};
      if (!traversable(dest)) return {false, "path blocked"};
      agent_.cell = dest;
      ++navigation_steps_;
      refresh_held_pose();
      return {true, ""};
    }
    case PrimitiveKind::TurnLeft:
      agent_.yaw_deg = std::fmod(agent_.yaw_deg + 270.0, 360.0);
      ++navigation_steps_;
      return {true, ""};
    case PrimitiveKind::TurnRight:
      agent_.yaw_deg = std::fmod(agent_.yaw_deg + 90.0, 360.0);
      ++navigation_steps_;
      return {true, ""};
    case PrimitiveKind::LookUp:
      if (agent_.pitch_deg >= 60.0) return {false, "pitch limit"};
      agent_.pitch_deg += 30.0;
      ++navigation_steps_;
      return {true, ""};
    case PrimitiveKind::LookDown:
      if (agent_.pitch_deg <= -60.0) return {false, "pitch limit"};
      agent_.pitch_deg -= 30.0;
      ++navigation_steps_;
      return {true, ""};
    default:
      break;
  }

  // Interaction actions.
  const WorldObject* target = object(action.target);
  if (!target) return fail_interaction("no such object");
  const std::string& cat = target->category;
  auto& aff = *affordances_;

  switch (action.kind) {
    case PrimitiveKind::Pickup: {
      if (agent_.held == action.target) return fail_interaction("already holding it");
      if (agent_.held != -1) return fail_interaction("hands full");
      if (!aff.allows(cat, dsl::Capability::Pickupable)) {
        return fail_interaction(cat + " cannot be picked up");
      }
      if (!visible(action.target)) return fail_interaction("object not visible");
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      agent_.held = action.target;
      WorldObject& o = objects_[static_cast<size_t>(action.target)];
      o.parent = -1;
      refresh_held_pose();
      return {true, ""};
    }
    case PrimitiveKind::Place: {
      if (agent_.held == -1) return fail_interaction("not holding any object");
      if (agent_.held == action.target) return fail_interaction("cannot place into held object");
      if (!aff.allows(cat, dsl::Capability::Receptacle)) {
        return fail_interaction(cat + " is not a receptacle");
      }
      if (!visible(action.target)) return fail_interaction("object not visible");
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (aff.allows(cat, dsl::Capability::Openable) && !target->state.open) {
        return fail_interaction("receptacle closed");
      }
      long long held = agent_.held;
      agent_.held = -1;
      move_object_into(held, action.target);
      return {true, ""};
    }
    case PrimitiveKind::Open: {
      if (!aff.allows(cat, dsl::Capability::Openable)) {
        return fail_interaction(cat + " cannot be opened");
      }
      if (!visible(action.target)) return fail_interaction("object not visible");
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (target->state.open) return fail_interaction("already open");
      objects_[static_cast<size_t>(action.target)].state.open = true;
      return {true, ""};
    }
    case PrimitiveKind::Close: {
      if (!aff.allows(cat, dsl::Capability::Openable)) {
        return fail_interaction(cat + " cannot be closed");
      }
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (!target->state.open) return fail_interaction("already closed");
      objects_[static_cast<size_t>(action.target)].state.open = false;
      return {true, ""};
    }
    case PrimitiveKind::ToggleOn: {
      if (!aff.allows(cat, dsl::Capability::Toggleable)) {
        return fail_interaction(cat + " cannot be toggled");
      }
      if (!visible(action.target)) return fail_interaction("object not visible");
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (target->state.on) return fail_interaction("already on");
      if (aff.allows(cat, dsl::Capability::Openable) && target->state.open) {
        return fail_interaction("door open");
      }
      WorldObject& o = objects_[static_cast<size_t>(action.target)];
      o.state.on = true;
      apply_toggle_effects(o);
      return {true, ""};
    }
    case PrimitiveKind::ToggleOff: {
      if (!aff.allows(cat, dsl::Capability::Toggleable)) {
        return fail_interaction(cat + " cannot be toggled");
      }
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (!target->state.on) return fail_interaction("already off");
      objects_[static_cast<size_t>(action.target)].state.on = false;
      return {true, ""};
    }
    case PrimitiveKind::Slice: {
      if (!aff.allows(cat, dsl::Capability::Sliceable)) {
        return fail_interaction(cat + " cannot be sliced");
      }
      if (agent_.held == -1 || !is_knife(objects_[static_cast<size_t>(agent_.held)].category)) {
        return fail_interaction("need a knife in hand");
      }
      if (!visible(action.target)) return fail_interaction("object not visible");
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      if (target->state.sliced) return fail_interaction("already sliced");
      objects_[static_cast<size_t>(action.target)].state.sliced = true;
      return {true, ""};
    }
    case PrimitiveKind::Pour: {
      if (agent_.held == -1) return fail_interaction("not holding any object");
      WorldObject& held = objects_[static_cast<size_t>(agent_.held)];
      if (!aff.allows(held.category, dsl::Capability::Fillable) || !held.state.filled) {
        return fail_interaction("held object is not a filled container");
      }
      if (!in_interact_range(action.target)) return fail_interaction("object out of reach");
      held.state.filled = false;
      if (aff.allows(cat, dsl::Capability::Fillable)) {
        objects_[static_cast<size_t>(action.target)].state.filled = true;
      }
      return {true, ""};
    }
    default:
      return fail_interaction("unsupported action");
  }
}

// ---------------------------------------------------------------- render ---

spatial::Pose World::camera_pose() const {
  spatial::Pose pose;
  pose.position = {(agent_.cell.col + 0.5) * cell_size_, config_.camera_height,
                   (agent_.cell.row + 0.5) * cell_size_};
  pose.yaw_deg = agent_.yaw_deg;
  pose.pitch_deg = agent_.pitch_deg;
  return pose;
}

namespace {

struct RenderBox {
  Vec3 lo, hi;
  long long obj = -1;        // -1 = wall
  long long container = -1;  // contents of this open container take priority
};

bool ray_aabb(const Vec3& origin, const Vec3& dir, const RenderBox& box, double limit,
              double* t_enter) {
  double t0 = 1e-9, t1 = limit;
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
  const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-12) {
      if (o[a] < lo[a] || o[a] > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  *t_enter = t0;
  return true;
}

}  // namespace

spatial::Frame World::render(const spatial::CameraModel& cam) const {
  cam.validate();
  spatial::Frame frame;
  frame.width = cam.width;
  frame.height = cam.height;
  frame.cam = cam;
  frame.camera_pose = camera_pose();
  frame.max_range = config_.max_render_range;
  frame.depth.assign(static_cast<size_t>(cam.width) * cam.height,
                     static_cast<float>(frame.max_range));

  // Per-cell candidate boxes.
  std::map<std::pair<int, int>, std::vector<RenderBox>> cells;
  for (const auto& o : objects_) {
    if (o.id == agent_.held) continue;
    if (enclosing_closed_container(o) != nullptr) continue;
    RenderBox box;
    double cx = (o.cell.col + 0.5) * cell_size_ + o.off_x;
    double cz = (o.cell.row + 0.5) * cell_size_ + o.off_z;
    box.lo = {cx - o.half_extent, o.base_y, cz - o.half_extent};
    box.hi = {cx + o.half_extent, o.base_y + o.height, cz + o.half_extent};
    box.obj = o.id;
    if (o.parent != -1) {
      const WorldObject* parent = object(o.parent);
      if (parent && inside_kind(*parent)) box.container = parent->id;
    }
    cells[{o.cell.row, o.cell.col}].push_back(box);
  }

  const spatial::Pose& pose = frame.camera_pose;
  const Vec3 origin = pose.position;
  std::map<long long, spatial::SegmentMask> masks;

  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      Vec3 dir_cam{(u + 0.5 - cam.cx) / cam.fx, (v + 0.5 - cam.cy) / cam.fy, 1.0};
      Vec3 dir = pose.rotate_to_world(dir_cam);
      double t_floor = dir.y < -1e-12 ? -origin.y / dir.y : std::numeric_limits<double>::max();

      double best_t = std::numeric_limits<double>::max();
      long long best_obj = -2;  // -2 none, -1 wall

      // 2D DDA over (x,z) cells.
      int row = agent_.cell.row, col = agent_.cell.col;
      double dx = dir.x, dz = dir.z;
      int step_col = dx > 0 ? 1 : -1;
      int step_row = dz > 0 ? 1 : -1;
      double t_max_x = std::abs(dx) < 1e-12
                           ? std::numeric_limits<double>::max()
                           : ((dx > 0 ? (col + 1) * cell_size_ - origin.x
                                      : origin.x - col * cell_size_) / std::abs(dx));
      double t_max_z = std::abs(dz) < 1e-12
                           ? std::numeric_limits<double>::max()
                           : ((dz > 0 ? (row + 1) * cell_size_ - origin.z
                                      : origin.z - row * cell_size_) / std::abs(dz));
      double t_delta_x = std::abs(dx) < 1e-12 ? std::numeric_limits<double>::max()
                                              : cell_size_ / std::abs(dx);
      double t_delta_z = std::abs(dz) < 1e-12 ? std::numeric_limits<double>::max()
                                              : cell_size_ / std::abs(dz);
      double t_entry = 0.0;

      while (t_entry < frame.max_range) {
        if (row < 0 || row >= rows_ || col < 0 || col >= cols_) break;
        double t_exit = std::min(t_max_x, t_max_z);

        // Wall column.
        if (wall({row, col})) {
          RenderBox wb;
          wb.lo = {col * cell_size_, 0.0, row * cell_size_};
          wb.hi = {(col + 1) * cell_size_, config_.wall_height, (row + 1) * cell_size_};
          double t;
          if (ray_aabb(origin, dir, wb, frame.max_range, &t) && t < best_t) {
            best_t = t;
            best_obj = -1;
          }
        }
        auto it = cells.find({row, col});
        if (it != cells.end()) {
          double cell_best_t = std::numeric_limits<double>::max();
          const RenderBox* cell_best = nullptr;
          for (const auto& box : it->second) {
            double t;
            if (ray_aabb(origin, dir, box, frame.max_range, &t) && t < cell_best_t) {
              cell_best_t = t;
              cell_best = &box;
            }
          }
          if (cell_best) {
            // Contents of an open container win over the container shell.
            double chosen_t = cell_best_t;
            long long chosen = cell_best->obj;
            if (cell_best->container == -1) {
              double content_t = std::numeric_limits<double>::max();
              long long content = -2;
              for (const auto& box : it->second) {
                if (box.container != cell_best->obj) continue;
                double t;
                if (ray_aabb(origin, dir, box, frame.max_range, &t) && t < content_t) {
                  content_t = t;
                  content = box.obj;
                }
              }
              if (content != -2) {
                chosen_t = content_t;
                chosen = content;
              }
            }
            if (chosen_t < best_t) {
              best_t = chosen_t;
              best_obj = chosen;
            }
          }
        }
        if (best_obj != -2 && best_t <= t_exit + 1e-9) break;
        // Floor hit inside this cell ends the march.
        if (t_floor >= t_entry - 1e-9 && t_floor <= t_exit + 1e-9) {
          if (t_floor < best_t) {
            best_t = t_floor;
            best_obj = -3;  // floor
          }
          break;
        }
        t_entry = t_exit;
        if (t_max_x < t_max_z) {
          col += step_col;
          t_max_x += t_delta_x;
        } else {
          row += step_row;
          t_max_z += t_delta_z;
        }
      }

      if (best_obj == -2 || best_t >= frame.max_range) continue;
      frame.depth[static_cast<size_t>(v) * cam.width + u] = static_cast<float>(best_t);
      if (best_obj >= 0) {
        auto& mask = masks[best_obj];
        if (mask.pixels.empty()) {
          mask.instance_id = best_obj;
          mask.category = objects_[static_cast<size_t>(best_obj)].category;
          mask.score = 1.0;
        }
        mask.pixels.emplace_back(u, v);
      }
    }
  }
  frame.masks.reserve(masks.size());
  for (auto& [id, mask] : masks) frame.masks.push_back(std::move(mask));
  return frame;
}

// ---------------------------------------------------------------- oracle ---

namespace {

std::string direction_phrase(double rel_deg) {
  double a = rel_deg;
  if (a > 180.0) a -= 360.0;
  if (a <= -180.0) a += 360.0;
  double mag = std::abs(a);
  if (mag <= 22.5) return "in front of you";
  if (mag > 112.5) return "behind you";
  std::string side = a > 0 ? "right" : "left";
  if (mag <= 67.5) return "to your front " + side;
  return "to your " + side;
}

}  // namespace

std::string World::oracle_answer(const Question& q) const {
  // Ground-truth oracle: knows every instance, including hidden ones.
  const WorldObject* best = nullptr;
  double best_d = 0;
  Vec3 apos{(agent_.cell.col + 0.5) * cell_size_, 0, (agent_.cell.row + 0.5) * cell_size_};
  for (const auto& o : objects_) {
    if (o.category != q.category || o.id == agent_.held) continue;
    Vec3 p{(o.cell.col + 0.5) * cell_size_, 0, (o.cell.row + 0.5) * cell_size_};
    double d = apos.horizontal_distance(p);
    if (!best || d < best_d) {
      best = &o;
      best_d = d;
    }
  }
  if (!best) return "I cannot answer that.";

  double bearing = std::atan2((best->cell.col + 0.5) * cell_size_ - apos.x,
                              (best->cell.row + 0.5) * cell_size_ - apos.z) *
                   180.0 / kPi;
  std::string dir = direction_phrase(bearing - agent_.yaw_deg);

  switch (q.kind) {
    case Question::Kind::Direction:
      return "The " + q.category + " is " + dir + ".";
    case Question::Kind::Appearance: {
      std::vector<std::string> adjectives;
      if (best->state.dirty) adjectives.push_back("dirty");
      if (best->state.clean) adjectives.push_back("clean");
      if (best->state.sliced) adjectives.push_back("sliced");
      if (best->state.cooked) adjectives.push_back("cooked");
      if (best->state.toasted) adjectives.push_back("toasted");
      if (best->state.filled) adjectives.push_back("filled");
      if (best->state.open) adjectives.push_back("open");
      if (adjectives.empty()) return "The " + q.category + " looks ordinary.";
      return "The " + q.category + " is " + text::join(adjectives, " and ") + ".";
    }
    case Question::Kind::Location:
    default: {
      const WorldObject* parent = best->parent != -1 ? object(best->parent) : nullptr;
      if (!parent) return "The " + q.category + " is " + dir + " on the floor.";
      std::string prep = inside_kind(*parent) ? "in" : "on";
      return "The " + q.category + " is " + dir + " " + prep + " the " +
             whitelist_->display_name(parent->category) + ".";
    }
  }
}

// ------------------------------------------------------------- state hash --

std::uint64_t World::state_hash() const {
  std::ostringstream out;
  for (const auto& o : objects_) {
    out << o.name << "|" << o.category << "|" << o.cell.row << "," << o.cell.col << "|"
        << o.parent << "|" << o.state.open << o.state.on << o.state.sliced << o.state.clean
        << o.state.cooked << o.state.filled << o.state.dirty << o.state.toasted << ";";
  }
  out << "agent|" << agent_.cell.row << "," << agent_.cell.col << "|" << agent_.yaw_deg << "|"
      << agent_.pitch_deg << "|" << agent_.held;
  return text::fnv1a(out.str());
}

// ------------------------------------------------------------- evaluation --

bool GoalCondition::holds(const World& world) const {
  std::vector<const WorldObject*> targets;
  if (const WorldObject* o = world.object_by_name(object)) {
    targets.push_back(o);
  } else {
    targets = world.objects_of_category(object);
  }
  for (const auto* o : targets) {
    if (kind == Kind::State) {
      auto states = world.object_state_map(o->id);
      auto it = states.find(attribute);
      if (it != states.end() && it->second == expected) return true;
    } else {
      const WorldObject* parent = o->parent != -1 ? world.object(o->parent) : nullptr;
      if (!parent) continue;
      if (parent->name == receptacle || parent->category == receptacle) return true;
    }
  }
  return false;
}

MetricsReport evaluate(const World& world, const TaskSpec& task, const EpisodeStats& stats) {
  if (task.goal_conditions.empty()) throw InputError("task has no goal conditions");
  if (task.expert_path_length <= 0) throw InputError("expert path length must be positive");
  MetricsReport report;
  report.episode_id = task.task_id;
  int satisfied = 0;
  for (const auto& cond : task.goal_conditions) {
    if (cond.holds(world)) ++satisfied;
  }
  report.gc = static_cast<double>(satisfied) / task.goal_conditions.size();
  report.sr = satisfied == static_cast<int>(task.goal_conditions.size()) ? 1.0 : 0.0;
  double weight = 1.0;
  if (stats.navigation_steps > 0) {
    weight = std::min(1.0, static_cast<double>(task.expert_path_length) /
                               static_cast<double>(stats.navigation_steps));
  }
  report.plw_sr = report.sr * weight;
  report.plw_gc = report.gc * weight;
  report.steps = stats.steps;
  report.navigation_steps = stats.navigation_steps;
  report.api_failures = stats.api_failures;
  report.replans = stats.replans;
  report.questions = stats.questions;
  return report;
}

// -------------------------------------------------------------- Tidy task --

PlacementPrior PlacementPrior::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open placement prior: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty placement prior file");
  auto header = text::split(text::trim(line), ',');
  if (header.size() < 2) throw ConfigError("placement prior needs object columns");
  std::map<std::string, std::map<std::string, double>> table;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    auto parts = text::split(text::trim(line), ',');
    if (parts.size() != header.size()) {
      throw ConfigError("placement prior row has wrong arity: " + line);
    }
    auto& row = table[text::trim(parts[0])];
    for (size_t i = 1; i < parts.size(); ++i) {
      double p = std::stod(parts[i]);
      if (p < 0.0 || p > 1.0) throw ConfigError("placement prior outside [0,1]");
      row[text::trim(header[i])] = p;
    }
  }
  return from_table(std::move(table));
}

PlacementPrior PlacementPrior::from_table(
    std::map<std::string, std::map<std::string, double>> t) {
  PlacementPrior p;
  p.table_ = std::move(t);
  return p;
}

double PlacementPrior::prob(const std::string& receptacle_category,
                            const std::string& object_category) const {
  auto it = table_.find(receptacle_category);
  if (it == table_.end()) return 0.0;
  auto jt = it->second.find(object_category);
  return jt == it->second.end() ? 0.0 : jt->second;
}

MessyConfig generate_messy(World& world, const PlacementPrior& prior, std::uint64_t seed,
                           int n_displaced) {
  std::vector<const WorldObject*> movable;
  for (const auto& o : world.objects()) {
    if (world.affordances().allows(o.category, dsl::Capability::Pickupable)) {
      movable.push_back(&o);
    }
  }
  std::sort(movable.begin(), movable.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });
  std::mt19937_64 rng(seed);
  std::shuffle(movable.begin(), movable.end(), rng);
  int n = std::min<int>(n_displaced, static_cast<int>(movable.size()));

  MessyConfig config;
  for (int i = 0; i < n; ++i) {
    const WorldObject* obj = movable[i];
    const WorldObject* worst = nullptr;
    double worst_p = 0;
    for (const auto& r : world.objects()) {
      if (r.id == obj->id || r.parent == obj->id) continue;
      if (!world.affordances().allows(r.category, dsl::Capability::Receptacle)) continue;
      if (r.id == obj->parent) continue;
      double p = prior.prob(r.category, obj->category);
      if (!worst || p < worst_p || (p == worst_p && r.name < worst->name)) {
        worst = &r;
        worst_p = p;
      }
    }
    if (!worst) continue;
    MessyConfig::Displaced d;
    d.object = obj->id;
    d.object_name = obj->name;
    d.original_parent = obj->parent;
    d.original_cell = obj->cell;
    d.messy_parent = worst->id;
    world.move_object_into(obj->id, worst->id);
    d.messy_cell = world.object(obj->id)->cell;
    config.displaced.push_back(d);
  }
  return config;
}

namespace {

double placement_sum(const World& world, const PlacementPrior& prior,
                     const std::map<long long, long long>& parent_override) {
  double sum = 0;
  for (const auto& o : world.objects()) {
    if (!world.affordances().allows(o.category, dsl::Capability::Pickupable)) continue;
    long long parent = o.parent;
    auto it = parent_override.find(o.id);
    if (it != parent_override.end()) parent = it->second;
    if (parent == -1) {
      sum += prior.prob("Floor", o.category);
      continue;
    }
    const WorldObject* p = world.object(parent);
    if (p) sum += prior.prob(p->category, o.category);
  }
  return sum;
}

}  // namespace

TidyMetrics evaluate_tidy(const World& before, const World& after, const MessyConfig& messy,
                          const PlacementPrior& prior, const EpisodeStats& stats) {
  TidyMetrics out;
  out.steps = stats.steps;

  std::set<long long> displaced;
  std::map<long long, long long> original_parent;
  for (const auto& d : messy.displaced) {
    displaced.insert(d.object);
    original_parent[d.object] = d.original_parent;
  }

  for (const auto& b : before.objects()) {
    const WorldObject* a = after.object(b.id);
    if (!a) continue;
    bool moved = a->parent != b.parent || a->cell != b.cell;
    if (!moved) continue;
    if (displaced.count(b.id)) {
      out.cm += 1;
    } else if (before.affordances().allows(b.category, dsl::Capability::Pickupable)) {
      out.im += 1;
    }
  }

  if (messy.displaced.empty()) {
    out.energy_pct = 0.0;
    return out;
  }
  double p_dirty = placement_sum(before, prior, {});
  double p_cleanup = placement_sum(after, prior, {});
  double p_original = placement_sum(before, prior, original_parent);
  double denom = p_dirty - p_original;
  if (std::abs(denom) < 1e-12) {
    out.energy_pct = 0.0;
    return out;
  }
  out.energy_pct = 100.0 * (p_cleanup - p_original) / denom;
  return out;
}

}  // namespace homeplan::sim
