#include "homeplan/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace homeplan::spatial {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double Vec3::horizontal_distance(const Vec3& o) const {
  double dx = x - o.x, dz = z - o.z;
  return std::sqrt(dx * dx + dz * dz);
}

CameraModel CameraModel::from_fov(int width, int height, double fov_deg) {
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fov_deg = fov_deg;
  cam.fx = (width / 2.0) / std::tan(deg2rad(fov_deg) / 2.0);
  cam.fy = cam.fx;
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  cam.validate();
  return cam;
}

void CameraModel::validate() const {
  if (fx <= 0 || fy <= 0) throw InputError("camera focal lengths must be positive");
  if (cx < 0 || cx >= width || cy < 0 || cy >= height) {
    throw InputError("camera principal point outside image bounds");
  }
}

Vec3 Pose::forward() const {
  double yaw = deg2rad(yaw_deg), pitch = deg2rad(pitch_deg);
  return {std::cos(pitch) * std::sin(yaw), std::sin(pitch), std::cos(pitch) * std::cos(yaw)};
}

Vec3 Pose::right() const {
  double yaw = deg2rad(yaw_deg);
  return {std::cos(yaw), 0.0, -std::sin(yaw)};
}

Vec3 Pose::rotate_to_world(const Vec3& cam) const {
  double yaw = deg2rad(yaw_deg), pitch = deg2rad(pitch_deg);
  // Camera axes in world coordinates: x right, y down (image v), z forward.
  Vec3 xc = right();
  Vec3 yc{std::sin(pitch) * std::sin(yaw), -std::cos(pitch), std::sin(pitch) * std::cos(yaw)};
  Vec3 zc = forward();
  return xc * cam.x + yc * cam.y + zc * cam.z;
}

Vec3 Pose::camera_to_world(const Vec3& cam) const { return position + rotate_to_world(cam); }

Vec3 Pose::world_to_camera(const Vec3& world) const {
  Vec3 d = world - position;
  double yaw = deg2rad(yaw_deg), pitch = deg2rad(pitch_deg);
  Vec3 xc = right();
  Vec3 yc{std::sin(pitch) * std::sin(yaw), -std::cos(pitch), std::sin(pitch) * std::cos(yaw)};
  Vec3 zc = forward();
  return {d.dot(xc), d.dot(yc), d.dot(zc)};
}

Vec3 unproject(double u, double v, double z, const CameraModel& cam, const Pose& pose) {
  if (z <= 0) throw InputError("unproject needs positive depth");
  if (u < 0 || u >= cam.width || v < 0 || v >= cam.height) {
    throw InputError("pixel outside image bounds");
  }
  Vec3 p_cam{z * (u - cam.cx) / cam.fx, z * (v - cam.cy) / cam.fy, z};
  return pose.camera_to_world(p_cam);
}

// ----------------------------------------------------------- OccupancyMap --

OccupancyMap::OccupancyMap(int rows, int cols, double resolution)
    : rows_(rows), cols_(cols), resolution_(resolution) {
  if (rows <= 0 || cols <= 0 || resolution <= 0) {
    throw InputError("occupancy map needs positive shape and resolution");
  }
  size_t n = static_cast<size_t>(rows) * cols;
  obstacle_.assign(n, 0);
  free_.assign(n, 0);
  obs_.assign(n, 0);
}

CellState OccupancyMap::at(GridCell c) const {
  size_t i = index(c);
  if (obstacle_[i] > 0) return CellState::Obstacle;  // obstacle evidence dominates
  if (free_[i] > 0) return CellState::Free;
  return CellState::Unknown;
}

int OccupancyMap::unexplored_count(int explored_threshold) const {
  int n = 0;
  for (int v : obs_) {
    if (v < explored_threshold) ++n;
  }
  return n;
}

void OccupancyMap::set_state(GridCell c, CellState s) {
  size_t i = index(c);
  obstacle_[i] = 0;
  free_[i] = 0;
  if (s == CellState::Obstacle) obstacle_[i] = 1;
  if (s == CellState::Free) free_[i] = 1;
}

std::optional<GridCell> OccupancyMap::world_to_cell(const Vec3& p) const {
  GridCell c{static_cast<int>(std::floor(p.z / resolution_)),
             static_cast<int>(std::floor(p.x / resolution_))};
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

Vec3 OccupancyMap::cell_center(GridCell c) const {
  return {(c.col + 0.5) * resolution_, 0.0, (c.row + 0.5) * resolution_};
}

std::string OccupancyMap::dump() const {
  std::ostringstream out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      CellState s = at({r, c});
      out << (s == CellState::Obstacle ? '#' : s == CellState::Free ? '.' : '?');
    }
    out << "\n";
  }
  return out.str();
}

// ----------------------------------------------------------- ObjectMemory --

std::map<std::string, TriBool> default_object_attributes() {
  return {
      {"holding", TriBool::False}, {"can_use", TriBool::True},
      {"sliced", TriBool::False},  {"toasted", TriBool::False},
      {"clean", TriBool::Unknown}, {"cooked", TriBool::False},
      {"dirty", TriBool::Unknown}, {"out_of_place", TriBool::Unknown},
  };
}

void ObjectMemory::insert(const std::string& category, const Vec3& centroid, double score,
                          long long instance_id, double nms_threshold) {
  if (!(score >= 0.0 && score <= 1.0)) throw InputError("detection score must lie in [0,1]");
  ObjectMemoryEntry* best = nullptr;
  double best_dist = nms_threshold;
  for (auto& e : entries_) {
    if (e.category != category) continue;
    double d = (e.centroid - centroid).norm();
    if (d <= best_dist) {
      best = &e;
      best_dist = d;
    }
  }
  if (best) {
    ++best->observations;
    if (score > best->score) {
      best->score = score;
      best->centroid = centroid;
      best->instance_id = instance_id;
    }
    return;
  }
  ObjectMemoryEntry e;
  e.memory_id = "mem_" + std::to_string(next_id_++);
  e.category = category;
  e.centroid = centroid;
  e.score = score;
  e.instance_id = instance_id;
  e.attributes = default_object_attributes();
  e.observations = 1;
  entries_.push_back(std::move(e));
}

std::vector<const ObjectMemoryEntry*> ObjectMemory::entries_of(
    const std::string& category) const {
  std::vector<const ObjectMemoryEntry*> out;
  for (const auto& e : entries_) {
    if (e.category == category) out.push_back(&e);
  }
  return out;
}

const ObjectMemoryEntry* ObjectMemory::find(const std::string& memory_id) const {
  for (const auto& e : entries_) {
    if (e.memory_id == memory_id) return &e;
  }
  return nullptr;
}

ObjectMemoryEntry* ObjectMemory::find_mutable(const std::string& memory_id) {
  for (auto& e : entries_) {
    if (e.memory_id == memory_id) return &e;
  }
  return nullptr;
}

const ObjectMemoryEntry* ObjectMemory::nearest(const std::string& category,
                                               const Vec3& from) const {
  const ObjectMemoryEntry* best = nullptr;
  double best_d = 0;
  for (const auto& e : entries_) {
    if (e.category != category) continue;
    double d = (e.centroid - from).norm();
    if (!best || d < best_d) {
      best = &e;
      best_d = d;
    }
  }
  return best;
}

void ObjectMemory::set_attribute(const std::string& memory_id, const std::string& name,
                                 bool value) {
  if (auto* e = find_mutable(memory_id)) {
    e->attributes[name] = value ? TriBool::True : TriBool::False;
  }
}

void ObjectMemory::erase(const std::string& memory_id) {
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                [&](const ObjectMemoryEntry& e) {
                                  return e.memory_id == memory_id;
                                }),
                 entries_.end());
}

// -------------------------------------------------------- integrate_frame --

void integrate_frame(OccupancyMap& map, ObjectMemory& memory, const Frame& frame,
                     const IntegrationConfig& cfg) {
  if (frame.depth.size() != static_cast<size_t>(frame.width) * frame.height) {
    throw InputError("depth buffer does not match frame shape");
  }
  std::set<GridCell> seen;
  for (int v = 0; v < frame.height; ++v) {
    for (int u = 0; u < frame.width; ++u) {
      float z = frame.depth[static_cast<size_t>(v) * frame.width + u];
      if (!(z > 0) || z >= frame.max_range) continue;
      Vec3 p = unproject(u + 0.5, v + 0.5, z, frame.cam, frame.camera_pose);
      // Surface hits land exactly on cell boundaries in a blocky world; nudge
      // along the ray so the point bins into the cell it belongs to.
      Vec3 ray = p - frame.camera_pose.position;
      p = p + ray * 1e-4;
      auto cell = map.world_to_cell(p);
      if (!cell) continue;
      if (p.y > cfg.obstacle_min_y && p.y < cfg.obstacle_max_y) {
        map.add_obstacle_hit(*cell);
      } else if (p.y <= cfg.floor_max_y) {
        map.add_free_hit(*cell);
      } else {
        continue;  // above the obstacle band (e.g. over a wall): ignore
      }
      seen.insert(*cell);
    }
  }
  for (const GridCell& c : seen) map.add_observation(c);

  for (const auto& mask : frame.masks) {
    if (mask.pixels.empty()) continue;
    std::vector<std::pair<float, std::pair<int, int>>> depths;
    depths.reserve(mask.pixels.size());
    for (const auto& [u, v] : mask.pixels) {
      float z = frame.depth[static_cast<size_t>(v) * frame.width + u];
      if (z > 0 && z < frame.max_range) depths.push_back({z, {u, v}});
    }
    if (depths.empty()) continue;
    size_t mid = depths.size() / 2;
    std::nth_element(depths.begin(), depths.begin() + mid, depths.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto [z, px] = depths[mid];
    Vec3 centroid = unproject(px.first + 0.5, px.second + 0.5, z, frame.cam, frame.camera_pose);
    memory.insert(mask.category, centroid, mask.score, mask.instance_id, cfg.nms_threshold);
  }
}

// ------------------------------------------------------------ exploration --

std::optional<GridCell> sample_exploration_goal(const OccupancyMap& map, GridCell agent,
                                                std::mt19937_64& rng,
                                                const ExplorationConfig& cfg) {
  int total = map.rows() * map.cols();
  int unexplored = map.unexplored_count(cfg.explored_threshold);
  if (unexplored < cfg.done_unexplored_fraction * total) return std::nullopt;

  // Reachability: flood fill over free cells starting at the agent.
  std::vector<char> visited(static_cast<size_t>(total), 0);
  std::deque<GridCell> queue;
  auto idx = [&](GridCell c) { return static_cast<size_t>(c.row) * map.cols() + c.col; };
  if (!map.in_bounds(agent)) return std::nullopt;
  visited[idx(agent)] = 1;
  queue.push_back(agent);
  const int dr[] = {-1, 1, 0, 0};
  const int dc[] = {0, 0, -1, 1};
  std::set<GridCell> candidates;
  auto consider = [&](GridCell c) {
    if (map.observation_count(c) < cfg.explored_threshold &&
        map.at(c) != CellState::Obstacle) {
      candidates.insert(c);
    }
  };
  consider(agent);
  while (!queue.empty()) {
    GridCell cur = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      GridCell nxt{cur.row + dr[d], cur.col + dc[d]};
      if (!map.in_bounds(nxt) || visited[idx(nxt)]) continue;
      visited[idx(nxt)] = 1;
      consider(nxt);
      if (map.at(nxt) == CellState::Free) queue.push_back(nxt);
    }
  }
  if (candidates.empty()) return std::nullopt;
  std::vector<GridCell> ordered(candidates.begin(), candidates.end());
  std::uniform_int_distribution<size_t> pick(0, ordered.size() - 1);
  return ordered[pick(rng)];
}

// -------------------------------------------------------------- planning ---

std::vector<int> geodesic_field(const OccupancyMap& map, GridCell goal) {
  std::vector<int> dist(static_cast<size_t>(map.rows()) * map.cols(), -1);
  auto idx = [&](GridCell c) { return static_cast<size_t>(c.row) * map.cols() + c.col; };
  if (!map.in_bounds(goal) || map.at(goal) == CellState::Obstacle) return dist;
  std::deque<GridCell> queue;
  dist[idx(goal)] = 0;
  queue.push_back(goal);
  const int dr[] = {-1, 1, 0, 0};
  const int dc[] = {0, 0, -1, 1};
  while (!queue.empty()) {
    GridCell cur = queue.front();
    queue.pop_front();
    int d = dist[idx(cur)];
    for (int k = 0; k < 4; ++k) {
      GridCell nxt{cur.row + dr[k], cur.col + dc[k]};
      if (!map.in_bounds(nxt) || dist[idx(nxt)] != -1) continue;
      if (map.at(nxt) != CellState::Free) continue;
      dist[idx(nxt)] = d + 1;
      queue.push_back(nxt);
    }
  }
  return dist;
}

PathResult plan_path(const OccupancyMap& map, GridCell start, GridCell goal) {
  if (!map.in_bounds(start) || !map.in_bounds(goal)) {
    throw InputError("path endpoints out of bounds");
  }
  if (map.at(start) == CellState::Obstacle || map.at(goal) == CellState::Obstacle) {
    throw InputError("path endpoints must not be obstacles");
  }
  PathResult result;
  std::vector<int> dist = geodesic_field(map, goal);
  auto idx = [&](GridCell c) { return static_cast<size_t>(c.row) * map.cols() + c.col; };
  if (start == goal) {
    result.reachable = true;
    result.cells = {start};
    return result;
  }
  if (dist[idx(start)] < 0) return result;  // unreachable

  // Greedy descent: at each cell step to the neighbor with the lowest
  // geodesic distance (deterministic N,S,W,E order on ties).
  GridCell cur = start;
  result.cells.push_back(cur);
  const int dr[] = {-1, 1, 0, 0};
  const int dc[] = {0, 0, -1, 1};
  while (cur != goal) {
    GridCell best = cur;
    int best_d = dist[idx(cur)];
    for (int k = 0; k < 4; ++k) {
      GridCell nxt{cur.row + dr[k], cur.col + dc[k]};
      if (!map.in_bounds(nxt) || dist[idx(nxt)] < 0) continue;
      if (dist[idx(nxt)] < best_d) {
        best = nxt;
        best_d = dist[idx(nxt)];
      }
    }
    if (best == cur) return {};  // should not happen on a consistent field
    cur = best;
    result.cells.push_back(cur);
  }
  result.reachable = true;
  return result;
}

}  // namespace homeplan::spatial
