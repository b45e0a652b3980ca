#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "homeplan/error.hpp"

namespace homeplan::spatial {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  double horizontal_distance(const Vec3& o) const;
};

struct CameraModel {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;
  double fov_deg = 90.0;

  // Square-pixel pinhole from a horizontal field of view.
  static CameraModel from_fov(int width, int height, double fov_deg = 90.0);
  void validate() const;
};

// Position is the optical center; yaw in {0,90,180,270} degrees clockwise
// from +z, pitch in multiples of 30 within [-60,60] (positive looks up).
struct Pose {
  Vec3 position;
  double yaw_deg = 0;
  double pitch_deg = 0;

  Vec3 forward() const;
  Vec3 right() const;
  Vec3 camera_to_world(const Vec3& cam) const;  // rotation + translation
  Vec3 world_to_camera(const Vec3& world) const;
  Vec3 rotate_to_world(const Vec3& cam) const;  // rotation only
};

// (X,Y,Z) world point for pixel (u,v) at camera-frame depth z.
Vec3 unproject(double u, double v, double z, const CameraModel& cam, const Pose& pose);

enum class CellState { Unknown, Free, Obstacle };

struct GridCell {
  int row = 0, col = 0;
  bool operator==(const GridCell& o) const { return row == o.row && col == o.col; }
  bool operator!=(const GridCell& o) const { return !(*this == o); }
  bool operator<(const GridCell& o) const {
    return row != o.row ? row < o.row : col < o.col;
  }
};

class OccupancyMap {
 public:
  OccupancyMap(int rows, int cols, double resolution);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  bool in_bounds(GridCell c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }

  CellState at(GridCell c) const;
  int observation_count(GridCell c) const { return obs_[index(c)]; }
  int unexplored_count(int explored_threshold) const;

  void add_obstacle_hit(GridCell c) { ++obstacle_[index(c)]; }
  void add_free_hit(GridCell c) { ++free_[index(c)]; }
  void add_observation(GridCell c) { ++obs_[index(c)]; }
  void set_state(GridCell c, CellState s);  // direct construction for tests/tools

  std::optional<GridCell> world_to_cell(const Vec3& p) const;
  Vec3 cell_center(GridCell c) const;

  std::string dump() const;  // '?' unknown, '.' free, '#' obstacle

 private:
  size_t index(GridCell c) const { return static_cast<size_t>(c.row) * cols_ + c.col; }
  int rows_, cols_;
  double resolution_;
  std::vector<int> obstacle_, free_, obs_;
};

enum class TriBool { Unknown, True, False };

struct ObjectMemoryEntry {
  std::string memory_id;
  std::string category;
  Vec3 centroid;
  double score = 1.0;
  long long instance_id = -1;  // most recent world instance behind this entry
  std::map<std::string, TriBool> attributes;
  int observations = 0;
};

// Default attribute set carried by every entry.
std::map<std::string, TriBool> default_object_attributes();

class ObjectMemory {
 public:
  // Centroid-proximity NMS within a category: entries closer than the
  // threshold are merged, keeping the higher score.
  void insert(const std::string& category, const Vec3& centroid, double score,
              long long instance_id, double nms_threshold);

  const std::vector<ObjectMemoryEntry>& entries() const { return entries_; }
  std::vector<const ObjectMemoryEntry*> entries_of(const std::string& category) const;
  const ObjectMemoryEntry* find(const std::string& memory_id) const;
  ObjectMemoryEntry* find_mutable(const std::string& memory_id);
  const ObjectMemoryEntry* nearest(const std::string& category, const Vec3& from) const;
  void set_attribute(const std::string& memory_id, const std::string& name, bool value);
  void erase(const std::string& memory_id);

 private:
  std::vector<ObjectMemoryEntry> entries_;
  int next_id_ = 0;
};

struct SegmentMask {
  long long instance_id = -1;
  std::string category;
  double score = 1.0;
  std::vector<std::pair<int, int>> pixels;  // (u, v)
};

struct Frame {
  int width = 0, height = 0;
  std::vector<float> depth;  // row-major, camera-frame Z; >= max_range means no hit
  std::vector<SegmentMask> masks;
  Pose camera_pose;
  CameraModel cam;
  double max_range = 10.0;
};

struct IntegrationConfig {
  double floor_max_y = 0.10;     // below: free-space evidence
  double obstacle_min_y = 0.10;  // band [min, max]: obstacle evidence
  double obstacle_max_y = 2.00;
  double nms_threshold = 0.25;
};

void integrate_frame(OccupancyMap& map, ObjectMemory& memory, const Frame& frame,
                     const IntegrationConfig& cfg = {});

struct ExplorationConfig {
  int explored_threshold = 1;            // observations needed to count as explored
  double done_unexplored_fraction = 0.02;  // stop when fewer than this remain
};

// Uniform over unexplored cells adjacent to free space reachable from the
// agent. nullopt when exploration is done or nothing is reachable.
std::optional<GridCell> sample_exploration_goal(const OccupancyMap& map, GridCell agent,
                                                std::mt19937_64& rng,
                                                const ExplorationConfig& cfg = {});

// Geodesic distance (in cells) from goal over FREE cells, 4-connected. -1 =
// unreachable. Grid is row-major rows x cols.
std::vector<int> geodesic_field(const OccupancyMap& map, GridCell goal);

struct PathResult {
  bool reachable = false;
  std::vector<GridCell> cells;  // start..goal inclusive
};

// Greedy descent of the geodesic field; the cell path is shortest in count.
PathResult plan_path(const OccupancyMap& map, GridCell start, GridCell goal);

}  // namespace homeplan::spatial
