#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graspness/core.hpp"
#include "graspness/shapes.hpp"

namespace graspness {

struct ObjectInstance {
  Shape shape;
  RigidTransform pose = RigidTransform::Identity();  // object -> world
  int id = 0;
};

/// Finite tabletop disk whose top face is the plane z = 0.
struct Table {
  bool enabled = true;
  double radius = 0.5;
  double thickness = 0.02;
};

/// Pinhole camera; camera frame is x right, y down, z along the optical axis.
struct CameraModel {
  RigidTransform pose = RigidTransform::Identity();  // camera -> world
  int width = 320;
  int height = 240;
  double fx = 320.0;
  double fy = 320.0;
  double cx = 160.0;
  double cy = 120.0;

  void validate() const;
  Vec3 position() const { return pose.translation(); }

  /// Camera at `eye` looking at `target`; image "up" follows `up`.
  static CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3::UnitZ(),
                             int width = 320, int height = 240, double focal = 320.0);
  /// Default tabletop viewpoint used when a scene does not carry a camera.
  static CameraModel tabletop_default();
};

constexpr double kContactTolerance = 1e-3;

struct Scene {
  std::vector<ObjectInstance> instances;
  Table table;
  std::optional<CameraModel> camera;
  double spacing = 0.005;
  std::uint64_t seed = 0;

  /// Object samples (in instance order) followed by table samples, in world
  /// coordinates, with normals, object_id and objectness channels.
  PointCloud full_cloud;
  /// [object_ranges[k], object_ranges[k+1]) indexes instance k's points in
  /// full_cloud; the final entry is where table samples begin.
  std::vector<std::size_t> object_ranges;

  std::size_t object_point_count() const { return object_ranges.empty() ? 0 : object_ranges.back(); }
  const ObjectInstance* find_instance(int id) const;
};

struct SceneHit {
  double distance;
  Vec3 normal;
  int object_id;  // -1 for the table
};

/// Builds the world-frame scene cloud. Throws InvalidArgument on duplicate
/// or negative ids, invalid shapes, or objects sunk into the table by more
/// than the contact tolerance.
Scene assemble_scene(std::vector<ObjectInstance> instances, const Table& table, double spacing,
                     std::uint64_t seed = 0);

/// Samples of the table top at `spacing`, normal +z.
PointCloud sample_table(const Table& table, double spacing);

/// Minimum signed distance over all instances and the table.
SceneHit scene_sdf(const Scene& scene, const Vec3& world_point);

struct RenderOptions {
  bool world_frame = true;
  int max_steps = 128;
  double hit_tolerance = 1e-5;
  double max_distance = 5.0;
  double depth_noise_stddev = 0.0;  // metres along the ray; 0 disables
  std::uint64_t noise_seed = 0;
};

/// Sphere-traces one ray per pixel. Each hit becomes a point with the hit
/// surface's normal (world frame), object_id and objectness. Misses produce
/// no point. Pixels are emitted in row-major order.
PointCloud render_depth_view(const Scene& scene, const CameraModel& camera, const RenderOptions& options = {});

/// Rejection-sampled clutter: boxes, spheres and cylinders resting on the
/// table at random yaw, upright or lying, with disjoint footprint circles.
struct RandomSceneOptions {
  int objects = -1;  // -1 draws 3 to 8 from the seed
  double placement_radius = 0.18;
  double margin = 0.003;
  int max_attempts = 10000;
};

/// Throws InvalidArgument when the objects cannot be placed within the
/// attempt budget.
std::vector<ObjectInstance> random_instances(std::uint64_t seed, const RandomSceneOptions& options = {});

}  // namespace graspness
