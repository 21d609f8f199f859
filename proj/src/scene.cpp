#include "graspness/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace graspness {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Cylinder table_body(const Table& table) { return {table.radius, 0.5 * table.thickness}; }

Vec3 table_center(const Table& table) { return Vec3(0.0, 0.0, -0.5 * table.thickness); }

double lowest_z(const ObjectInstance& inst) {
  const Mat3 r = inst.pose.linear();
  const double tz = inst.pose.translation().z();
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          return tz - (r.row(2).cwiseAbs().dot(b.half_extents));
                        },
                        [&](const Sphere& s) { return tz - s.radius; },
                        [&](const Cylinder& c) {
                          return tz - (c.radius * std::hypot(r(2, 0), r(2, 1)) + c.half_height * std::abs(r(2, 2)));
                        },
                        [&](const TriMesh& m) {
                          double lo = std::numeric_limits<double>::infinity();
                          for (const Vec3& v : m.vertices) lo = std::min(lo, (inst.pose * v).z());
                          return lo;
                        },
                    },
                    inst.shape);
}

}  // namespace

void CameraModel::validate() const {
  if (width <= 0 || height <= 0) throw InvalidArgument("camera image size must be positive");
  if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("camera focal lengths must be positive");
  if (cx < 0.0 || cx > width || cy < 0.0 || cy > height) {
    throw InvalidArgument("camera principal point must lie inside the image");
  }
  if (!is_rigid(pose)) throw InvalidArgument("camera pose is not a rigid transform");
}

CameraModel CameraModel::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height,
                                 double focal) {
  const Vec3 forward = (target - eye).normalized();
  Vec3 right = forward.cross(up);
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitY());
  right.normalize();
  const Vec3 down = forward.cross(right);
  Mat3 r;
  r.col(0) = right;
  r.col(1) = down;
  r.col(2) = forward;
  CameraModel cam;
  cam.pose = make_transform(r, eye);
  cam.width = width;
  cam.height = height;
  cam.fx = cam.fy = focal;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  return cam;
}

CameraModel CameraModel::tabletop_default() {
  return look_at(Vec3(0.0, -0.40, 0.55), Vec3(0.0, 0.0, 0.03));
}

const ObjectInstance* Scene::find_instance(int id) const {
  for (const auto& inst : instances) {
    if (inst.id == id) return &inst;
  }
  return nullptr;
}

PointCloud sample_table(const Table& table, double spacing) {
  PointCloud out;
  if (!table.enabled) return out;
  const int n = static_cast<int>(std::ceil(table.radius / spacing));
  for (int i = -n; i < n; ++i) {
    for (int j = -n; j < n; ++j) {
      const double x = (i + 0.5) * spacing, y = (j + 0.5) * spacing;
      if (x * x + y * y > table.radius * table.radius) continue;
      out.positions.emplace_back(x, y, 0.0);
      out.normals.push_back(Vec3::UnitZ());
    }
  }
  return out;
}

Scene assemble_scene(std::vector<ObjectInstance> instances, const Table& table, double spacing,
                     std::uint64_t seed) {
  if (!(spacing > 0.0)) throw InvalidArgument("assemble_scene: spacing must be positive");
  if (table.enabled && (!(table.radius > 0.0) || !(table.thickness > 0.0))) {
    throw InvalidArgument("assemble_scene: table dimensions must be positive");
  }
  std::set<int> ids;
  for (const auto& inst : instances) {
    if (inst.id < 0) throw InvalidArgument("assemble_scene: object ids must be non-negative");
    if (!ids.insert(inst.id).second) {
      throw InvalidArgument("assemble_scene: duplicate object id " + std::to_string(inst.id));
    }
    validate_shape(inst.shape);
    if (!is_rigid(inst.pose)) throw InvalidArgument("assemble_scene: object pose is not rigid");
    if (table.enabled && lowest_z(inst) < -kContactTolerance) {
      throw InvalidArgument("assemble_scene: object " + std::to_string(inst.id) + " penetrates the table");
    }
  }

  Scene scene;
  scene.instances = std::move(instances);
  scene.table = table;
  scene.spacing = spacing;
  scene.seed = seed;
  PointCloud& cloud = scene.full_cloud;
  scene.object_ranges.push_back(0);
  for (const auto& inst : scene.instances) {
    const PointCloud local = sample_surface(inst.shape, spacing, seed ^ static_cast<std::uint64_t>(inst.id));
    const Mat3 r = inst.pose.linear();
    for (std::size_t i = 0; i < local.size(); ++i) {
      cloud.positions.push_back(inst.pose * local.positions[i]);
      cloud.normals.push_back(r * local.normals[i]);
      cloud.object_id.push_back(inst.id);
      cloud.objectness.push_back(1);
    }
    scene.object_ranges.push_back(cloud.size());
  }
  const PointCloud top = sample_table(table, spacing);
  for (std::size_t i = 0; i < top.size(); ++i) {
    cloud.positions.push_back(top.positions[i]);
    cloud.normals.push_back(top.normals[i]);
    cloud.object_id.push_back(-1);
    cloud.objectness.push_back(0);
  }
  return scene;
}

SceneHit scene_sdf(const Scene& scene, const Vec3& p) {
  SceneHit best{std::numeric_limits<double>::infinity(), Vec3::UnitZ(), -1};
  for (const auto& inst : scene.instances) {
    const Vec3 local = inst.pose.inverse() * p;
    const SdfSample s = sdf_and_normal(inst.shape, local);
    if (s.distance < best.distance) best = {s.distance, inst.pose.linear() * s.normal, inst.id};
  }
  if (scene.table.enabled) {
    const SdfSample s = sdf_and_normal(table_body(scene.table), p - table_center(scene.table));
    if (s.distance < best.distance) best = {s.distance, s.normal, -1};
  }
  return best;
}

PointCloud render_depth_view(const Scene& scene, const CameraModel& camera, const RenderOptions& options) {
  camera.validate();
  const std::size_t pixels = static_cast<std::size_t>(camera.width) * static_cast<std::size_t>(camera.height);
  struct PixelHit {
    bool hit = false;
    Vec3 position;
    Vec3 normal;
    int id = -1;
  };
  std::vector<PixelHit> hits(pixels);
  const Vec3 origin = camera.pose.translation();
  const Mat3 rot = camera.pose.linear();
  const bool has_geometry = !scene.instances.empty() || scene.table.enabled;

#pragma omp parallel for schedule(dynamic, 4)
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      if (!has_geometry) continue;
      const std::size_t pix = static_cast<std::size_t>(v) * static_cast<std::size_t>(camera.width) +
                              static_cast<std::size_t>(u);
      const Vec3 dir_cam = Vec3((u + 0.5 - camera.cx) / camera.fx, (v + 0.5 - camera.cy) / camera.fy, 1.0).normalized();
      const Vec3 dir = rot * dir_cam;
      double t = 0.0;
      for (int step = 0; step < options.max_steps; ++step) {
        const Vec3 p = origin + t * dir;
        const SceneHit s = scene_sdf(scene, p);
        if (s.distance < options.hit_tolerance) {
          double t_out = t;
          if (options.depth_noise_stddev > 0.0) {
            std::mt19937_64 rng(options.noise_seed ^ static_cast<std::uint64_t>(pix));
            std::normal_distribution<double> noise(0.0, options.depth_noise_stddev);
            t_out += noise(rng);
          }
          hits[pix] = {true, origin + t_out * dir, s.normal, s.object_id};
          break;
        }
        t += s.distance;
        if (t > options.max_distance) break;
      }
    }
  }

  PointCloud out;
  const RigidTransform world_to_cam = camera.pose.inverse();
  for (const PixelHit& h : hits) {
    if (!h.hit) continue;
    if (options.world_frame) {
      out.positions.push_back(h.position);
      out.normals.push_back(h.normal);
    } else {
      out.positions.push_back(world_to_cam * h.position);
      out.normals.push_back(world_to_cam.linear() * h.normal);
    }
    out.object_id.push_back(h.id);
    out.objectness.push_back(h.id >= 0 ? 1 : 0);
  }
  return out;
}

}  // namespace graspness
