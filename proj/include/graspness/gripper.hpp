#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graspness/core.hpp"
#include "graspness/spatial_index.hpp"

namespace graspness {

/// Parallel-jaw gripper dimensions in metres.
struct GripperModel {
  double max_width = 0.10;
  double finger_length = 0.06;  // approach extent of the fingers beyond the palm
  double finger_thickness = 0.01;
  double finger_height = 0.02;  // out-of-plane extent
  double palm_depth = 0.02;

  void validate() const;
};

/// Opening added to the measured contact span when a grasp width is chosen.
constexpr double kWidthClearance = 0.01;

/// Gripper frame: x = approach direction (towards the surface), y = closing
/// direction, z = finger-height direction; origin at the grasp centre.
///
/// The frame is built from the minimal rotation taking +z onto the approach
/// direction applied to the base axes (x=+z, y=+y), followed by a rotation of
/// `angle` about x. An approach of exactly -z uses a half turn about +x.
/// Coordinates are resolved in two stages (angle-free then in-plane rotation)
/// so callers that cache the first stage reproduce `to_local` bit-for-bit.
class GraspFrame {
 public:
  GraspFrame(const Vec3& center, const UnitVec3& view, double angle);

  const Vec3& center() const { return center_; }
  const Vec3& approach() const { return x_; }
  Vec3 closing() const { return cos_ * y0_ + sin_ * z0_; }
  Vec3 height_axis() const { return cos_ * z0_ - sin_ * y0_; }
  double angle() const { return angle_; }
  double cos_angle() const { return cos_; }
  double sin_angle() const { return sin_; }

  Mat3 rotation() const;
  RigidTransform transform() const { return make_transform(rotation(), center_); }

  /// First stage: coordinates along (approach, y0, z0) before the in-plane turn.
  Vec3 to_view_local(const Vec3& world) const {
    const Vec3 d = world - center_;
    return Vec3(d.dot(x_), d.dot(y0_), d.dot(z0_));
  }
  /// Second stage applied to first-stage coordinates.
  Vec3 rotate_in_plane(const Vec3& v) const {
    return Vec3(v.x(), cos_ * v.y() + sin_ * v.z(), cos_ * v.z() - sin_ * v.y());
  }
  Vec3 to_local(const Vec3& world) const { return rotate_in_plane(to_view_local(world)); }
  Vec3 to_world(const Vec3& local) const {
    return center_ + local.x() * x_ + local.y() * closing() + local.z() * height_axis();
  }

  /// Same frame translated by `offset` along the closing axis.
  GraspFrame shifted_along_closing(double offset) const;

 private:
  Vec3 center_;
  Vec3 x_, y0_, z0_;
  double angle_, cos_, sin_;
};

inline GraspFrame grasp_frame(const Vec3& center, const UnitVec3& view, double angle) {
  return GraspFrame(center, view, angle);
}

/// Box expressed in a grasp frame's local coordinates.
struct LocalBox {
  Vec3 min;
  Vec3 max;
  /// Strict interior test: every coordinate more than `slack` inside.
  bool contains(const Vec3& p, double slack = 1e-9) const {
    return p.x() > min.x() + slack && p.x() < max.x() - slack && p.y() > min.y() + slack &&
           p.y() < max.y() - slack && p.z() > min.z() + slack && p.z() < max.z() - slack;
  }
};

struct OrientedBox {
  Vec3 center;
  Mat3 axes;  // columns are the box axes in world coordinates
  Vec3 half_extents;
  bool contains(const Vec3& p, double slack = 1e-9) const {
    const Vec3 l = axes.transpose() * (p - center);
    return (l.cwiseAbs() - half_extents).maxCoeff() < -slack;
  }
};

/// Two fingers and the palm, plus the open region between the fingers,
/// all expressed in `frame` coordinates.
struct GripperBodies {
  GraspFrame frame;
  std::array<LocalBox, 3> boxes;  // left finger, right finger, palm
  LocalBox closing_region;

  OrientedBox world_box(std::size_t i) const;
  /// Radius of a frame-centred sphere enclosing every body.
  double bounding_radius() const;
};

/// Bodies for a gripper opened to `width` whose finger tips reach `depth`
/// past the frame origin along the approach axis. The jaws are centred on
/// `closing_offset` along the closing axis.
GripperBodies gripper_bodies(const GripperModel& gripper, const GraspFrame& frame, double depth, double width,
                             double closing_offset = 0.0);

/// True when some point lies strictly inside a body and outside the
/// closing region.
bool check_collision(const GripperBodies& bodies, std::span<const Vec3> points,
                     std::span<const std::size_t> candidates);
bool check_collision(const GripperBodies& bodies, const SpatialIndex& scene_index);

/// Points grouped by a cylinder aligned with a grasp frame.
struct CylinderGroup {
  std::vector<std::size_t> indices;  // ascending
  Eigen::MatrixX3d coordinates;      // grasp-frame coordinates divided by the radius
};

/// Points whose approach coordinate lies in [height_min, height_max] and
/// whose distance from the approach axis is <= radius. When more than
/// `max_points` qualify, a seeded uniform subset is kept.
CylinderGroup cylinder_crop(const Vec3& seed, const UnitVec3& view, std::span<const Vec3> points, double radius,
                            std::pair<double, double> height_range, std::size_t max_points,
                            std::uint64_t rng_seed);

}  // namespace graspness
