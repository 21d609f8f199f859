#include "graspness/gripper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace graspness {

void GripperModel::validate() const {
  if (!(max_width > 0.0) || !(finger_length > 0.0) || !(finger_thickness > 0.0) || !(finger_height > 0.0) ||
      !(palm_depth > 0.0)) {
    throw InvalidArgument("gripper dimensions must be positive");
  }
  if (!(max_width > 2.0 * finger_thickness)) {
    throw InvalidArgument("gripper max_width must exceed twice the finger thickness");
  }
}

GraspFrame::GraspFrame(const Vec3& center, const UnitVec3& view, double angle)
    : center_(center), x_(view.vec()), angle_(angle), cos_(std::cos(angle)), sin_(std::sin(angle)) {
  const double vx = x_.x(), vy = x_.y(), vz = x_.z();
  Vec3 y0;
  if (1.0 + vz < 1e-9) {
    y0 = Vec3(0.0, -1.0, 0.0);  // half turn about +x
  } else {
    // Minimal rotation taking +z onto the view, applied to +y.
    const double k = 1.0 / (1.0 + vz);
    y0 = Vec3(-vx * vy * k, 1.0 - vy * vy * k, -vy);
  }
  y0 -= y0.dot(x_) * x_;
  y0_ = y0.normalized();
  z0_ = x_.cross(y0_);
}

Mat3 GraspFrame::rotation() const {
  Mat3 r;
  r.col(0) = x_;
  r.col(1) = closing();
  r.col(2) = height_axis();
  return r;
}

GraspFrame GraspFrame::shifted_along_closing(double offset) const {
  GraspFrame f = *this;
  f.center_ = center_ + offset * closing();
  return f;
}

OrientedBox GripperBodies::world_box(std::size_t i) const {
  const LocalBox& b = boxes.at(i);
  const Vec3 local_center = 0.5 * (b.min + b.max);
  return {frame.to_world(local_center), frame.rotation(), 0.5 * (b.max - b.min)};
}

double GripperBodies::bounding_radius() const {
  double r2 = 0.0;
  for (const LocalBox& b : boxes) {
    const Vec3 far = b.min.cwiseAbs().cwiseMax(b.max.cwiseAbs());
    r2 = std::max(r2, far.squaredNorm());
  }
  return std::sqrt(r2);
}

GripperBodies gripper_bodies(const GripperModel& g, const GraspFrame& frame, double depth, double width,
                             double closing_offset) {
  if (width > g.max_width + 1e-12) throw InvalidArgument("gripper_bodies: width exceeds max_width");
  const double half_h = 0.5 * g.finger_height;
  const double tip = depth;
  const double base = depth - g.finger_length;
  const double inner = 0.5 * width;
  const double outer = inner + g.finger_thickness;
  const double m = closing_offset;
  GripperBodies b{frame, {}, {}};
  b.boxes[0] = {Vec3(base, m - outer, -half_h), Vec3(tip, m - inner, half_h)};
  b.boxes[1] = {Vec3(base, m + inner, -half_h), Vec3(tip, m + outer, half_h)};
  b.boxes[2] = {Vec3(base - g.palm_depth, m - outer, -half_h), Vec3(base, m + outer, half_h)};
  b.closing_region = {Vec3(base, m - inner, -half_h), Vec3(tip, m + inner, half_h)};
  return b;
}

bool check_collision(const GripperBodies& bodies, std::span<const Vec3> points,
                     std::span<const std::size_t> candidates) {
  for (std::size_t idx : candidates) {
    const Vec3 local = bodies.frame.to_local(points[idx]);
    if (bodies.closing_region.contains(local, -1e-9)) continue;
    for (const LocalBox& box : bodies.boxes) {
      if (box.contains(local)) return true;
    }
  }
  return false;
}

bool check_collision(const GripperBodies& bodies, const SpatialIndex& scene_index) {
  if (scene_index.empty()) return false;
  const auto near = scene_index.radius_search(bodies.frame.center(), bodies.bounding_radius() + 1e-6);
  return check_collision(bodies, scene_index.points(), near);
}

CylinderGroup cylinder_crop(const Vec3& seed, const UnitVec3& view, std::span<const Vec3> points, double radius,
                            std::pair<double, double> height_range, std::size_t max_points,
                            std::uint64_t rng_seed) {
  if (!(radius > 0.0)) throw InvalidArgument("cylinder_crop: radius must be positive");
  if (!(height_range.first < height_range.second)) throw InvalidArgument("cylinder_crop: empty height range");
  const GraspFrame frame(seed, view, 0.0);
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 l = frame.to_local(points[i]);
    if (l.x() < height_range.first || l.x() > height_range.second) continue;
    if (l.y() * l.y() + l.z() * l.z() > radius * radius) continue;
    inside.push_back(i);
  }
  if (inside.size() > max_points) {
    std::mt19937_64 rng(rng_seed);
    // Partial Fisher-Yates: the first max_points entries become the sample.
    for (std::size_t i = 0; i < max_points; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, inside.size() - 1);
      std::swap(inside[i], inside[pick(rng)]);
    }
    inside.resize(max_points);
    std::sort(inside.begin(), inside.end());
  }
  CylinderGroup group;
  group.indices = inside;
  group.coordinates.resize(static_cast<Eigen::Index>(inside.size()), 3);
  for (std::size_t k = 0; k < inside.size(); ++k) {
    group.coordinates.row(static_cast<Eigen::Index>(k)) = frame.to_local(points[inside[k]]).transpose() / radius;
  }
  return group;
}

}  // namespace graspness
