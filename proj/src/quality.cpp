#include "graspness/quality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace graspness {

namespace {

double contact_tan(const Vec3& outward_normal, const Vec3& toward_other) {
  const Vec3 inward = -outward_normal;
  const double c = inward.dot(toward_other);
  if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
  return inward.cross(toward_other).norm() / c;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

void QualityConfig::validate() const {
  if (!(mu_min > 0.0) || !(mu_min < mu_max)) throw InvalidArgument("quality: need 0 < mu_min < mu_max");
  if (!(score_threshold >= 0.0) || !(score_threshold < 1.0)) {
    throw InvalidArgument("quality: score threshold must lie in [0, 1)");
  }
  if (!(contact_band > 0.0)) throw InvalidArgument("quality: contact band must be positive");
}

double GridConfig::angle(int a) const { return std::numbers::pi * a / angles; }

void GridConfig::validate() const {
  if (views < 1) throw InvalidArgument("grid: views must be >= 1");
  if (angles < 1) throw InvalidArgument("grid: angles must be >= 1");
  if (depths.empty()) throw InvalidArgument("grid: at least one depth is required");
  for (double d : depths) {
    if (!(d > 0.0)) throw InvalidArgument("grid: depths must be positive");
  }
}

namespace {

// Contacts for several depths at once; identical to evaluating each depth
// on its own since only comparisons and min/max are involved.
void find_contacts_depths(std::span<const LocalPoint> local, std::span<const double> depths,
                          std::span<const Vec3> points, std::span<const Vec3> normals, const GraspFrame& frame,
                          const GripperModel& gripper, double band, ContactPair* out) {
  const std::size_t nd = depths.size();
  constexpr std::size_t kMaxDepths = 16;
  if (nd > kMaxDepths) {
    for (std::size_t d = 0; d < nd; ++d) find_contacts_depths(local, depths.subspan(d, 1), points, normals, frame, gripper, band, out + d);
    return;
  }
  std::array<double, kMaxDepths> base{}, lo{}, hi{}, best_left{}, best_right{};
  std::array<bool, kMaxDepths> any{}, has_left{}, has_right{};
  for (std::size_t d = 0; d < nd; ++d) {
    base[d] = depths[d] - gripper.finger_length;
    best_left[d] = best_right[d] = std::numeric_limits<double>::infinity();
  }
  const double half_h = 0.5 * gripper.finger_height;
  const double half_w = 0.5 * gripper.max_width;
  auto in_slab = [&](const Vec3& l) { return std::abs(l.z()) <= half_h && std::abs(l.y()) <= half_w; };

  for (const LocalPoint& p : local) {
    if (!in_slab(p.local)) continue;
    const double x = p.local.x(), y = p.local.y();
    for (std::size_t d = 0; d < nd; ++d) {
      if (!(x >= base[d] && x <= depths[d])) continue;
      if (!any[d]) {
        lo[d] = hi[d] = y;
        any[d] = true;
      } else {
        lo[d] = std::min(lo[d], y);
        hi[d] = std::max(hi[d], y);
      }
    }
  }
  for (const LocalPoint& p : local) {
    if (!in_slab(p.local)) continue;
    const double x = p.local.x(), y = p.local.y();
    const double z2 = p.local.z() * p.local.z();
    for (std::size_t d = 0; d < nd; ++d) {
      if (!(x >= base[d] && x <= depths[d])) continue;
      // Distance to the jaw's approach line (the approach axis moved to the
      // extreme closing coordinate of that side).
      const double left_d2 = (y - lo[d]) * (y - lo[d]) + z2;
      const double right_d2 = (y - hi[d]) * (y - hi[d]) + z2;
      if (y <= lo[d] + band && left_d2 < best_left[d]) {
        best_left[d] = left_d2;
        out[d].left_index = p.index;
        has_left[d] = true;
      }
      if (y >= hi[d] - band && right_d2 < best_right[d]) {
        best_right[d] = right_d2;
        out[d].right_index = p.index;
        has_right[d] = true;
      }
    }
  }
  for (std::size_t d = 0; d < nd; ++d) {
    ContactPair& pair = out[d];
    pair.closing_axis = frame.closing();
    if (!any[d]) continue;
    pair.closing_min = lo[d];
    pair.closing_max = hi[d];
    pair.width = hi[d] - lo[d];
    pair.left_point = points[pair.left_index];
    pair.right_point = points[pair.right_index];
    pair.left_normal = normals[pair.left_index];
    pair.right_normal = normals[pair.right_index];
    pair.valid = has_left[d] && has_right[d] && pair.width > 0.0 && pair.width <= gripper.max_width;
  }
}

}  // namespace

ContactPair find_contacts_local(std::span<const LocalPoint> local, double depth, std::span<const Vec3> points,
                                std::span<const Vec3> normals, const GraspFrame& frame,
                                const GripperModel& gripper, double band) {
  ContactPair pair;
  find_contacts_depths(local, std::span<const double>(&depth, 1), points, normals, frame, gripper, band, &pair);
  return pair;
}

ContactPair find_contacts(const GraspFrame& frame, double depth, std::span<const Vec3> points,
                          std::span<const Vec3> normals, const GripperModel& gripper, double band) {
  if (normals.size() != points.size()) throw InvalidArgument("find_contacts: every point needs a normal");
  std::vector<LocalPoint> local(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) local[i] = {frame.to_local(points[i]), i};
  return find_contacts_local(local, depth, points, normals, frame, gripper, band);
}

double min_antipodal_friction(const ContactPair& c) {
  if (!c.valid) return std::numeric_limits<double>::infinity();
  Vec3 line = c.right_point - c.left_point;
  const double len = line.norm();
  line = len > 1e-12 ? Vec3(line / len) : c.closing_axis;
  return std::max(contact_tan(c.left_normal, line), contact_tan(c.right_normal, -line));
}

double grasp_score(double mu_star, double mu_min, double mu_max) {
  if (!(mu_min > 0.0) || !(mu_min < mu_max)) throw InvalidArgument("grasp_score: need 0 < mu_min < mu_max");
  if (!(mu_star <= mu_max)) return 0.0;
  const double mu = std::clamp(mu_star, mu_min, mu_max);
  return std::log(mu_max / mu) / std::log(mu_max / mu_min);
}

void place_jaws(const ContactPair& contacts, const GripperModel& gripper, double& width, double& offset) {
  if (contacts.valid) {
    width = std::min(contacts.width + kWidthClearance, gripper.max_width);
    offset = contacts.closing_center();
  } else {
    width = gripper.max_width;
    offset = 0.0;
  }
}

CandidateEvaluator::CandidateEvaluator(std::span<const UnitVec3> views, const GridConfig& grid,
                                       const GripperModel& gripper, const QualityConfig& quality)
    : views_(views), grid_(grid), gripper_(gripper), quality_(quality) {
  grid_.validate();
  gripper_.validate();
  quality_.validate();
  const auto [dmin_it, dmax_it] = std::minmax_element(grid_.depths.begin(), grid_.depths.end());
  const double dmin = *dmin_it, dmax = *dmax_it;
  const double half_h = 0.5 * gripper_.finger_height;
  const double cx = std::max(std::abs(dmin - gripper_.finger_length), std::abs(dmax));
  contact_radius_ = std::sqrt(cx * cx + 0.25 * gripper_.max_width * gripper_.max_width + half_h * half_h) + 1e-6;
  const double bx = std::max(std::abs(dmin - gripper_.finger_length - gripper_.palm_depth), std::abs(dmax));
  const double by = 0.5 * gripper_.max_width + 0.5 * kWidthClearance + gripper_.finger_thickness;
  collision_radius_ = std::sqrt(bx * bx + by * by + half_h * half_h) + 1e-6;
}

CandidateGrid CandidateEvaluator::evaluate(const Vec3& center, const ObjectSurface& object,
                                           const CollisionScene* scene, CollisionPolicy policy) const {
  CandidateGrid out;
  evaluate_views(center, views_, object, scene, policy, out);
  return out;
}

CandidateGrid CandidateEvaluator::evaluate_view(const Vec3& center, const UnitVec3& view, const ObjectSurface& object,
                                                const CollisionScene* scene, CollisionPolicy policy) const {
  CandidateGrid out;
  evaluate_views(center, std::span<const UnitVec3>(&view, 1), object, scene, policy, out);
  return out;
}

void CandidateEvaluator::evaluate_views(const Vec3& center, std::span<const UnitVec3> views,
                                        const ObjectSurface& object, const CollisionScene* scene,
                                        CollisionPolicy policy, CandidateGrid& out) const {
  if (object.normals.size() != object.points.size()) {
    throw InvalidArgument("candidate grid: object points need normals");
  }
  const int n_views = static_cast<int>(views.size());
  const int n_angles = grid_.angles;
  const int n_depths = grid_.depth_count();
  out.views = n_views;
  out.angles = n_angles;
  out.depths = n_depths;
  out.results.assign(static_cast<std::size_t>(n_views * n_angles * n_depths), QualityResult{});

  const bool collide = scene != nullptr && policy != CollisionPolicy::Never;
  const std::vector<std::size_t> object_near = object.index != nullptr
                                                   ? object.index->radius_search(center, contact_radius_)
                                                   : all_indices(object.points.size());
  std::vector<std::size_t> scene_near;
  if (collide) {
    scene_near = scene->index != nullptr ? scene->index->radius_search(center, collision_radius_)
                                         : all_indices(scene->points.size());
  }

  const auto [dmin_it, dmax_it] = std::minmax_element(grid_.depths.begin(), grid_.depths.end());
  const double contact_x_lo = *dmin_it - gripper_.finger_length - 1e-9;
  const double body_x_lo = contact_x_lo - gripper_.palm_depth;
  const double x_hi = *dmax_it + 1e-9;
  const double body_r = collision_radius_;

  std::vector<LocalPoint> object_view, slab, scene_view;
  std::vector<Vec3> scene_local;
  std::vector<ContactPair> contacts(static_cast<std::size_t>(n_depths));
  object_view.reserve(object_near.size());
  slab.reserve(object_near.size());
  scene_view.reserve(scene_near.size());
  scene_local.reserve(scene_near.size());

  for (int j = 0; j < n_views; ++j) {
    const GraspFrame base(center, views[static_cast<std::size_t>(j)], 0.0);
    object_view.clear();
    for (std::size_t idx : object_near) {
      const Vec3 v = base.to_view_local(object.points[idx]);
      if (v.x() >= contact_x_lo && v.x() <= x_hi) object_view.push_back({v, idx});
    }
    bool scene_view_ready = false;

    for (int a = 0; a < n_angles; ++a) {
      const GraspFrame frame(center, views[static_cast<std::size_t>(j)], grid_.angle(a));
      slab.clear();
      for (const LocalPoint& p : object_view) {
        const Vec3 l = frame.rotate_in_plane(p.local);
        if (std::abs(l.z()) <= 0.5 * gripper_.finger_height && std::abs(l.y()) <= 0.5 * gripper_.max_width) {
          slab.push_back({l, p.index});
        }
      }
      bool scene_local_ready = false;
      std::fill(contacts.begin(), contacts.end(), ContactPair{});

      find_contacts_depths(slab, grid_.depths, object.points, object.normals, frame, gripper_, quality_.contact_band,
                           contacts.data());
      for (int d = 0; d < n_depths; ++d) {
        const double depth = grid_.depths[static_cast<std::size_t>(d)];
        QualityResult& r = out.results[static_cast<std::size_t>((j * n_angles + a) * n_depths + d)];
        const ContactPair& pair = contacts[static_cast<std::size_t>(d)];
        r.contacts_valid = pair.valid;
        r.mu_star = min_antipodal_friction(pair);
        r.score = grasp_score(r.mu_star, quality_.mu_min, quality_.mu_max);
        place_jaws(pair, gripper_, r.width, r.closing_offset);
        const bool good = r.score > quality_.score_threshold;

        if (collide && (policy == CollisionPolicy::AllCandidates || good)) {
          if (!scene_view_ready) {
            scene_view.clear();
            for (std::size_t idx : scene_near) {
              const Vec3 v = base.to_view_local(scene->points[idx]);
              if (v.x() > body_x_lo && v.x() < x_hi &&
                  v.y() * v.y() + v.z() * v.z() < body_r * body_r) {
                scene_view.push_back({v, idx});
              }
            }
            scene_view_ready = true;
          }
          if (!scene_local_ready) {
            scene_local.clear();
            for (const LocalPoint& p : scene_view) {
              const Vec3 l = frame.rotate_in_plane(p.local);
              // Every body spans the same height band.
              if (std::abs(l.z()) < 0.5 * gripper_.finger_height) scene_local.push_back(l);
            }
            scene_local_ready = true;
          }
          const GripperBodies bodies = gripper_bodies(gripper_, frame, depth, r.width, r.closing_offset);
          bool hit = false;
          for (const Vec3& l : scene_local) {
            if (bodies.closing_region.contains(l, -1e-9)) continue;
            if (bodies.boxes[0].contains(l) || bodies.boxes[1].contains(l) || bodies.boxes[2].contains(l)) {
              hit = true;
              break;
            }
          }
          r.collision_free = !hit;
        }
        r.feasible = good && r.collision_free;
      }
    }
  }
}

CandidateGrid evaluate_candidate_grid(const Vec3& center, std::span<const UnitVec3> views, const GridConfig& grid,
                                      const ObjectSurface& object, const CollisionScene* scene,
                                      const GripperModel& gripper, const QualityConfig& quality) {
  if (static_cast<int>(views.size()) != grid.views) {
    throw InvalidArgument("evaluate_candidate_grid: view count does not match the grid");
  }
  const CandidateEvaluator evaluator(views, grid, gripper, quality);
  return evaluator.evaluate(center, object, scene, CollisionPolicy::AllCandidates);
}

}  // namespace graspness
