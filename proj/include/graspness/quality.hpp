#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "graspness/core.hpp"
#include "graspness/gripper.hpp"
#include "graspness/spatial_index.hpp"

namespace graspness {

/// Friction-model parameters. A candidate counts as feasible when its score
/// exceeds `score_threshold` (and it is collision-free when a scene is given).
struct QualityConfig {
  double mu_min = 0.1;
  double mu_max = 1.0;
  double score_threshold = 0.0;
  /// Width of the band of closing coordinates treated as touching a jaw;
  /// twice the surface sampling spacing by default.
  double contact_band = 0.01;

  void validate() const;
};

/// Candidate grid: in-plane angles a*pi/angles for a in [0, angles), and
/// the listed approach depths.
struct GridConfig {
  int views = 300;
  int angles = 12;
  std::vector<double> depths{0.01, 0.02, 0.03, 0.04};

  int depth_count() const { return static_cast<int>(depths.size()); }
  int candidates_per_view() const { return angles * depth_count(); }
  double angle(int a) const;
  void validate() const;
};

struct ContactPair {
  Vec3 left_point = Vec3::Zero();
  Vec3 right_point = Vec3::Zero();
  Vec3 left_normal = Vec3::Zero();
  Vec3 right_normal = Vec3::Zero();
  Vec3 closing_axis = Vec3::UnitY();
  double width = 0.0;        // closing_max - closing_min
  double closing_min = 0.0;  // extreme closing coordinates in the grasp frame
  double closing_max = 0.0;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  bool valid = false;

  double closing_center() const { return 0.5 * (closing_min + closing_max); }
};

/// A point expressed in grasp-frame coordinates, tagged with its index in
/// the owning point array.
struct LocalPoint {
  Vec3 local;
  std::size_t index;
};

/// Contacts of a closing parallel jaw against surface samples. Only points
/// with approach coordinate in [depth - finger_length, depth], height within
/// +-finger_height/2 and |closing| <= max_width/2 take part. Each side's
/// contact is, among the points within `band` of that side's extreme closing
/// coordinate, the one nearest that jaw's approach line (height 0, closing
/// coordinate at the extreme).
ContactPair find_contacts(const GraspFrame& frame, double depth, std::span<const Vec3> points,
                          std::span<const Vec3> normals, const GripperModel& gripper, double band);

/// Same as find_contacts for points already in frame coordinates (ascending
/// index order).
ContactPair find_contacts_local(std::span<const LocalPoint> local, double depth, std::span<const Vec3> points,
                                std::span<const Vec3> normals, const GraspFrame& frame,
                                const GripperModel& gripper, double band);

/// Smallest friction coefficient for which the line between the contacts
/// lies in both friction cones: max(tan theta_L, tan theta_R). Infinity when
/// a contact angle reaches 90 degrees or the pair is invalid.
double min_antipodal_friction(const ContactPair& contacts);

/// Log-scaled score: 1 at mu_min, 0 at mu_max, 0 for mu > mu_max.
double grasp_score(double mu_star, double mu_min, double mu_max);

struct QualityResult {
  double mu_star = std::numeric_limits<double>::infinity();
  double score = 0.0;
  bool contacts_valid = false;
  bool collision_free = true;
  bool feasible = false;  // score > threshold and collision_free
  double width = 0.0;           // jaw opening used for the collision bodies
  double closing_offset = 0.0;  // jaw centre along the closing axis
};

struct CandidateGrid {
  int views = 0, angles = 0, depths = 0;
  std::vector<QualityResult> results;  // index ((view * angles) + angle) * depths + depth

  const QualityResult& at(int view, int angle, int depth) const {
    return results[static_cast<std::size_t>((view * angles + angle) * depths + depth)];
  }
};

/// Surface samples of the object being grasped.
struct ObjectSurface {
  std::span<const Vec3> points;
  std::span<const Vec3> normals;
  const SpatialIndex* index = nullptr;  // over `points`; optional
};

/// Every point that can block the gripper (the grasped object included).
struct CollisionScene {
  std::span<const Vec3> points;
  const SpatialIndex* index = nullptr;  // over `points`; optional
};

enum class CollisionPolicy { Never, AllCandidates, FeasibleOnly };

/// Jaw placement for a candidate: centred on the contacts and opened to the
/// contact span plus clearance, or fully open when contacts are invalid.
void place_jaws(const ContactPair& contacts, const GripperModel& gripper, double& width, double& offset);

/// Evaluates the views x angles x depths grid at one point. Bodies are
/// tested against `scene` according to `policy`; with FeasibleOnly,
/// infeasible candidates keep collision_free = true and are not tested.
class CandidateEvaluator {
 public:
  CandidateEvaluator(std::span<const UnitVec3> views, const GridConfig& grid, const GripperModel& gripper,
                     const QualityConfig& quality);

  CandidateGrid evaluate(const Vec3& center, const ObjectSurface& object, const CollisionScene* scene,
                         CollisionPolicy policy) const;

  /// Grid restricted to a single view (angles x depths results).
  CandidateGrid evaluate_view(const Vec3& center, const UnitVec3& view, const ObjectSurface& object,
                              const CollisionScene* scene, CollisionPolicy policy) const;

  double contact_radius() const { return contact_radius_; }
  double collision_radius() const { return collision_radius_; }

 private:
  void evaluate_views(const Vec3& center, std::span<const UnitVec3> views, const ObjectSurface& object,
                      const CollisionScene* scene, CollisionPolicy policy, CandidateGrid& out) const;

  std::span<const UnitVec3> views_;
  GridConfig grid_;
  GripperModel gripper_;
  QualityConfig quality_;
  double contact_radius_;
  double collision_radius_;
};

/// Full V x A x D evaluation at `center`. When `scene` is given every
/// candidate is collision-checked.
CandidateGrid evaluate_candidate_grid(const Vec3& center, std::span<const UnitVec3> views, const GridConfig& grid,
                                      const ObjectSurface& object, const CollisionScene* scene,
                                      const GripperModel& gripper, const QualityConfig& quality);

}  // namespace graspness
