#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "graspness/core.hpp"
#include "graspness/engine.hpp"
#include "graspness/gripper.hpp"
#include "graspness/quality.hpp"

namespace graspness {

enum class PointStrategy { UniformRandom, Fps, GraspableRandom, GraspableFps };
enum class ViewStrategy { Normal, Top1, Pvs };

std::string_view to_string(PointStrategy s);
std::string_view to_string(ViewStrategy s);
/// "uniform-random", "fps", "graspable-random", "graspable-fps".
PointStrategy parse_point_strategy(std::string_view name);
/// "normal", "top-1", "pvs".
ViewStrategy parse_view_strategy(std::string_view name);

struct SamplingConfig {
  PointStrategy point_strategy = PointStrategy::GraspableFps;
  ViewStrategy view_strategy = ViewStrategy::Pvs;
  std::size_t seeds = 1024;  // M
  double threshold = 0.1;    // graspness filter
  std::uint64_t rng_seed = 0;
  double nms_translation = 0.03;
  double nms_rotation = std::numbers::pi / 6.0;

  void validate() const;
};

struct SeedSet {
  std::vector<std::size_t> indices;
  std::vector<double> graspness;
  Eigen::MatrixXd view_graspness;  // |indices| x V, empty when none was given
};

/// Seeds from a partial cloud. Graspness-aware strategies read the
/// "graspness" scalar channel and keep points above the threshold; when
/// fewer than M qualify the rest are filled by descending graspness (lowest
/// index first on ties). FPS starts from the first candidate. Throws
/// InvalidState on an empty cloud.
SeedSet sample_seeds(const PointCloud& cloud, const SamplingConfig& config,
                     const Eigen::MatrixXd* view_graspness = nullptr);

/// Picks a view for one seed. pvs draws with probability proportional to
/// the view scores (uniform when they are all zero); top-1 takes the
/// highest score; normal takes the view closest to the inward normal.
int select_view(std::span<const double> view_scores, ViewStrategy strategy, const Vec3& normal,
                std::span<const UnitVec3> views, std::mt19937_64& rng);

struct GraspPose {
  Vec3 center = Vec3::Zero();  // grasp point the frame is built on
  UnitVec3 view;
  double angle = 0.0;
  double depth = 0.0;
  double width = 0.0;
  double score = 0.0;
  double closing_offset = 0.0;  // jaw centre along the closing axis
  double mu_star = 0.0;
  int angle_index = 0;
  int depth_index = 0;
  int object_id = -1;

  GraspFrame frame() const { return GraspFrame(center, view, angle); }
  Vec3 jaw_center() const { return center + closing_offset * frame().closing(); }
  GripperBodies bodies(const GripperModel& gripper) const {
    return gripper_bodies(gripper, frame(), depth, width, closing_offset);
  }
};

/// Highest-scoring feasible (angle, depth) cell at one seed and view,
/// lowest (angle, depth) index on ties. Contacts use the samples of object
/// `object_id`; with `check_collisions` the bodies must also avoid every
/// scene sample. Returns nothing for background seeds or when no cell is
/// feasible.
std::optional<GraspPose> best_grasp_at_seed(const SceneContext& context, const Vec3& seed, int object_id,
                                            const UnitVec3& view, const GraspnessParams& params,
                                            bool check_collisions = true);

/// Angle of the relative rotation between two grasp frames.
double rotation_distance(const GraspPose& a, const GraspPose& b);

/// Greedy suppression over grasps sorted by descending score: a grasp is
/// dropped when a kept one is both closer than `translation` and rotated by
/// less than `rotation`.
std::vector<GraspPose> grasp_nms(std::span<const GraspPose> grasps, double translation = 0.03,
                                 double rotation = std::numbers::pi / 6.0);

/// Grasps whose bodies contain no scene sample.
std::vector<GraspPose> collision_filter(std::span<const GraspPose> grasps, const SpatialIndex& scene_index,
                                        const GripperModel& gripper);

/// Sorts by descending score, keeping the input order among equal scores.
void sort_by_score(std::vector<GraspPose>& grasps);

}  // namespace graspness
