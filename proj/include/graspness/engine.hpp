#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "graspness/core.hpp"
#include "graspness/gripper.hpp"
#include "graspness/quality.hpp"
#include "graspness/scene.hpp"
#include "graspness/spatial_index.hpp"

namespace graspness {

/// How the A x D candidates of one view are reduced to a view score.
enum class Aggregation { FeasibleRatio, MeanScore, MaxScore };

std::string_view to_string(Aggregation mode);
/// Accepts "feasible-ratio", "mean-score" and "max-score".
Aggregation parse_aggregation(std::string_view name);

struct EngineConfig {
  Aggregation aggregation = Aggregation::FeasibleRatio;
  double cutoff = 0.01;  // association distance for project_to_view
  double voxel = 0.005;  // downsampling of rendered clouds

  void validate() const;
};

struct GraspnessParams {
  GridConfig grid;
  GripperModel gripper;
  QualityConfig quality;
  Aggregation aggregation = Aggregation::FeasibleRatio;

  void validate() const;
};

/// Per-point graspness over a set of model points. Raw values are filled by
/// the landscape builders; normalized values by normalize_landscape.
struct GraspableLandscape {
  Aggregation aggregation = Aggregation::FeasibleRatio;
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<int> object_id;

  Eigen::VectorXd point_raw;  // N
  Eigen::MatrixXd view_raw;   // N x V
  Eigen::VectorXd point;      // empty until normalized
  Eigen::MatrixXd view;

  std::size_t size() const { return positions.size(); }
  int views() const { return static_cast<int>(view_raw.cols()); }
  bool is_normalized() const { return point.size() == point_raw.size() && point.size() > 0; }
};

/// Reduces one point's candidate grid. `view_row` receives V values.
/// FeasibleRatio counts feasible candidates; MeanScore and MaxScore use the
/// score of feasible candidates and zero elsewhere.
void aggregate_candidates(const CandidateGrid& grid, Aggregation mode, double& point_value,
                          Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> view_row);

/// Object-level landscape of a single object's surface samples.
GraspableLandscape object_graspness(std::span<const Vec3> points, std::span<const Vec3> normals,
                                    const GraspnessParams& params);

/// Read-only acceleration data shared by scene-level queries.
class SceneContext {
 public:
  explicit SceneContext(const Scene& scene);

  const Scene& scene() const { return *scene_; }
  const SpatialIndex& index() const { return all_; }
  CollisionScene collision_scene() const { return {scene_->full_cloud.positions, &all_}; }
  bool has_object(int id) const { return slot_.count(id) != 0; }
  /// Surface samples of instance `id`; throws InvalidArgument if unknown.
  ObjectSurface object_surface(int id) const;
  /// Offset of instance `id`'s samples in the full cloud.
  std::size_t object_offset(int id) const;

 private:
  std::size_t slot(int id) const;

  const Scene* scene_;
  SpatialIndex all_;
  std::vector<SpatialIndex> per_object_;
  std::map<int, std::size_t> slot_;
};

/// Landscape over every object sample of the scene (world frame, full-cloud
/// order). Contacts use the owning object's samples only. With
/// `collisions`, a candidate also needs its gripper bodies to be free of
/// every scene sample; without, this is the object-level landscape of each
/// instance in place.
GraspableLandscape scene_graspness(const SceneContext& context, const GraspnessParams& params,
                                   bool collisions = true);
GraspableLandscape scene_graspness(const Scene& scene, const GraspnessParams& params, bool collisions = true);

/// Min-max rescaling; a constant (or empty) input maps to zeros.
Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& values);

/// Fills `point` (over all points) and `view` (per view column).
void normalize_landscape(GraspableLandscape& landscape);

/// Copies normalized graspness onto a partial cloud. Object points take the
/// values of the nearest landscape point with the same id when it lies
/// within `cutoff`; everything else gets zero. The cloud gains a
/// "graspness" scalar channel.
struct ProjectedLandscape {
  PointCloud cloud;
  Eigen::MatrixXd view;  // |cloud| x V
};

ProjectedLandscape project_to_view(const GraspableLandscape& landscape, const PointCloud& partial, double cutoff);

}  // namespace graspness
