#include "graspness/engine.hpp"

#include <algorithm>
#include <string>

#include "graspness/point_sampling.hpp"

namespace graspness {

std::string_view to_string(Aggregation mode) {
  switch (mode) {
    case Aggregation::FeasibleRatio: return "feasible-ratio";
    case Aggregation::MeanScore: return "mean-score";
    case Aggregation::MaxScore: return "max-score";
  }
  return "feasible-ratio";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "feasible-ratio") return Aggregation::FeasibleRatio;
  if (name == "mean-score") return Aggregation::MeanScore;
  if (name == "max-score") return Aggregation::MaxScore;
  throw InvalidArgument("unknown aggregation mode '" + std::string(name) + "'");
}

void EngineConfig::validate() const {
  if (!(cutoff > 0.0)) throw InvalidArgument("engine: cutoff must be positive");
  if (!(voxel > 0.0)) throw InvalidArgument("engine: voxel size must be positive");
}

void GraspnessParams::validate() const {
  grid.validate();
  gripper.validate();
  quality.validate();
}

void aggregate_candidates(const CandidateGrid& grid, Aggregation mode, double& point_value,
                          Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> view_row) {
  const int per_view = grid.angles * grid.depths;
  double total = 0.0;
  double max_sum = 0.0;
  for (int j = 0; j < grid.views; ++j) {
    double view_sum = 0.0;
    double view_max = 0.0;
    for (int a = 0; a < grid.angles; ++a) {
      for (int d = 0; d < grid.depths; ++d) {
        const QualityResult& r = grid.at(j, a, d);
        const double v = mode == Aggregation::FeasibleRatio ? (r.feasible ? 1.0 : 0.0) : (r.feasible ? r.score : 0.0);
        view_sum += v;
        total += v;
        view_max = std::max(view_max, v);
      }
    }
    const double view_value = mode == Aggregation::MaxScore ? view_max : view_sum / per_view;
    view_row(j) = view_value;
    max_sum += view_max;
  }
  if (mode == Aggregation::MaxScore) {
    point_value = max_sum / grid.views;
  } else {
    point_value = total / (static_cast<double>(grid.views) * per_view);
  }
}

namespace {

GraspableLandscape empty_landscape(std::size_t n, const GraspnessParams& params) {
  GraspableLandscape out;
  out.aggregation = params.aggregation;
  out.point_raw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  out.view_raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), params.grid.views);
  return out;
}

}  // namespace

GraspableLandscape object_graspness(std::span<const Vec3> points, std::span<const Vec3> normals,
                                    const GraspnessParams& params) {
  params.validate();
  if (normals.size() != points.size()) throw InvalidArgument("object_graspness: every point needs a normal");
  const std::size_t n = points.size();
  GraspableLandscape out = empty_landscape(n, params);
  out.positions.assign(points.begin(), points.end());
  out.normals.assign(normals.begin(), normals.end());
  out.object_id.assign(n, 0);
  if (n == 0) return out;

  const std::vector<UnitVec3> views = fibonacci_views(params.grid.views);
  const CandidateEvaluator evaluator(views, params.grid, params.gripper, params.quality);
  const SpatialIndex index(points);
  const ObjectSurface surface{points, normals, &index};

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const CandidateGrid grid = evaluator.evaluate(points[static_cast<std::size_t>(i)], surface, nullptr,
                                                  CollisionPolicy::Never);
    aggregate_candidates(grid, params.aggregation, out.point_raw(i), out.view_raw.row(i));
  }
  return out;
}

SceneContext::SceneContext(const Scene& scene) : scene_(&scene), all_(scene.full_cloud.positions) {
  if (scene.object_ranges.size() != scene.instances.size() + 1) {
    throw InvalidArgument("scene context: scene has not been assembled");
  }
  if (scene.full_cloud.normals.size() != scene.full_cloud.size()) {
    throw InvalidArgument("scene context: scene cloud has no normals");
  }
  per_object_.reserve(scene.instances.size());
  for (std::size_t k = 0; k < scene.instances.size(); ++k) {
    const std::span<const Vec3> all(scene.full_cloud.positions);
    per_object_.emplace_back(all.subspan(scene.object_ranges[k], scene.object_ranges[k + 1] - scene.object_ranges[k]));
    slot_[scene.instances[k].id] = k;
  }
}

std::size_t SceneContext::slot(int id) const {
  const auto it = slot_.find(id);
  if (it == slot_.end()) throw InvalidArgument("scene has no object with id " + std::to_string(id));
  return it->second;
}

ObjectSurface SceneContext::object_surface(int id) const {
  const std::size_t k = slot(id);
  const std::size_t begin = scene_->object_ranges[k];
  const std::size_t count = scene_->object_ranges[k + 1] - begin;
  const std::span<const Vec3> pos(scene_->full_cloud.positions);
  const std::span<const Vec3> nrm(scene_->full_cloud.normals);
  return {pos.subspan(begin, count), nrm.subspan(begin, count), &per_object_[k]};
}

std::size_t SceneContext::object_offset(int id) const { return scene_->object_ranges[slot(id)]; }

GraspableLandscape scene_graspness(const SceneContext& context, const GraspnessParams& params, bool collisions) {
  params.validate();
  const Scene& scene = context.scene();
  const std::size_t n = scene.object_point_count();
  GraspableLandscape out = empty_landscape(n, params);
  const PointCloud& cloud = scene.full_cloud;
  out.positions.assign(cloud.positions.begin(), cloud.positions.begin() + static_cast<std::ptrdiff_t>(n));
  out.normals.assign(cloud.normals.begin(), cloud.normals.begin() + static_cast<std::ptrdiff_t>(n));
  out.object_id.assign(cloud.object_id.begin(), cloud.object_id.begin() + static_cast<std::ptrdiff_t>(n));
  if (n == 0) return out;

  const std::vector<UnitVec3> views = fibonacci_views(params.grid.views);
  const CandidateEvaluator evaluator(views, params.grid, params.gripper, params.quality);
  const CollisionScene blockers = context.collision_scene();
  std::vector<ObjectSurface> surfaces;
  for (const auto& inst : scene.instances) surfaces.push_back(context.object_surface(inst.id));

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const auto k = static_cast<std::size_t>(
        std::upper_bound(scene.object_ranges.begin(), scene.object_ranges.end(), idx) - scene.object_ranges.begin() - 1);
    const CandidateGrid grid =
        collisions ? evaluator.evaluate(cloud.positions[idx], surfaces[k], &blockers, CollisionPolicy::FeasibleOnly)
                   : evaluator.evaluate(cloud.positions[idx], surfaces[k], nullptr, CollisionPolicy::Never);
    aggregate_candidates(grid, params.aggregation, out.point_raw(i), out.view_raw.row(i));
  }
  return out;
}

GraspableLandscape scene_graspness(const Scene& scene, const GraspnessParams& params, bool collisions) {
  const SceneContext context(scene);
  return scene_graspness(context, params, collisions);
}

Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& values) {
  if (values.size() == 0) return values;
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!(hi > lo)) return Eigen::VectorXd::Zero(values.size());
  return ((values.array() - lo) / (hi - lo)).matrix();
}

void normalize_landscape(GraspableLandscape& landscape) {
  landscape.point = min_max_normalize(landscape.point_raw);
  landscape.view.resize(landscape.view_raw.rows(), landscape.view_raw.cols());
  for (Eigen::Index j = 0; j < landscape.view_raw.cols(); ++j) {
    landscape.view.col(j) = min_max_normalize(landscape.view_raw.col(j));
  }
}

ProjectedLandscape project_to_view(const GraspableLandscape& landscape, const PointCloud& partial, double cutoff) {
  if (!(cutoff > 0.0)) throw InvalidArgument("project_to_view: cutoff must be positive");
  if (landscape.size() > 0 && !landscape.is_normalized()) {
    throw InvalidState("project_to_view: landscape has not been normalized");
  }
  partial.validate();
  if (!partial.empty() && !partial.has_object_id()) {
    throw InvalidArgument("project_to_view: partial cloud has no object_id channel");
  }

  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < landscape.size(); ++i) members[landscape.object_id[i]].push_back(i);
  std::map<int, SpatialIndex> trees;
  for (const auto& [id, idx] : members) {
    std::vector<Vec3> pts;
    pts.reserve(idx.size());
    for (std::size_t i : idx) pts.push_back(landscape.positions[i]);
    trees.emplace(id, SpatialIndex(pts));
  }
  for (std::size_t i = 0; i < partial.size(); ++i) {
    const int id = partial.object_id[i];
    if (id >= 0 && trees.count(id) == 0) {
      throw InvalidArgument("project_to_view: object id " + std::to_string(id) + " is not in the landscape");
    }
  }

  ProjectedLandscape out;
  out.cloud = partial;
  const Eigen::Index v = landscape.view_raw.cols();
  out.view = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(partial.size()), v);
  std::vector<double> g(partial.size(), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(partial.size()); ++i) {
    const std::size_t pi = static_cast<std::size_t>(i);
    const int id = partial.object_id[pi];
    if (id < 0) continue;
    const Neighbor nn = trees.at(id).nearest(partial.positions[pi]);
    if (nn.distance > cutoff) continue;
    const std::size_t src = members.at(id)[nn.index];
    g[pi] = landscape.point(static_cast<Eigen::Index>(src));
    out.view.row(i) = landscape.view.row(static_cast<Eigen::Index>(src));
  }
  out.cloud.scalars["graspness"] = std::move(g);
  return out;
}

}  // namespace graspness
