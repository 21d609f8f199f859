#include "graspness/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graspness/point_sampling.hpp"

namespace graspness {

std::string_view to_string(PointStrategy s) {
  switch (s) {
    case PointStrategy::UniformRandom: return "uniform-random";
    case PointStrategy::Fps: return "fps";
    case PointStrategy::GraspableRandom: return "graspable-random";
    case PointStrategy::GraspableFps: return "graspable-fps";
  }
  return "graspable-fps";
}

std::string_view to_string(ViewStrategy s) {
  switch (s) {
    case ViewStrategy::Normal: return "normal";
    case ViewStrategy::Top1: return "top-1";
    case ViewStrategy::Pvs: return "pvs";
  }
  return "pvs";
}

PointStrategy parse_point_strategy(std::string_view name) {
  if (name == "uniform-random") return PointStrategy::UniformRandom;
  if (name == "fps") return PointStrategy::Fps;
  if (name == "graspable-random") return PointStrategy::GraspableRandom;
  if (name == "graspable-fps") return PointStrategy::GraspableFps;
  throw InvalidArgument("unknown point strategy '" + std::string(name) + "'");
}

ViewStrategy parse_view_strategy(std::string_view name) {
  if (name == "normal") return ViewStrategy::Normal;
  if (name == "top-1") return ViewStrategy::Top1;
  if (name == "pvs") return ViewStrategy::Pvs;
  throw InvalidArgument("unknown view strategy '" + std::string(name) + "'");
}

void SamplingConfig::validate() const {
  if (seeds < 1) throw InvalidArgument("sampling: M must be >= 1");
  if (!(threshold >= 0.0) || !(threshold < 1.0)) throw InvalidArgument("sampling: threshold must lie in [0, 1)");
  if (!(nms_translation > 0.0) || !(nms_rotation > 0.0)) {
    throw InvalidArgument("sampling: NMS thresholds must be positive");
  }
}

namespace {

std::vector<std::size_t> random_subset(std::vector<std::size_t> pool, std::size_t count, std::uint64_t seed) {
  count = std::min(count, pool.size());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

std::vector<std::size_t> fps_subset(const PointCloud& cloud, const std::vector<std::size_t>& pool,
                                    std::size_t count) {
  count = std::min(count, pool.size());
  if (count == 0) return {};
  std::vector<Vec3> pts;
  pts.reserve(pool.size());
  for (std::size_t i : pool) pts.push_back(cloud.positions[i]);
  std::vector<std::size_t> picked = farthest_point_sampling(pts, count, 0);
  for (std::size_t& i : picked) i = pool[i];
  return picked;
}

}  // namespace

SeedSet sample_seeds(const PointCloud& cloud, const SamplingConfig& config, const Eigen::MatrixXd* view_graspness) {
  config.validate();
  if (cloud.empty()) throw InvalidState("sample_seeds: cloud is empty");
  const std::size_t n = cloud.size();
  const auto it = cloud.scalars.find("graspness");
  const bool aware =
      config.point_strategy == PointStrategy::GraspableRandom || config.point_strategy == PointStrategy::GraspableFps;
  if (aware && it == cloud.scalars.end()) {
    throw InvalidArgument("sample_seeds: graspness-aware strategy needs a graspness channel");
  }
  const std::vector<double> zeros;
  const std::vector<double>& g = it != cloud.scalars.end() ? it->second : zeros;
  if (it != cloud.scalars.end() && g.size() != n) throw InvalidArgument("sample_seeds: graspness length mismatch");
  if (view_graspness != nullptr && static_cast<std::size_t>(view_graspness->rows()) != n) {
    throw InvalidArgument("sample_seeds: view graspness row count mismatch");
  }

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  switch (config.point_strategy) {
    case PointStrategy::UniformRandom:
      picked = random_subset(all, config.seeds, config.rng_seed);
      break;
    case PointStrategy::Fps:
      picked = fps_subset(cloud, all, config.seeds);
      break;
    case PointStrategy::GraspableRandom:
    case PointStrategy::GraspableFps: {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < n; ++i) {
        if (g[i] > config.threshold) candidates.push_back(i);
      }
      if (candidates.size() >= config.seeds) {
        picked = config.point_strategy == PointStrategy::GraspableFps
                     ? fps_subset(cloud, candidates, config.seeds)
                     : random_subset(candidates, config.seeds, config.rng_seed);
      } else {
        picked = candidates;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
          if (!(g[i] > config.threshold)) rest.push_back(i);
        }
        std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
        const std::size_t fill = std::min(config.seeds - picked.size(), rest.size());
        picked.insert(picked.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(fill));
      }
      break;
    }
  }

  SeedSet out;
  out.indices = picked;
  out.graspness.reserve(picked.size());
  for (std::size_t i : picked) out.graspness.push_back(g.empty() ? 0.0 : g[i]);
  if (view_graspness != nullptr) {
    out.view_graspness.resize(static_cast<Eigen::Index>(picked.size()), view_graspness->cols());
    for (std::size_t k = 0; k < picked.size(); ++k) {
      out.view_graspness.row(static_cast<Eigen::Index>(k)) = view_graspness->row(static_cast<Eigen::Index>(picked[k]));
    }
  }
  return out;
}

int select_view(std::span<const double> scores, ViewStrategy strategy, const Vec3& normal,
                std::span<const UnitVec3> views, std::mt19937_64& rng) {
  switch (strategy) {
    case ViewStrategy::Pvs: {
      if (scores.empty()) throw InvalidArgument("select_view: no view scores");
      double sum = 0.0;
      for (double s : scores) {
        if (!(s >= 0.0)) throw InvalidArgument("select_view: view scores must be non-negative");
        sum += s;
      }
      if (!(sum > 0.0)) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(scores.size()) - 1);
        return pick(rng);
      }
      std::discrete_distribution<int> pick(scores.begin(), scores.end());
      return pick(rng);
    }
    case ViewStrategy::Top1: {
      if (scores.empty()) throw InvalidArgument("select_view: no view scores");
      return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    }
    case ViewStrategy::Normal: {
      if (views.empty()) throw InvalidArgument("select_view: no views");
      const Vec3 inward = -normal;
      int best = 0;
      double best_dot = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < views.size(); ++j) {
        const double d = views[j].dot(inward);
        if (d > best_dot) {
          best_dot = d;
          best = static_cast<int>(j);
        }
      }
      return best;
    }
  }
  return 0;
}

std::optional<GraspPose> best_grasp_at_seed(const SceneContext& context, const Vec3& seed, int object_id,
                                            const UnitVec3& view, const GraspnessParams& params,
                                            bool check_collisions) {
  if (object_id < 0 || !context.has_object(object_id)) return std::nullopt;
  const CandidateEvaluator evaluator({}, params.grid, params.gripper, params.quality);
  const ObjectSurface surface = context.object_surface(object_id);
  const CollisionScene blockers = context.collision_scene();
  const CandidateGrid grid =
      check_collisions ? evaluator.evaluate_view(seed, view, surface, &blockers, CollisionPolicy::FeasibleOnly)
                       : evaluator.evaluate_view(seed, view, surface, nullptr, CollisionPolicy::Never);
  int best_a = -1, best_d = -1;
  double best = -1.0;
  for (int a = 0; a < grid.angles; ++a) {
    for (int d = 0; d < grid.depths; ++d) {
      const QualityResult& r = grid.at(0, a, d);
      if (r.feasible && r.score > best) {
        best = r.score;
        best_a = a;
        best_d = d;
      }
    }
  }
  if (best_a < 0) return std::nullopt;
  const QualityResult& r = grid.at(0, best_a, best_d);
  GraspPose g;
  g.center = seed;
  g.view = view;
  g.angle = params.grid.angle(best_a);
  g.depth = params.grid.depths[static_cast<std::size_t>(best_d)];
  g.width = r.width;
  g.score = r.score;
  g.closing_offset = r.closing_offset;
  g.mu_star = r.mu_star;
  g.angle_index = best_a;
  g.depth_index = best_d;
  g.object_id = object_id;
  return g;
}

double rotation_distance(const GraspPose& a, const GraspPose& b) {
  const Mat3 rel = a.frame().rotation().transpose() * b.frame().rotation();
  const double c = std::clamp(0.5 * (rel.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

std::vector<GraspPose> grasp_nms(std::span<const GraspPose> grasps, double translation, double rotation) {
  std::vector<GraspPose> kept;
  for (const GraspPose& g : grasps) {
    bool suppressed = false;
    for (const GraspPose& k : kept) {
      if ((k.center - g.center).norm() < translation && rotation_distance(k, g) < rotation) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(g);
  }
  return kept;
}

std::vector<GraspPose> collision_filter(std::span<const GraspPose> grasps, const SpatialIndex& scene_index,
                                        const GripperModel& gripper) {
  std::vector<GraspPose> kept;
  for (const GraspPose& g : grasps) {
    if (!check_collision(g.bodies(gripper), scene_index)) kept.push_back(g);
  }
  return kept;
}

void sort_by_score(std::vector<GraspPose>& grasps) {
  std::stable_sort(grasps.begin(), grasps.end(),
                   [](const GraspPose& a, const GraspPose& b) { return a.score > b.score; });
}

}  // namespace graspness
