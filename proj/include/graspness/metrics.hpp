#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graspness/engine.hpp"
#include "graspness/sampling.hpp"
#include "graspness/scene.hpp"

namespace graspness {

/// Discrete rank min(floor(value * K), K - 1) of a value in [0, 1].
int graspness_rank(double value, int bins = 20);

/// Mean |rank(pred) - rank(label)| / K. Throws InvalidArgument on empty or
/// mismatched inputs and values outside [0, 1].
double ranking_error(std::span<const double> pred, std::span<const double> label, int bins = 20);

/// Fraction of values strictly above `threshold`.
double graspable_fraction(std::span<const double> values, double threshold);

/// Minimum friction coefficient of a grasp re-measured against the samples
/// of its object (infinity when the object is unknown or contacts fail).
double grasp_mu_star(const GraspPose& grasp, const SceneContext& context, const GraspnessParams& params);

/// For each threshold t: fraction of the first k grasps that are
/// collision-free and have mu* <= t against their object.
std::vector<double> precision_at_k(std::span<const GraspPose> grasps, const SceneContext& context,
                                   const GraspnessParams& params, std::span<const double> mu_thresholds,
                                   std::size_t k);

/// A scene with its ground-truth landscape projected onto one rendered,
/// downsampled view.
struct BenchScene {
  std::unique_ptr<Scene> scene;  // heap-held so `context` stays valid when moved
  std::unique_ptr<SceneContext> context;
  GraspableLandscape landscape;
  ProjectedLandscape partial;
};

BenchScene prepare_bench_scene(Scene scene, const CameraModel& camera, const GraspnessParams& params,
                               const EngineConfig& engine);

struct BenchRow {
  std::string strategy;
  int scene = 0;
  int trial = 0;
  std::size_t seed_count = 0;
  double mean_graspness = 0.0;     // ground-truth S^p averaged over seeds
  double feasible_fraction = 0.0;  // seeds with a collision-free feasible top-1-view grasp
  double coverage = 0.0;           // visible objects that received a seed
  std::vector<double> precision;   // precision@k per mu threshold
};

struct BenchSummary {
  std::string strategy;
  double mean_graspness = 0.0, mean_graspness_std = 0.0;
  double feasible_fraction = 0.0, feasible_fraction_std = 0.0;
  double coverage = 0.0, coverage_std = 0.0;
  std::vector<double> precision;
  double seconds = 0.0;  // wall clock; reported in the summary table only
};

struct BenchOptions {
  std::vector<PointStrategy> strategies{PointStrategy::UniformRandom, PointStrategy::Fps,
                                        PointStrategy::GraspableRandom, PointStrategy::GraspableFps};
  std::size_t seeds = 1024;
  double threshold = 0.1;
  int trials = 5;
  std::uint64_t rng_seed = 0;
  std::vector<double> mu_thresholds{0.2, 0.4, 0.8};
  std::size_t precision_k = 10;
};

struct BenchReport {
  BenchOptions options;
  std::vector<BenchRow> rows;  // strategy-major, then scene, then trial
  std::vector<BenchSummary> summary;

  std::string to_csv() const;
  std::string summary_table() const;
};

/// Seed for task (strategy s, scene i, trial t): root xor the task index.
std::uint64_t task_seed(std::uint64_t root, std::size_t task_index);

BenchReport run_sampling_benchmark(std::span<const BenchScene> scenes, const GraspnessParams& params,
                                   const BenchOptions& options);

}  // namespace graspness
