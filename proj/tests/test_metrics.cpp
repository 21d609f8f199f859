#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "graspness/metrics.hpp"
#include "graspness/point_sampling.hpp"

using namespace graspness;

namespace {

Scene floating_sphere() {
  Table none;
  none.enabled = false;
  return assemble_scene({{Sphere{0.03}, make_transform(Mat3::Identity(), Vec3(0, 0, 0.1)), 0}}, none, 0.004, 0);
}

// Grasps through the sphere centre from `good` seeds plus `bad` grasps whose
// jaws close on empty space.
std::vector<GraspPose> sphere_batch(const SceneContext& ctx, const GraspnessParams& params, int good, int bad) {
  const auto& pts = ctx.scene().full_cloud.positions;
  std::vector<GraspPose> out;
  for (std::size_t i = 0; static_cast<int>(out.size()) < good; i += 17) {
    const UnitVec3 view = UnitVec3::normalized(Vec3(0, 0, 0.1) - pts[i]);
    if (auto g = best_grasp_at_seed(ctx, pts[i], 0, view, params)) out.push_back(*g);
  }
  for (int k = 0; k < bad; ++k) {
    GraspPose g = out.front();
    g.center = Vec3(0.5 + 0.1 * k, 0.5, 0.5);
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST(Rank, Binning) {
  EXPECT_EQ(graspness_rank(0.0), 0);
  EXPECT_EQ(graspness_rank(0.14), 2);
  EXPECT_EQ(graspness_rank(0.26), 5);
  EXPECT_EQ(graspness_rank(1.0), 19);
  EXPECT_EQ(graspness_rank(0.999), 19);
  EXPECT_THROW(graspness_rank(1.5), InvalidArgument);
  EXPECT_THROW(graspness_rank(-0.1), InvalidArgument);
}

TEST(RankingError, Examples) {
  const std::vector<double> a{0.1, 0.5, 0.9};
  EXPECT_EQ(ranking_error(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ranking_error(std::vector<double>{0.14}, std::vector<double>{0.26}), 0.15);
  EXPECT_THROW(ranking_error(a, std::vector<double>{0.1}), InvalidArgument);
  EXPECT_THROW(ranking_error(std::vector<double>{}, std::vector<double>{}), InvalidArgument);
}

TEST(RankingError, BoundsAndSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> p(1 + t % 50), l(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      l[i] = u(rng);
    }
    const double e = ranking_error(p, l);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 19.0 / 20.0);
    EXPECT_EQ(e, ranking_error(l, p));
  }
  EXPECT_EQ(ranking_error(std::vector<double>{0.0}, std::vector<double>{1.0}), 19.0 / 20.0);
}

TEST(GraspableFraction, Examples) {
  EXPECT_EQ(graspable_fraction(std::vector<double>(10, 0.0), 0.3), 0.0);
  EXPECT_EQ(graspable_fraction(std::vector<double>{0.5, 0.2, 0.35, 0.05}, 0.3), 0.5);
  EXPECT_THROW(graspable_fraction(std::vector<double>{}, 0.3), InvalidArgument);
}

TEST(PrecisionAtK, AllNoneAndMixed) {
  const Scene scene = floating_sphere();
  const SceneContext ctx(scene);
  const GraspnessParams params;
  const std::vector<double> t{0.8};

  const auto all_good = sphere_batch(ctx, params, 10, 0);
  EXPECT_EQ(precision_at_k(all_good, ctx, params, t, 10)[0], 1.0);

  auto none = sphere_batch(ctx, params, 1, 10);
  none.erase(none.begin());
  EXPECT_EQ(precision_at_k(none, ctx, params, t, 10)[0], 0.0);

  const auto mixed = sphere_batch(ctx, params, 7, 3);
  ASSERT_EQ(mixed.size(), 10u);
  const naive::Params np = fixtures::to_naive(params);
  const auto& pts = scene.full_cloud.positions;
  const auto& nrm = scene.full_cloud.normals;
  int oracle_good = 0;
  for (const GraspPose& g : mixed) {
    const GraspFrame f = g.frame();
    const naive::Contacts c = naive::contacts(f, g.depth, pts, params.gripper, np.band);
    const double mu = naive::mu_star(c, pts, nrm, f.closing());
    const bool free = !naive::collides(f, g.depth, c, pts, params.gripper);
    oracle_good += (free && mu <= 0.8) ? 1 : 0;
  }
  EXPECT_EQ(oracle_good, 7);
  EXPECT_DOUBLE_EQ(precision_at_k(mixed, ctx, params, t, 10)[0], 0.7);
  EXPECT_THROW(precision_at_k(std::vector<GraspPose>{}, ctx, params, t, 1), InvalidArgument);
  EXPECT_THROW(precision_at_k(mixed, ctx, params, t, 11), InvalidArgument);
}

TEST(PrecisionAtK, MonotoneInThreshold) {
  const Scene scene = fixtures::toy_scene(2);
  const SceneContext ctx(scene);
  const GraspnessParams params;
  const auto views = fibonacci_views(params.grid.views);
  std::vector<GraspPose> grasps;
  for (std::size_t i = 0; i < scene.object_point_count(); i += 3) {
    for (std::size_t j = 0; j < views.size(); j += 29) {
      if (auto g = best_grasp_at_seed(ctx, scene.full_cloud.positions[i], scene.full_cloud.object_id[i], views[j],
                                      params, false)) {
        grasps.push_back(*g);
      }
    }
  }
  ASSERT_GE(grasps.size(), 10u);
  sort_by_score(grasps);
  const std::vector<double> t{0.05, 0.1, 0.2, 0.4, 0.8, 1.0};
  const auto p = precision_at_k(grasps, ctx, params, t, 10);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i - 1], p[i]);
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Benchmark, RowsDeterminismAndBounds) {
  GraspnessParams params = fixtures::toy_params();
  std::vector<BenchScene> scenes;
  for (std::uint64_t s : {1u, 2u}) {
    scenes.push_back(prepare_bench_scene(fixtures::toy_scene(s), CameraModel::tabletop_default(), params, EngineConfig{}));
  }
  BenchOptions opt;
  opt.seeds = 32;
  opt.trials = 2;
  const BenchReport a = run_sampling_benchmark(scenes, params, opt);
  EXPECT_EQ(a.rows.size(), 4u * 2u * 2u);
  EXPECT_EQ(a.summary.size(), 4u);
  for (const BenchRow& r : a.rows) {
    EXPECT_GE(r.feasible_fraction, 0.0);
    EXPECT_LE(r.feasible_fraction, 1.0);
    EXPECT_GE(r.coverage, 0.0);
    EXPECT_LE(r.coverage, 1.0);
    EXPECT_GE(r.mean_graspness, 0.0);
    EXPECT_LE(r.mean_graspness, 1.0);
    for (double p : r.precision) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  const BenchReport b = run_sampling_benchmark(scenes, params, opt);
  EXPECT_EQ(a.to_csv(), b.to_csv());

  opt.strategies = {PointStrategy::Fps};
  opt.trials = 1;
  EXPECT_EQ(run_sampling_benchmark(std::span(scenes).first(1), params, opt).rows.size(), 1u);
  EXPECT_THROW(run_sampling_benchmark({}, params, opt), InvalidArgument);
  EXPECT_EQ(task_seed(5, 3), 6u);
}
