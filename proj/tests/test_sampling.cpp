#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "graspness/point_sampling.hpp"
#include "graspness/sampling.hpp"

using namespace graspness;

namespace {

PointCloud graspness_cloud(const std::vector<double>& g) {
  PointCloud c;
  for (std::size_t i = 0; i < g.size(); ++i) c.positions.emplace_back(static_cast<double>(i), 0, 0);
  c.scalars["graspness"] = g;
  return c;
}

double min_pairwise(const PointCloud& c, const std::vector<std::size_t>& idx) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      best = std::min(best, (c.positions[idx[a]] - c.positions[idx[b]]).norm());
    }
  }
  return best;
}

double chi_square_p(const std::vector<long>& counts, const std::vector<double>& probs, long draws) {
  double stat = 0.0;
  int dof = -1;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    const double e = probs[j] * static_cast<double>(draws);
    stat += (counts[j] - e) * (counts[j] - e) / e;
    ++dof;
  }
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

GraspPose pose(const Vec3& c, const Vec3& view, double angle, double score) {
  GraspPose g;
  g.center = c;
  g.view = UnitVec3::normalized(view);
  g.angle = angle;
  g.score = score;
  g.depth = 0.02;
  g.width = 0.05;
  return g;
}

}  // namespace

TEST(SampleSeeds, FilterAndTopUp) {
  const PointCloud c = graspness_cloud({0.05, 0.5, 0.2, 0.08});
  SamplingConfig cfg;
  cfg.point_strategy = PointStrategy::GraspableFps;
  cfg.seeds = 2;
  auto s = sample_seeds(c, cfg);
  EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()), (std::set<std::size_t>{1, 2}));
  cfg.seeds = 3;
  s = sample_seeds(c, cfg);
  EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()), (std::set<std::size_t>{1, 2, 3}));
  cfg.seeds = 10;
  s = sample_seeds(c, cfg);
  EXPECT_EQ(s.indices, (std::vector<std::size_t>{1, 2, 3, 0}));
  cfg.point_strategy = PointStrategy::GraspableRandom;
  cfg.seeds = 2;
  s = sample_seeds(c, cfg);
  EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()), (std::set<std::size_t>{1, 2}));
}

TEST(SampleSeeds, ErrorsAndBaselines) {
  SamplingConfig cfg;
  EXPECT_THROW(sample_seeds(PointCloud{}, cfg), InvalidState);
  PointCloud plain;
  plain.positions = {Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()};
  EXPECT_THROW(sample_seeds(plain, cfg), InvalidArgument);
  cfg.point_strategy = PointStrategy::Fps;
  cfg.seeds = 2;
  EXPECT_EQ(sample_seeds(plain, cfg).indices.size(), 2u);
  cfg.point_strategy = PointStrategy::UniformRandom;
  cfg.seeds = 5;
  EXPECT_EQ(sample_seeds(plain, cfg).indices.size(), 3u);
  cfg.seeds = 0;
  EXPECT_THROW(sample_seeds(plain, cfg), InvalidArgument);
  cfg.seeds = 1;
  cfg.threshold = 1.0;
  EXPECT_THROW(sample_seeds(plain, cfg), InvalidArgument);
}

TEST(SampleSeeds, PropertiesOnRandomClouds) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    PointCloud c;
    std::vector<double> g;
    for (int i = 0; i < 2000; ++i) {
      c.positions.emplace_back(u(rng), u(rng), u(rng));
      g.push_back(u(rng) < 0.3 ? u(rng) : 0.0);
    }
    c.scalars["graspness"] = g;
    for (auto strategy : {PointStrategy::UniformRandom, PointStrategy::Fps, PointStrategy::GraspableRandom,
                          PointStrategy::GraspableFps}) {
      SamplingConfig cfg;
      cfg.point_strategy = strategy;
      cfg.seeds = 256;
      cfg.rng_seed = static_cast<std::uint64_t>(t);
      const SeedSet s = sample_seeds(c, cfg);
      EXPECT_LE(s.indices.size(), 256u);
      EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()).size(), s.indices.size());
      if (strategy == PointStrategy::GraspableFps || strategy == PointStrategy::GraspableRandom) {
        for (std::size_t i : s.indices) EXPECT_GT(g[i], 0.1);
      }
      const SeedSet again = sample_seeds(c, cfg);
      EXPECT_EQ(again.indices, s.indices);
    }
  }
}

TEST(SampleSeeds, GraspableFpsSpreadsMoreThanGraspableRandom) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  std::vector<double> g;
  for (int i = 0; i < 3000; ++i) {
    c.positions.emplace_back(u(rng), u(rng), u(rng));
    g.push_back(u(rng));
  }
  c.scalars["graspness"] = g;
  std::vector<double> fps, rnd;
  for (int t = 0; t < 20; ++t) {
    SamplingConfig cfg;
    cfg.seeds = 64;
    cfg.rng_seed = static_cast<std::uint64_t>(t);
    cfg.point_strategy = PointStrategy::GraspableFps;
    fps.push_back(min_pairwise(c, sample_seeds(c, cfg).indices));
    cfg.point_strategy = PointStrategy::GraspableRandom;
    rnd.push_back(min_pairwise(c, sample_seeds(c, cfg).indices));
  }
  std::sort(fps.begin(), fps.end());
  std::sort(rnd.begin(), rnd.end());
  EXPECT_GE(fps[10], rnd[10]);
}

TEST(SampleSeeds, CarriesViewRows) {
  const PointCloud c = graspness_cloud({0.05, 0.5, 0.2, 0.08});
  Eigen::MatrixXd v(4, 2);
  v << 0, 1, 2, 3, 4, 5, 6, 7;
  SamplingConfig cfg;
  cfg.seeds = 2;
  const SeedSet s = sample_seeds(c, cfg, &v);
  ASSERT_EQ(s.view_graspness.rows(), 2);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(s.view_graspness.row(static_cast<Eigen::Index>(k)), v.row(static_cast<Eigen::Index>(s.indices[k])));
    EXPECT_EQ(s.graspness[k], c.scalars.at("graspness")[s.indices[k]]);
  }
  Eigen::MatrixXd wrong(3, 2);
  EXPECT_THROW(sample_seeds(c, cfg, &wrong), InvalidArgument);
}

TEST(SelectView, OneHotTopAndNormal) {
  const auto views = fibonacci_views(10);
  std::mt19937_64 rng(0);
  std::vector<double> one_hot(10, 0.0);
  one_hot[7] = 0.4;
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(select_view(one_hot, ViewStrategy::Pvs, Vec3::UnitZ(), views, rng), 7);
  const std::vector<double> tied{0.1, 0.9, 0.9, 0.2};
  EXPECT_EQ(select_view(tied, ViewStrategy::Top1, Vec3::UnitZ(), views, rng), 1);
  // Normal +z: the inward approach is -z, the last lattice direction.
  EXPECT_EQ(select_view(one_hot, ViewStrategy::Normal, Vec3::UnitZ(), views, rng), 9);
  EXPECT_EQ(select_view(one_hot, ViewStrategy::Normal, -Vec3::UnitZ(), views, rng), 0);
  EXPECT_EQ(parse_view_strategy("top-1"), ViewStrategy::Top1);
  EXPECT_THROW(parse_view_strategy("best"), InvalidArgument);
  EXPECT_EQ(parse_point_strategy("graspable-fps"), PointStrategy::GraspableFps);
  EXPECT_THROW(parse_point_strategy("grid"), InvalidArgument);
}

TEST(SelectView, PvsZeroVectorIsUniform) {
  const auto views = fibonacci_views(10);
  std::mt19937_64 rng(1);
  const std::vector<double> zeros(10, 0.0);
  std::vector<long> counts(10, 0);
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(select_view(zeros, ViewStrategy::Pvs, Vec3::UnitZ(), views, rng))];
  EXPECT_GT(chi_square_p(counts, std::vector<double>(10, 0.1), draws), 0.01);
}

TEST(SelectView, PvsFollowsNormalizedScores) {
  const auto views = fibonacci_views(10);
  std::mt19937_64 fixture_rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int f = 0; f < 10; ++f) {
    std::vector<double> s(10);
    for (double& x : s) x = u(fixture_rng) < 0.2 ? 0.0 : u(fixture_rng);
    double sum = 0.0;
    for (double x : s) sum += x;
    std::vector<double> p;
    for (double x : s) p.push_back(x / sum);
    std::mt19937_64 rng(static_cast<std::uint64_t>(f));
    std::vector<long> counts(10, 0);
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(select_view(s, ViewStrategy::Pvs, Vec3::UnitZ(), views, rng))];
    EXPECT_GT(chi_square_p(counts, p, draws), 0.01) << "fixture " << f;
    double tv = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      if (p[j] == 0.0) {
        EXPECT_EQ(counts[j], 0);
      }
      tv += std::abs(static_cast<double>(counts[j]) / draws - p[j]);
    }
    EXPECT_LT(0.5 * tv, 0.02);
  }
}

TEST(BestGrasp, SphereThroughCenterMatchesGridMaximum) {
  Table none;
  none.enabled = false;
  const Scene scene = assemble_scene({{Sphere{0.03}, make_transform(Mat3::Identity(), Vec3(0, 0, 0.1)), 0}}, none,
                                     0.004, 0);
  const SceneContext context(scene);
  GraspnessParams params;
  const Vec3 seed = scene.full_cloud.positions[0];
  const UnitVec3 view = UnitVec3::normalized(Vec3(0, 0, 0.1) - seed);
  const auto g = best_grasp_at_seed(context, seed, 0, view, params);
  ASSERT_TRUE(g.has_value());
  const naive::Params np = fixtures::to_naive(params);
  const auto& pts = scene.full_cloud.positions;
  const auto& nrm = scene.full_cloud.normals;
  double best = -1.0;
  int best_a = -1, best_d = -1;
  for (int a = 0; a < params.grid.angles; ++a) {
    const GraspFrame f(seed, view, params.grid.angle(a));
    for (int d = 0; d < params.grid.depth_count(); ++d) {
      const double depth = params.grid.depths[static_cast<std::size_t>(d)];
      const naive::Contacts c = naive::contacts(f, depth, pts, params.gripper, np.band);
      const double q = naive::score(naive::mu_star(c, pts, nrm, f.closing()), np.mu_min, np.mu_max);
      if (q > 0.0 && !naive::collides(f, depth, c, pts, params.gripper) && q > best + 1e-12) {
        best = q;
        best_a = a;
        best_d = d;
      }
    }
  }
  EXPECT_NEAR(g->score, best, 1e-9);
  EXPECT_EQ(g->angle_index, best_a);
  EXPECT_EQ(g->depth_index, best_d);
  EXPECT_LE(g->width, params.gripper.max_width);
  EXPECT_GE(g->angle, 0.0);
  EXPECT_LT(g->angle, std::numbers::pi);
}

TEST(BestGrasp, SingleFeasibleCellAndNone) {
  // A one-cell grid on a thin slab: that cell comes back when feasible.
  Table none;
  none.enabled = false;
  std::vector<ObjectInstance> objs{{Box{Vec3(0.002, 0.03, 0.03)}, make_transform(Mat3::Identity(), Vec3(0, 0, 0.5)), 0}};
  const Scene scene = assemble_scene(objs, none, 0.004, 0);
  const SceneContext context(scene);
  GraspnessParams params;
  params.grid.angles = 1;
  params.grid.depths = {0.005};
  const Vec3 seed(0, 0, 0.53);
  const auto g = best_grasp_at_seed(context, seed, 0, UnitVec3::from_unit(-Vec3::UnitZ()), params);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->angle_index, 0);
  EXPECT_EQ(g->depth_index, 0);
  EXPECT_FALSE(best_grasp_at_seed(context, Vec3(1, 1, 1), 0, UnitVec3::from_unit(-Vec3::UnitZ()), params));
  EXPECT_FALSE(best_grasp_at_seed(context, seed, -1, UnitVec3::from_unit(-Vec3::UnitZ()), params));
  EXPECT_FALSE(best_grasp_at_seed(context, seed, 5, UnitVec3::from_unit(-Vec3::UnitZ()), params));
}

TEST(GraspNms, Examples) {
  const GraspPose a = pose(Vec3::Zero(), Vec3::UnitZ(), 0.0, 0.9);
  EXPECT_EQ(grasp_nms(std::vector<GraspPose>{a}).size(), 1u);
  EXPECT_EQ(grasp_nms(std::vector<GraspPose>{a, a}).size(), 1u);
  // Close but rotated by 90 degrees survives.
  const GraspPose b = pose(Vec3(0.01, 0, 0), Vec3::UnitZ(), std::numbers::pi / 2, 0.8);
  EXPECT_EQ(grasp_nms(std::vector<GraspPose>{a, b}).size(), 2u);
}

TEST(GraspNms, ThreeClusters) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Vec3> centers{Vec3(0, 0, 0), Vec3(0.2, 0, 0), Vec3(0, 0.2, 0)};
  // Views stay away from -z, where the in-plane reference twists quickly.
  const std::vector<Vec3> views{Vec3(1, 0, -0.3), Vec3(1, 0, 0), Vec3(0, 1, 1)};
  std::vector<GraspPose> grasps;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = static_cast<std::size_t>(i % 3);
    // Jitter of at most 1 cm and well under 10 degrees.
    const Vec3 dc = Vec3(u(rng), u(rng), u(rng)).normalized() * 0.01 * std::abs(u(rng));
    const Vec3 dv = Vec3(u(rng), u(rng), u(rng)) * 0.04;
    grasps.push_back(pose(centers[k] + dc, views[k].normalized() + dv, 0.5 + 0.05 * u(rng), 1.0 - 0.001 * i));
  }
  const auto kept = grasp_nms(grasps, 0.03, std::numbers::pi / 6);
  EXPECT_EQ(kept.size(), 3u);
  for (std::size_t i = 1; i < kept.size(); ++i) EXPECT_GE(kept[i - 1].score, kept[i].score);
}

TEST(GraspNms, SurvivorsRespectThresholds) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<GraspPose> grasps;
  for (int i = 0; i < 300; ++i) {
    grasps.push_back(pose(Vec3(u(rng), u(rng), u(rng)) * 0.05, Vec3(u(rng), u(rng), u(rng)) + Vec3(0, 0, 0.01),
                          std::abs(u(rng)) * 3.0, std::abs(u(rng))));
  }
  sort_by_score(grasps);
  const auto kept = grasp_nms(grasps);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      EXPECT_FALSE((kept[i].center - kept[j].center).norm() < 0.03 &&
                   rotation_distance(kept[i], kept[j]) < std::numbers::pi / 6);
    }
    if (i > 0) {
      EXPECT_GE(kept[i - 1].score, kept[i].score);
    }
  }
}

TEST(CollisionFilter, MatchesPerGraspCheckAndIdempotent) {
  const Scene scene = fixtures::clutter_scene(9);
  const SpatialIndex index(scene.full_cloud.positions);
  const GripperModel gripper;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<GraspPose> grasps;
  for (int i = 0; i < 200; ++i) {
    const Vec3 c = scene.full_cloud.positions[static_cast<std::size_t>(i * 13) % scene.object_point_count()];
    grasps.push_back(pose(c, Vec3(u(rng), u(rng), u(rng)), std::abs(u(rng)) * 3.0, 0.5));
  }
  const auto kept = collision_filter(grasps, index, gripper);
  std::size_t expect = 0;
  for (const GraspPose& g : grasps) expect += check_collision(g.bodies(gripper), index) ? 0 : 1;
  EXPECT_EQ(kept.size(), expect);
  EXPECT_GT(kept.size(), 0u);
  EXPECT_LT(kept.size(), grasps.size());
  EXPECT_EQ(collision_filter(kept, index, gripper).size(), kept.size());
  EXPECT_EQ(collision_filter(grasps, SpatialIndex(), gripper).size(), grasps.size());
}
