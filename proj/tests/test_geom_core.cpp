#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "fixtures.hpp"
#include "graspness/point_sampling.hpp"
#include "graspness/spatial_index.hpp"

using namespace graspness;

TEST(UnitVec3, NormalizesAndRejectsZero) {
  const UnitVec3 v = UnitVec3::normalized(Vec3(3, 4, 0));
  EXPECT_NEAR(v.vec().norm(), 1.0, 1e-12);
  EXPECT_THROW(UnitVec3::normalized(Vec3::Zero()), InvalidArgument);
  EXPECT_THROW(UnitVec3::from_unit(Vec3(2, 0, 0)), InvalidArgument);
}

TEST(RigidTransform, RotationsAreRigidAndCompositionAssociative) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const RigidTransform a = fixtures::random_motion(rng);
    const RigidTransform b = fixtures::random_motion(rng);
    const RigidTransform c = fixtures::random_motion(rng);
    EXPECT_TRUE(is_rigid(a));
    const RigidTransform lhs = (a * b) * c;
    const RigidTransform rhs = a * (b * c);
    EXPECT_LT((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PointCloud, ValidateChecksChannels) {
  PointCloud c;
  c.positions = {Vec3::Zero(), Vec3::UnitX()};
  c.object_id = {0, -1};
  c.objectness = {1, 0};
  EXPECT_NO_THROW(c.validate());
  c.objectness = {0, 0};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.objectness = {1};
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(FibonacciSphere, SinglePointIsPlusX) {
  const auto v = fibonacci_sphere<double>(1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v[0].x(), 1.0);
  EXPECT_DOUBLE_EQ(v[0].y(), 0.0);
  EXPECT_DOUBLE_EQ(v[0].z(), 0.0);
}

TEST(FibonacciSphere, UnitNormAndDeterministic) {
  for (int n : {1, 2, 7, 60, 300, 1001}) {
    const auto a = fibonacci_sphere<double>(n);
    const auto b = fibonacci_sphere<double>(n);
    ASSERT_EQ(a.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(a[k].norm(), 1.0, 1e-12);
      EXPECT_EQ(a[k], b[k]);
    }
  }
}

TEST(FibonacciSphere, MinimumAngleAt300) {
  const auto v = fibonacci_sphere<double>(300);
  double min_angle = std::numbers::pi;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      min_angle = std::min(min_angle, std::acos(std::clamp(v[i].dot(v[j]), -1.0, 1.0)));
    }
  }
  EXPECT_GE(min_angle * 180.0 / std::numbers::pi, 7.0);
}

TEST(FibonacciSphere, ZeroCountThrows) { EXPECT_THROW(fibonacci_sphere<double>(0), InvalidArgument); }

TEST(FarthestPointSampling, LineExamples) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(i, 0, 0);
  EXPECT_EQ(farthest_point_sampling(pts, 2, 0), (std::vector<std::size_t>{0, 9}));
  EXPECT_EQ(farthest_point_sampling(pts, 3, 0), (std::vector<std::size_t>{0, 9, 4}));
  auto all = farthest_point_sampling(pts, 10, 0);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  EXPECT_THROW(farthest_point_sampling(pts, 11, 0), InvalidArgument);
  EXPECT_THROW(farthest_point_sampling(pts, 2, 10), InvalidArgument);
}

TEST(FarthestPointSampling, EveryPrefixIsGreedyOptimal) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {17u, 128u, 512u}) {
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
    const std::size_t m = std::min<std::size_t>(64, n);
    const auto sel = farthest_point_sampling(pts, m, 0);
    for (std::size_t step = 1; step < m; ++step) {
      std::set<std::size_t> chosen(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(step));
      double best = -1.0;
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen.count(i)) continue;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t c : chosen) d = std::min(d, (pts[i] - pts[c]).squaredNorm());
        if (d > best) {
          best = d;
          best_i = i;
        }
      }
      ASSERT_EQ(sel[step], best_i) << "n=" << n << " step=" << step;
    }
  }
}

TEST(VoxelDownsample, Examples) {
  PointCloud c;
  c.positions = {Vec3(0, 0, 0), Vec3(0.001, 0, 0)};
  PointCloud d = voxel_downsample(c, 0.005);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d.positions[0].x(), 0.0005, 1e-15);
  c.positions = {Vec3(0, 0, 0), Vec3(0.006, 0, 0)};
  EXPECT_EQ(voxel_downsample(c, 0.005).size(), 2u);
  EXPECT_THROW(voxel_downsample(c, 0.0), InvalidArgument);
  EXPECT_THROW(voxel_downsample(c, -1.0), InvalidArgument);
}

TEST(VoxelDownsample, CountMatchesHashSetOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  for (int i = 0; i < 10000; ++i) c.positions.emplace_back(u(rng), u(rng), u(rng));
  std::set<std::tuple<long, long, long>> voxels;
  for (const Vec3& p : c.positions) {
    voxels.insert({static_cast<long>(std::floor(p.x() / 0.005)), static_cast<long>(std::floor(p.y() / 0.005)),
                   static_cast<long>(std::floor(p.z() / 0.005))});
  }
  EXPECT_EQ(voxel_downsample(c, 0.005).size(), voxels.size());
}

TEST(VoxelDownsample, ChannelsAndMajorityVote) {
  PointCloud c;
  c.positions = {Vec3(0.001, 0, 0), Vec3(0.002, 0, 0), Vec3(0.003, 0, 0), Vec3(0.004, 0, 0)};
  c.object_id = {2, 1, 2, 1};
  c.objectness = {1, 1, 1, 1};
  c.scalars["graspness"] = {0.0, 1.0, 0.5, 0.5};
  const PointCloud d = voxel_downsample(c, 0.005);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.object_id[0], 1);  // tie resolves to the lower id
  EXPECT_DOUBLE_EQ(d.scalars.at("graspness")[0], 0.5);
  EXPECT_NO_THROW(d.validate());
}

TEST(VoxelDownsample, Idempotent) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  PointCloud c;
  for (int i = 0; i < 5000; ++i) c.positions.emplace_back(u(rng), u(rng), u(rng));
  const PointCloud once = voxel_downsample(c, 0.005);
  const PointCloud twice = voxel_downsample(once, 0.005);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.positions[i], twice.positions[i]);
}

TEST(SpatialIndex, SmallExamplesAndTies) {
  const std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(1, 0, 0)};
  const SpatialIndex index(pts);
  const Neighbor n = index.nearest(Vec3(0.1, 0, 0));
  EXPECT_EQ(n.index, 0u);
  EXPECT_NEAR(n.distance, 0.1, 1e-15);
  EXPECT_EQ(index.nearest(Vec3(0.5, 0, 0)).index, 0u);
  EXPECT_THROW(SpatialIndex().nearest(Vec3::Zero()), InvalidState);
}

TEST(SpatialIndex, MatchesLinearScan) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts(1000);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  // Duplicates exercise the tie rule.
  for (int i = 0; i < 50; ++i) pts.push_back(pts[static_cast<std::size_t>(i * 7)]);
  const SpatialIndex index(pts);
  for (int q = 0; q < 100; ++q) {
    const Vec3 query = q % 10 == 0 ? pts[static_cast<std::size_t>(q)] : Vec3(u(rng), u(rng), u(rng));
    const auto fast = index.knn(query, 5);
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) all.push_back({(pts[i] - query).squaredNorm(), i});
    std::sort(all.begin(), all.end());
    ASSERT_EQ(fast.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_EQ(fast[k].index, all[k].second);
      EXPECT_EQ(fast[k].distance, std::sqrt(all[k].first));
    }
    const auto radius = index.radius_search(query, 0.1);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if ((pts[i] - query).squaredNorm() <= 0.01) expect.push_back(i);
    }
    EXPECT_EQ(radius, expect);
  }
}

TEST(EstimateNormals, PlaneGrid) {
  PointCloud c;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) c.positions.emplace_back(0.01 * i, 0.01 * j, 0.0);
  }
  const PointCloud n = estimate_normals(c, 8, Vec3(0, 0, 1));
  for (std::size_t i = 0; i < n.size(); ++i) {
    ASSERT_TRUE(n.normal_is_valid(i));
    EXPECT_LT((n.normals[i] - Vec3(0, 0, 1)).norm(), 1e-6);
  }
}

TEST(EstimateNormals, SphereIsRadial) {
  PointCloud c;
  for (const Vec3& v : fibonacci_sphere<double>(2000)) c.positions.push_back(v);
  const PointCloud n = estimate_normals(c, 10, Vec3(0, 0, 100));
  int checked = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    // Orientation toward a far reference is only meaningful on the near side.
    if (c.positions[i].z() < 0.2) continue;
    ++checked;
    const double angle = std::acos(std::clamp(n.normals[i].dot(c.positions[i].normalized()), -1.0, 1.0));
    EXPECT_LT(angle * 180.0 / std::numbers::pi, 5.0);
  }
  EXPECT_GT(checked, 500);
}

TEST(EstimateNormals, CollinearIsFlaggedInvalid) {
  PointCloud c;
  c.positions = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  const PointCloud n = estimate_normals(c, 3, Vec3(0, 0, 1));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_FALSE(n.normal_is_valid(i));
  EXPECT_THROW(estimate_normals(c, 4, Vec3::Zero()), InvalidArgument);
}
