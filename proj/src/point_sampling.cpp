#include "graspness/point_sampling.hpp"

#include <algorithm>
#include <array>
#include <map>

#include <Eigen/Eigenvalues>

#include "graspness/spatial_index.hpp"

namespace graspness {

namespace {

using VoxelKey = std::array<std::int64_t, 3>;

VoxelKey voxel_key(const Vec3& p, double voxel_size) {
  return {static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
          static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
          static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
}

template <typename T>
T majority_vote(const std::vector<T>& values, const std::vector<std::size_t>& members) {
  std::map<T, std::size_t> counts;
  for (std::size_t m : members) ++counts[values[m]];
  T best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {  // ascending, so ties keep the lowest
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
  if (!(voxel_size > 0.0)) throw InvalidArgument("voxel_downsample: voxel size must be positive");
  cloud.validate();

  std::map<VoxelKey, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    buckets[voxel_key(cloud.positions[i], voxel_size)].push_back(i);
  }

  PointCloud out;
  const std::size_t m = buckets.size();
  out.positions.reserve(m);
  if (cloud.has_normals()) out.normals.reserve(m);
  for (const auto& [name, _] : cloud.scalars) out.scalars[name].reserve(m);
  std::vector<std::uint8_t> valid;

  for (const auto& [key, members] : buckets) {
    Vec3 sum = Vec3::Zero();
    for (std::size_t i : members) sum += cloud.positions[i];
    out.positions.push_back(sum / static_cast<double>(members.size()));

    if (cloud.has_normals()) {
      Vec3 nsum = Vec3::Zero();
      for (std::size_t i : members) {
        if (cloud.normal_is_valid(i)) nsum += cloud.normals[i];
      }
      const double len = nsum.norm();
      const bool ok = len > 1e-12;
      out.normals.push_back(ok ? Vec3(nsum / len) : Vec3::UnitZ());
      valid.push_back(ok ? 1 : 0);
    }
    for (const auto& [name, values] : cloud.scalars) {
      double s = 0.0;
      for (std::size_t i : members) s += values[i];
      out.scalars[name].push_back(s / static_cast<double>(members.size()));
    }
    if (cloud.has_object_id()) out.object_id.push_back(majority_vote(cloud.object_id, members));
    if (!cloud.objectness.empty()) {
      if (cloud.has_object_id()) {
        out.objectness.push_back(out.object_id.back() >= 0 ? 1 : 0);
      } else {
        out.objectness.push_back(majority_vote(cloud.objectness, members));
      }
    }
  }
  const bool all_valid = std::all_of(valid.begin(), valid.end(), [](std::uint8_t v) { return v != 0; });
  if (!cloud.normal_valid.empty() || !all_valid) out.normal_valid = std::move(valid);
  return out;
}

PointCloud estimate_normals(const PointCloud& cloud, std::size_t k_neighbors, const Vec3& reference) {
  if (k_neighbors < 3) throw InvalidArgument("estimate_normals: k must be at least 3");
  if (cloud.size() < k_neighbors) throw InvalidArgument("estimate_normals: cloud smaller than k");

  PointCloud out = cloud;
  out.normals.assign(cloud.size(), Vec3::UnitZ());
  out.normal_valid.assign(cloud.size(), 1);
  const SpatialIndex index(cloud.positions);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(cloud.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbrs = index.knn(cloud.positions[i], k_neighbors);
    Vec3 mean = Vec3::Zero();
    for (const auto& n : nbrs) mean += cloud.positions[n.index];
    mean /= static_cast<double>(nbrs.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& n : nbrs) {
      const Vec3 d = cloud.positions[n.index] - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    const Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
    const Vec3 evals = solver.eigenvalues();  // ascending
    // Rank < 2: the neighbourhood is a point or a line and has no plane.
    if (!(evals[2] > 0.0) || evals[1] <= 1e-10 * evals[2]) {
      out.normal_valid[i] = 0;
      continue;
    }
    Vec3 n = solver.eigenvectors().col(0).normalized();
    if (n.dot(reference - cloud.positions[i]) < 0.0) n = -n;
    out.normals[i] = n;
  }
  return out;
}

}  // namespace graspness
