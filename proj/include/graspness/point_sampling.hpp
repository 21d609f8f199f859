#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "graspness/core.hpp"

namespace graspness {

/// Golden-angle Fibonacci lattice of `count` directions on the unit sphere:
/// z_k = 1 - (2k+1)/count, phi_k = k * pi * (3 - sqrt 5).
template <typename Scalar = double>
std::vector<Vector3<Scalar>> fibonacci_sphere(int count) {
  if (count < 1) throw InvalidArgument("fibonacci_sphere: count must be >= 1");
  const Scalar golden_angle = std::numbers::pi_v<Scalar> * (Scalar(3) - std::sqrt(Scalar(5)));
  std::vector<Vector3<Scalar>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const Scalar z = Scalar(1) - Scalar(2 * k + 1) / Scalar(count);
    const Scalar r = std::sqrt(std::max(Scalar(0), Scalar(1) - z * z));
    const Scalar phi = Scalar(k) * golden_angle;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

/// Fibonacci lattice wrapped as unit directions.
inline std::vector<UnitVec3> fibonacci_views(int count) {
  std::vector<UnitVec3> views;
  for (const Vec3& v : fibonacci_sphere<double>(count)) views.push_back(UnitVec3::normalized(v));
  return views;
}

/// Greedy farthest point sampling. Each new index maximizes the minimum
/// squared distance to the already selected set; ties go to the lowest index.
template <typename Scalar>
std::vector<std::size_t> farthest_point_sampling(std::span<const Vector3<Scalar>> points,
                                                 std::size_t count, std::size_t start_index = 0) {
  const std::size_t n = points.size();
  if (count < 1 || count > n) throw InvalidArgument("farthest_point_sampling: need 1 <= count <= |points|");
  if (start_index >= n) throw InvalidArgument("farthest_point_sampling: start index out of range");

  std::vector<std::size_t> selected;
  selected.reserve(count);
  std::vector<Scalar> min_d2(n, std::numeric_limits<Scalar>::infinity());
  std::vector<char> taken(n, 0);
  std::size_t current = start_index;
  for (std::size_t step = 0; step < count; ++step) {
    selected.push_back(current);
    taken[current] = 1;
    if (step + 1 == count) break;
    const Vector3<Scalar> p = points[current];
    Scalar best = -1;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const Scalar d2 = (points[i] - p).squaredNorm();
      if (d2 < min_d2[i]) min_d2[i] = d2;
      if (min_d2[i] > best) {
        best = min_d2[i];
        best_index = i;
      }
    }
    current = best_index;
  }
  return selected;
}

template <typename Scalar>
std::vector<std::size_t> farthest_point_sampling(const std::vector<Vector3<Scalar>>& points,
                                                 std::size_t count, std::size_t start_index = 0) {
  return farthest_point_sampling(std::span<const Vector3<Scalar>>(points), count, start_index);
}

/// One point per occupied voxel of edge `voxel_size`, at the centroid of
/// its members. Scalar channels and normals are averaged; object ids take a
/// majority vote with the lowest id winning ties. Output is ordered by
/// voxel key.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

/// Per-point normals from the smallest-eigenvalue eigenvector of the
/// k-nearest-neighbour covariance, oriented so normal.(reference - p) >= 0.
/// Neighbourhoods of rank < 2 get normal_valid = 0.
PointCloud estimate_normals(const PointCloud& cloud, std::size_t k_neighbors, const Vec3& reference);

}  // namespace graspness
