#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "graspness/core.hpp"
#include "graspness/engine.hpp"
#include "graspness/scene.hpp"
#include "naive_reference.hpp"

namespace fixtures {

using graspness::Vec3;

struct Surface {
  std::string name;
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
};

/// Small sampled primitives (at most 200 points each).
std::vector<Surface> toy_surfaces();

/// V=8, A=4, D=2 grid with default gripper and quality settings.
graspness::GraspnessParams toy_params();

naive::Params to_naive(const graspness::GraspnessParams& params);

/// Two small objects resting on a small table, at most 200 object points.
graspness::Scene toy_scene(std::uint64_t seed);

/// Random clutter on the default table.
graspness::Scene clutter_scene(std::uint64_t seed);

graspness::RigidTransform random_motion(std::mt19937_64& rng);

/// V=60 with the default A, D, gripper and quality settings.
graspness::GraspnessParams bench_params();

}  // namespace fixtures
