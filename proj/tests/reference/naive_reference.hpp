#pragma once

// Straightforward nested-loop graspness, kept free of the library's spatial
// indices, caching and multi-depth shortcuts. Used as the test oracle.

#include <cstddef>
#include <span>
#include <vector>

#include "graspness/core.hpp"
#include "graspness/gripper.hpp"
#include "graspness/quality.hpp"

namespace naive {

using graspness::Vec3;

struct Params {
  std::vector<graspness::UnitVec3> views;
  int angles = 12;
  std::vector<double> depths;
  graspness::GripperModel gripper;
  double mu_min = 0.1;
  double mu_max = 1.0;
  double threshold = 0.0;
  double band = 0.01;
};

struct Contacts {
  bool valid = false;
  double lo = 0.0, hi = 0.0;
  std::size_t left = 0, right = 0;
};

struct Landscape {
  std::vector<double> point;              // N
  std::vector<std::vector<double>> view;  // N x V
};

/// Contacts straight from the definition, for one frame and one depth.
Contacts contacts(const graspness::GraspFrame& frame, double depth, std::span<const Vec3> points,
                  const graspness::GripperModel& g, double band);

/// Minimum friction coefficient of a contact pair, from the contact angles.
double mu_star(const Contacts& c, std::span<const Vec3> points, std::span<const Vec3> normals,
               const Vec3& closing_axis);

double score(double mu, double mu_min, double mu_max);

/// True when a point of `blockers` lies inside a finger or the palm and not
/// in the closing region of the jaw placed on `c`.
bool collides(const graspness::GraspFrame& frame, double depth, const Contacts& c, std::span<const Vec3> blockers,
              const graspness::GripperModel& g);

/// Feasible-ratio landscape of `object` points; with `blockers` non-empty,
/// candidates also have to be collision-free against them.
Landscape graspness(std::span<const Vec3> object, std::span<const Vec3> normals, std::span<const Vec3> blockers,
                    const Params& params);

/// Same as graspness, for the listed object points only (rows in list order).
Landscape graspness_at(std::span<const Vec3> object, std::span<const Vec3> normals, std::span<const Vec3> blockers,
                       const Params& params, std::span<const std::size_t> centers);

/// Mean-score landscape (score of feasible candidates, zero elsewhere).
Landscape mean_score(std::span<const Vec3> object, std::span<const Vec3> normals, std::span<const Vec3> blockers,
                     const Params& params);

}  // namespace naive
