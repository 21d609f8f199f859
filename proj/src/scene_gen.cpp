#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "graspness/scene.hpp"

namespace graspness {

namespace {

struct Candidate {
  ObjectInstance instance;
  double footprint;  // radius of a circle covering the object's xy shadow
};

Candidate draw_object(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double yaw = range(0.0, 2.0 * std::numbers::pi);
  const Mat3 rz = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  Candidate c;
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0) {
    const Vec3 h(range(0.015, 0.04), range(0.015, 0.04), range(0.015, 0.04));
    c.instance.shape = Box{h};
    c.instance.pose = make_transform(rz, Vec3(0.0, 0.0, h.z()));
    c.footprint = std::hypot(h.x(), h.y());
  } else if (kind == 1) {
    const double r = range(0.015, 0.035);
    c.instance.shape = Sphere{r};
    c.instance.pose = make_transform(rz, Vec3(0.0, 0.0, r));
    c.footprint = r;
  } else {
    const double r = range(0.015, 0.035);
    const double hh = range(0.02, 0.06);
    c.instance.shape = Cylinder{r, hh};
    if (unit(rng) < 0.5) {
      c.instance.pose = make_transform(rz, Vec3(0.0, 0.0, hh));
      c.footprint = r;
    } else {
      const Mat3 lie = Eigen::AngleAxisd(0.5 * std::numbers::pi, Vec3::UnitX()).toRotationMatrix();
      c.instance.pose = make_transform(rz * lie, Vec3(0.0, 0.0, r));
      c.footprint = std::hypot(r, hh);
    }
  }
  return c;
}

}  // namespace

std::vector<ObjectInstance> random_instances(std::uint64_t seed, const RandomSceneOptions& options) {
  if (options.objects < -1) throw InvalidArgument("random scene: object count must be >= 0");
  if (!(options.placement_radius > 0.0) || options.max_attempts < 1) {
    throw InvalidArgument("random scene: invalid placement options");
  }
  std::mt19937_64 rng(seed);
  const int count = options.objects >= 0 ? options.objects : std::uniform_int_distribution<int>(3, 8)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<ObjectInstance> placed;
  std::vector<std::pair<Vec3, double>> circles;
  int attempts = 0;
  while (static_cast<int>(placed.size()) < count) {
    if (attempts++ >= options.max_attempts) {
      throw InvalidArgument("random scene: could not place " + std::to_string(count) + " objects in " +
                            std::to_string(options.max_attempts) + " attempts");
    }
    Candidate c = draw_object(rng);
    const double rho = options.placement_radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Vec3 xy(rho * std::cos(phi), rho * std::sin(phi), 0.0);
    bool clear = true;
    for (const auto& [center, radius] : circles) {
      if ((center - xy).norm() < radius + c.footprint + options.margin) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    c.instance.pose.translation() += xy;
    c.instance.id = static_cast<int>(placed.size());
    circles.emplace_back(xy, c.footprint);
    placed.push_back(c.instance);
  }
  return placed;
}

}  // namespace graspness
