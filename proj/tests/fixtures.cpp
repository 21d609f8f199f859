#include "fixtures.hpp"

#include <stdexcept>

#include "graspness/point_sampling.hpp"
#include "graspness/shapes.hpp"

namespace fixtures {

using namespace graspness;

namespace {

Surface sampled(const std::string& name, const Shape& shape, double spacing, const RigidTransform& pose) {
  const PointCloud cloud = sample_surface(shape, spacing, 7);
  Surface s{name, {}, {}};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    s.points.push_back(pose * cloud.positions[i]);
    s.normals.push_back(pose.linear() * cloud.normals[i]);
  }
  if (s.points.size() > 200) throw std::logic_error("toy surface '" + name + "' is too large");
  return s;
}

}  // namespace

std::vector<Surface> toy_surfaces() {
  const RigidTransform tilt = make_transform(
      Eigen::AngleAxisd(0.4, Vec3(1, 2, 3).normalized()).toRotationMatrix(), Vec3(0.01, -0.02, 0.03));
  return {
      sampled("sphere", Sphere{0.03}, 0.008, RigidTransform::Identity()),
      sampled("box", Box{Vec3(0.02, 0.015, 0.01)}, 0.006, tilt),
      sampled("cylinder", Cylinder{0.018, 0.025}, 0.008, tilt),
      sampled("plate", Box{Vec3(0.03, 0.025, 0.004)}, 0.008, RigidTransform::Identity()),
  };
}

GraspnessParams toy_params() {
  GraspnessParams p;
  p.grid.views = 8;
  p.grid.angles = 4;
  p.grid.depths = {0.01, 0.03};
  return p;
}

naive::Params to_naive(const GraspnessParams& params) {
  naive::Params n;
  n.views = fibonacci_views(params.grid.views);
  n.angles = params.grid.angles;
  n.depths = params.grid.depths;
  n.gripper = params.gripper;
  n.mu_min = params.quality.mu_min;
  n.mu_max = params.quality.mu_max;
  n.threshold = params.quality.score_threshold;
  n.band = params.quality.contact_band;
  return n;
}

Scene toy_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> yaw(0.0, 6.283185307179586);
  std::vector<ObjectInstance> objects;
  objects.push_back({Box{Vec3(0.02, 0.015, 0.012)},
                     make_transform(Eigen::AngleAxisd(yaw(rng), Vec3::UnitZ()).toRotationMatrix(), Vec3(-0.03, 0, 0.012)),
                     0});
  objects.push_back({Sphere{0.018}, make_transform(Mat3::Identity(), Vec3(0.03, 0.005, 0.018)), 1});
  Table table;
  table.radius = 0.09;
  Scene scene = assemble_scene(std::move(objects), table, 0.01, seed);
  if (scene.object_point_count() > 200) throw std::logic_error("toy scene is too large");
  return scene;
}

Scene clutter_scene(std::uint64_t seed) { return assemble_scene(random_instances(seed), Table{}, 0.005, seed); }

RigidTransform random_motion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
  return make_transform(Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix(), Vec3(n(rng), n(rng), n(rng)) * 0.3);
}

GraspnessParams bench_params() {
  GraspnessParams p;
  p.grid.views = 60;
  return p;
}

}  // namespace fixtures
